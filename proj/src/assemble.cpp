#include "a2rlab/assemble.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "a2rlab/errors.hpp"

namespace a2rlab {

SublevelDecomposition classify_nodes(const PotentialField& v, double level,
                                     const ClassifyOptions& opts) {
  if (level > 0.0 && !opts.allow_positive_level) {
    throw PreconditionError("energy level must be nonpositive (set allow_positive_level to explore)");
  }
  const GridSpec& grid = v.grid;
  const Index n = grid.node_count();

  // 0 = outside, 1 = interior, 2 = boundary
  std::vector<char> kind(static_cast<std::size_t>(n), 0);
  SublevelDecomposition dec;
  dec.grid = grid;
  dec.level = level;
  for (Index i = 0; i < n; ++i) {
    if (v.values[i] < level) {
      kind[i] = 1;
      dec.interior.push_back(i);
    }
  }
  if (dec.interior.empty()) throw EmptySublevel("sublevel set {V < e} is empty");

  for (Index i : dec.interior) {
    grid.for_each_neighbor(i, [&](Index j) {
      if (kind[j] == 0) kind[j] = 2;
    });
  }
  for (Index i = 0; i < n; ++i) {
    if (kind[i] == 2) dec.boundary.push_back(i);
  }

  std::vector<Index> local(static_cast<std::size_t>(n), -1);
  for (Index k = 0; k < dec.n_interior(); ++k) local[dec.interior[k]] = k;
  for (Index k = 0; k < dec.n_boundary(); ++k) local[dec.boundary[k]] = dec.n_interior() + k;

  for (Index i : dec.interior) {
    grid.for_each_neighbor(i, [&](Index j) {
      if (kind[j] == 2 || (kind[j] == 1 && j > i)) dec.edges.push_back({local[i], local[j]});
    });
  }
  std::sort(dec.edges.begin(), dec.edges.end());

  // Components of I through interior-interior edges; each needs a boundary node.
  const Index ni = dec.n_interior();
  dec.component_of.assign(static_cast<std::size_t>(ni), -1);
  std::vector<char> touches_boundary;
  for (Index start = 0; start < ni; ++start) {
    if (dec.component_of[start] >= 0) continue;
    const int id = dec.component_count++;
    touches_boundary.push_back(0);
    std::queue<Index> queue;
    queue.push(start);
    dec.component_of[start] = id;
    while (!queue.empty()) {
      const Index a = queue.front();
      queue.pop();
      grid.for_each_neighbor(dec.interior[a], [&](Index j) {
        if (kind[j] == 2) {
          touches_boundary[id] = 1;
        } else if (kind[j] == 1 && dec.component_of[local[j]] < 0) {
          dec.component_of[local[j]] = id;
          queue.push(local[j]);
        }
      });
    }
  }
  for (int c = 0; c < dec.component_count; ++c) {
    if (!touches_boundary[c]) {
      throw DetachedComponent("component " + std::to_string(c) +
                              " of the sublevel set has no boundary node");
    }
  }

  // Extreme points of I u B lie in B or on the box walls: an interior node off
  // the walls is the midpoint of two of its neighbours, all of which are in I u B.
  std::vector<Point> extreme;
  for (Index b : dec.boundary) extreme.push_back(grid.coordinate(b));
  for (Index i : dec.interior) {
    if (grid.on_box_boundary(i)) extreme.push_back(grid.coordinate(i));
  }
  double diam = 0.0;
  for (std::size_t a = 0; a < extreme.size(); ++a) {
    for (std::size_t b = a + 1; b < extreme.size(); ++b) diam = std::max(diam, distance(extreme[a], extreme[b]));
  }
  dec.diameter = diam;
  return dec;
}

AssembledPencil assemble_pencil(const SublevelDecomposition& dec, const PotentialField& v,
                                double level) {
  if (dec.interior.empty()) throw EmptySublevel("cannot assemble an empty decomposition");
  if (!(dec.grid == v.grid)) throw PreconditionError("decomposition and potential use different grids");
  if (dec.level != level) throw PreconditionError("decomposition was built for another level");

  const GridSpec& grid = dec.grid;
  AssembledPencil p;
  p.grid = grid;
  p.level = level;
  p.n_interior = dec.n_interior();
  p.n_boundary = dec.n_boundary();
  p.nodes = dec.interior;
  p.nodes.insert(p.nodes.end(), dec.boundary.begin(), dec.boundary.end());

  const Index order = p.order();
  const double w = std::pow(grid.spacing, grid.dimension - 2);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(dec.edges.size() * 4);
  p.sigma = Eigen::VectorXd::Zero(p.n_boundary);
  for (const auto& [a, b] : dec.edges) {
    t.emplace_back(static_cast<int>(a), static_cast<int>(a), w);
    t.emplace_back(static_cast<int>(b), static_cast<int>(b), w);
    t.emplace_back(static_cast<int>(a), static_cast<int>(b), -w);
    t.emplace_back(static_cast<int>(b), static_cast<int>(a), -w);
    if (b >= p.n_interior) p.sigma[b - p.n_interior] += grid.face_area();
  }
  p.stiffness.resize(order, order);
  p.stiffness.setFromTriplets(t.begin(), t.end());
  p.stiffness.makeCompressed();

  p.mass = Eigen::VectorXd::Zero(order);
  const double cell = grid.cell_volume();
  for (Index k = 0; k < p.n_interior; ++k) {
    p.mass[k] = std::max(level - v.values[p.nodes[k]], 0.0) * cell;
  }

  const Inertia kii = inertia(p.block_ii());
  if (kii.n_plus != p.n_interior) {
    throw SingularDirichletBlock("Dirichlet block K_II is not positive definite (n0 = " +
                                 std::to_string(kii.n_zero) + ")");
  }
  return p;
}

}  // namespace a2rlab
