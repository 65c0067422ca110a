#include "a2rlab/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "a2rlab/assemble.hpp"
#include "a2rlab/errors.hpp"

namespace a2rlab {

SparseMatrix SchrodingerPencil::shifted(double e) const {
  SparseMatrix a = laplacian;
  for (Index i = 0; i < order(); ++i) a.coeffRef(i, i) += potential[i] - e * mass;
  a.makeCompressed();
  return a;
}

SchrodingerPencil assemble_schrodinger(const PotentialField& v) {
  const GridSpec& grid = v.grid;
  SchrodingerPencil s;
  s.grid = grid;
  s.mass = grid.cell_volume();
  const Index total = grid.node_count();
  std::vector<Index> local(static_cast<std::size_t>(total), -1);
  for (Index i = 0; i < total; ++i) {
    if (!grid.on_box_boundary(i)) {
      local[i] = s.order();
      s.nodes.push_back(i);
    }
  }
  const Index n = s.order();
  const double w = std::pow(grid.spacing, grid.dimension - 2);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(n) * (2 * grid.dimension + 1));
  s.potential.resize(n);
  for (Index a = 0; a < n; ++a) {
    const Index g = s.nodes[a];
    // Every lattice neighbour counts towards the degree; pinned ones only there.
    double degree = 0.0;
    grid.for_each_neighbor(g, [&](Index j) {
      degree += w;
      if (local[j] >= 0) t.emplace_back(static_cast<int>(a), static_cast<int>(local[j]), -w);
    });
    t.emplace_back(static_cast<int>(a), static_cast<int>(a), degree);
    s.potential[a] = v.values[g] * s.mass;
  }
  s.laplacian.resize(n, n);
  s.laplacian.setFromTriplets(t.begin(), t.end());
  s.laplacian.makeCompressed();
  return s;
}

Index schrodinger_count(const SchrodingerPencil& s, double e) {
  if (s.order() == 0) return 0;
  const Inertia in = inertia(s.shifted(e));
  if (in.n_zero > 0) {
    std::ostringstream os;
    os << "e = " << e << " is an eigenvalue of the Schrodinger operator";
    throw OnEigenvalue(os.str());
  }
  return in.n_minus;
}

ReductionResult reduction_check(const PotentialField& v, double e, double lambda) {
  if (!(lambda >= 1.0)) throw PreconditionError("reduction_check needs lambda >= 1");
  if (!(e <= 0.0)) throw PreconditionError("reduction_check needs e <= 0");

  ReductionResult r;
  std::vector<double> clamped = v.values;
  bool any_positive = false;
  for (double& x : clamped) {
    if (x > 0.0) {
      x = 0.0;
      any_positive = true;
    }
  }
  if (any_positive) r.warnings.push_back("positive part of V clamped to zero");
  const PotentialField vneg = PotentialField::from_values(v.grid, std::move(clamped));

  r.n_schrodinger = schrodinger_count(assemble_schrodinger(vneg), e);
  try {
    const SublevelDecomposition dec = classify_nodes(vneg, e);
    const AssembledPencil p = assemble_pencil(dec, vneg, e);
    r.n_weighted_full = count_below(p.stiffness, p.mass, lambda);
  } catch (const EmptySublevel&) {
    r.n_weighted_full = 0;
  }
  r.inequality_holds = r.n_schrodinger <= r.n_weighted_full;
  return r;
}

namespace {

Index isqrt(Index x) {
  auto r = static_cast<Index>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

// Number of k in Z_+^dims with |k|^2 <= budget.
Index count_lattice_exact(int dims, Index budget) {
  if (budget < dims) return 0;
  if (dims == 1) return isqrt(budget);
  Index total = 0;
  for (Index k = 1; k * k <= budget - (dims - 1); ++k) total += count_lattice_exact(dims - 1, budget - k * k);
  return total;
}

}  // namespace

Index box_exact_count(int n, double side, double mu) {
  if (n < 1) throw PreconditionError("box_exact_count needs n >= 1");
  if (!(side > 0.0)) throw PreconditionError("box_exact_count needs a positive side");
  if (!(mu >= 0.0)) throw PreconditionError("box_exact_count needs mu >= 0");
  const double radius2 = mu * side * side / (std::numbers::pi * std::numbers::pi);
  if (radius2 > 1e6) throw EnumerationCap("lattice enumeration capped at mu L^2 / pi^2 <= 1e6");
  return count_lattice_exact(n, static_cast<Index>(std::floor(radius2)));
}

}  // namespace a2rlab
