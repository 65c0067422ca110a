#include "a2rlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "a2rlab/errors.hpp"
#include "a2rlab/random.hpp"

namespace a2rlab {

GridSpec GridSpec::make(int dimension, const Point& lower, const Point& upper,
                        const std::array<int, 3>& resolution, Index node_cap) {
  if (dimension < 1 || dimension > 3) {
    throw PreconditionError("grid dimension must be 1, 2 or 3");
  }
  GridSpec g;
  g.dimension = dimension;
  Index total = 1;
  double h = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    if (axis >= dimension) {
      g.lower[axis] = g.upper[axis] = 0.0;
      g.resolution[axis] = 1;
      continue;
    }
    if (resolution[axis] < 3) throw PreconditionError("resolution must be >= 3 on every axis");
    if (!(upper[axis] > lower[axis])) throw PreconditionError("empty box interval");
    g.lower[axis] = lower[axis];
    g.upper[axis] = upper[axis];
    g.resolution[axis] = resolution[axis];
    const double ha = (upper[axis] - lower[axis]) / (resolution[axis] - 1);
    if (axis == 0) {
      h = ha;
    } else if (std::abs(ha - h) > 1e-12 * h) {
      throw PreconditionError("grid must be isotropic (equal spacing on every axis)");
    }
    total *= resolution[axis];
  }
  if (total > node_cap) {
    std::ostringstream os;
    os << "grid has " << total << " nodes, cap is " << node_cap;
    throw PreconditionError(os.str());
  }
  g.spacing = h;
  return g;
}

GridSpec GridSpec::cube(int dimension, double lo, double hi, int nodes_per_axis, Index node_cap) {
  return make(dimension, {lo, lo, lo}, {hi, hi, hi},
              {nodes_per_axis, nodes_per_axis, nodes_per_axis}, node_cap);
}

Index GridSpec::node_count() const {
  Index total = 1;
  for (int axis = 0; axis < dimension; ++axis) total *= resolution[axis];
  return total;
}

std::array<int, 3> GridSpec::multi_index(Index node) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int axis = 0; axis < dimension; ++axis) {
    idx[axis] = static_cast<int>(node % resolution[axis]);
    node /= resolution[axis];
  }
  return idx;
}

Index GridSpec::linear_index(const std::array<int, 3>& idx) const {
  Index node = 0;
  for (int axis = dimension - 1; axis >= 0; --axis) node = node * resolution[axis] + idx[axis];
  return node;
}

Point GridSpec::coordinate(Index node) const {
  const auto idx = multi_index(node);
  Point x{0.0, 0.0, 0.0};
  for (int axis = 0; axis < dimension; ++axis) x[axis] = lower[axis] + idx[axis] * spacing;
  return x;
}

bool GridSpec::on_box_boundary(Index node) const {
  const auto idx = multi_index(node);
  for (int axis = 0; axis < dimension; ++axis) {
    if (idx[axis] == 0 || idx[axis] == resolution[axis] - 1) return true;
  }
  return false;
}

double GridSpec::cell_volume() const { return std::pow(spacing, dimension); }
double GridSpec::face_area() const { return std::pow(spacing, dimension - 1); }

double distance(const Point& a, const Point& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// ---------------------------------------------------------------------------

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double single_well_value(const SingleWell& w, const GridSpec& grid, const Point& x) {
  return std::visit(
      overloaded{
          [&](const BallWell& b) {
            double r2 = 0.0;
            for (int a = 0; a < grid.dimension; ++a) r2 += (x[a] - b.center[a]) * (x[a] - b.center[a]);
            return r2 < b.radius * b.radius ? -b.depth : 0.0;
          },
          [&](const GaussianWell& g) {
            double r2 = 0.0;
            for (int a = 0; a < grid.dimension; ++a) r2 += (x[a] - g.center[a]) * (x[a] - g.center[a]);
            return -g.depth * std::exp(-r2 / (2.0 * g.width * g.width));
          }},
      w);
}

bool reaches_past_box(const SingleWell& w, const GridSpec& grid) {
  const auto [center, reach] = std::visit(
      overloaded{[](const BallWell& b) { return std::pair{b.center, b.radius}; },
                 [](const GaussianWell& g) { return std::pair{g.center, 3.0 * g.width}; }},
      w);
  for (int a = 0; a < grid.dimension; ++a) {
    if (center[a] - reach < grid.lower[a] || center[a] + reach > grid.upper[a]) return true;
  }
  return false;
}

struct RandomMode {
  std::array<int, 3> k{0, 0, 0};
  double amplitude = 0.0;
  double phase = 0.0;
};

std::vector<RandomMode> random_modes(const BandLimitedRandom& r, int dimension) {
  std::mt19937_64 gen(r.seed);
  std::vector<RandomMode> modes;
  const int c = std::max(r.cutoff, 1);
  const int kmax1 = c, kmax2 = dimension >= 2 ? c : 0, kmax3 = dimension >= 3 ? c : 0;
  for (int k3 = 0; k3 <= kmax3; ++k3) {
    for (int k2 = 0; k2 <= kmax2; ++k2) {
      for (int k1 = 0; k1 <= kmax1; ++k1) {
        const int k2sum = k1 * k1 + k2 * k2 + k3 * k3;
        if (k2sum == 0 || k2sum > c * c) continue;
        RandomMode m;
        m.k = {k1, k2, k3};
        m.amplitude = 2.0 * uniform01(gen) - 1.0;
        m.phase = 2.0 * std::numbers::pi * uniform01(gen);
        modes.push_back(m);
      }
    }
  }
  return modes;
}

double random_value(const BandLimitedRandom& r, const std::vector<RandomMode>& modes,
                    const GridSpec& grid, const Point& x) {
  double window = 1.0;
  std::array<double, 3> s{0.0, 0.0, 0.0};
  for (int a = 0; a < grid.dimension; ++a) {
    s[a] = (x[a] - grid.lower[a]) / (grid.upper[a] - grid.lower[a]);
    const double w = std::sin(std::numbers::pi * s[a]);
    window *= w * w;
  }
  double f = 0.0, scale = 0.0;
  for (const auto& m : modes) {
    const double arg = std::numbers::pi * (m.k[0] * s[0] + m.k[1] * s[1] + m.k[2] * s[2]) + m.phase;
    f += m.amplitude * std::cos(arg);
    scale += std::abs(m.amplitude);
  }
  if (scale == 0.0) return 0.0;
  return r.amplitude * window * f / scale;
}

}  // namespace

std::string family_name(const PotentialFamily& family) {
  return std::visit(overloaded{[](const BallWell&) { return std::string("ball_well"); },
                               [](const GaussianWell&) { return std::string("gaussian_well"); },
                               [](const MultiWell&) { return std::string("multi_well"); },
                               [](const BandLimitedRandom&) {
                                 return std::string("band_limited_random");
                               },
                               [](const SampledValues&) { return std::string("sampled"); }},
                    family);
}

double evaluate_family(const PotentialFamily& family, const GridSpec& grid, const Point& x) {
  return std::visit(
      overloaded{[&](const BallWell& b) { return single_well_value(b, grid, x); },
                 [&](const GaussianWell& g) { return single_well_value(g, grid, x); },
                 [&](const MultiWell& m) {
                   double v = 0.0;
                   for (const auto& w : m.wells) v += single_well_value(w, grid, x);
                   return v;
                 },
                 [&](const BandLimitedRandom& r) {
                   return random_value(r, random_modes(r, grid.dimension), grid, x);
                 },
                 [](const SampledValues&) -> double {
                   throw UnknownFamily("sampled potential has no analytic form");
                 }},
      family);
}

PotentialField build_potential(const PotentialFamily& family, const GridSpec& grid) {
  PotentialField field;
  field.grid = grid;
  field.family = family;
  const Index n = grid.node_count();
  field.values.resize(static_cast<std::size_t>(n));

  if (std::holds_alternative<SampledValues>(family)) {
    throw UnknownFamily("cannot build a potential from the 'sampled' family");
  }
  if (const auto* r = std::get_if<BandLimitedRandom>(&family)) {
    const auto modes = random_modes(*r, grid.dimension);
    for (Index i = 0; i < n; ++i) field.values[i] = random_value(*r, modes, grid, grid.coordinate(i));
  } else {
    for (Index i = 0; i < n; ++i) field.values[i] = evaluate_family(family, grid, grid.coordinate(i));
  }

  std::vector<SingleWell> wells;
  if (const auto* b = std::get_if<BallWell>(&family)) wells.push_back(*b);
  if (const auto* g = std::get_if<GaussianWell>(&family)) wells.push_back(*g);
  if (const auto* m = std::get_if<MultiWell>(&family)) wells = m->wells;
  for (std::size_t k = 0; k < wells.size(); ++k) {
    if (reaches_past_box(wells[k], grid)) {
      field.warnings.push_back("well " + std::to_string(k) + " support reaches past the box");
    }
  }
  for (double v : field.values) {
    if (!std::isfinite(v)) throw PreconditionError("potential is not finite at every node");
  }
  return field;
}

PotentialField PotentialField::from_values(const GridSpec& grid, std::vector<double> values) {
  if (static_cast<Index>(values.size()) != grid.node_count()) {
    throw PreconditionError("value count does not match the grid");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw PreconditionError("potential is not finite at every node");
  }
  PotentialField field;
  field.grid = grid;
  field.values = std::move(values);
  field.family = SampledValues{};
  return field;
}

double PotentialField::negative_part_l1(double level) const {
  double sum = 0.0;
  for (double v : values) sum += std::max(level - v, 0.0);
  return sum * grid.cell_volume();
}

double PotentialField::negative_part_lp(double level, double p) const {
  if (!(p >= 1.0)) throw PreconditionError("L^p norm requires p >= 1");
  double sum = 0.0;
  for (double v : values) sum += std::pow(std::max(level - v, 0.0), p);
  return std::pow(sum * grid.cell_volume(), 1.0 / p);
}

NegativePartNorms PotentialField::norms(double level, const std::vector<double>& ps) const {
  NegativePartNorms out;
  out.level = level;
  out.l1 = negative_part_l1(level);
  for (double p : ps) out.lp[p] = negative_part_lp(level, p);
  return out;
}

// ---------------------------------------------------------------------------

Index SublevelDecomposition::global_id(Index local) const {
  return local < n_interior() ? interior[local] : boundary[local - n_interior()];
}

namespace {
SparseMatrix sub_block(const SparseMatrix& A, Index r0, Index nr, Index c0, Index nc) {
  return SparseMatrix(A.block(r0, c0, nr, nc));
}
}  // namespace

SparseMatrix AssembledPencil::block_ii() const {
  return sub_block(stiffness, 0, n_interior, 0, n_interior);
}
SparseMatrix AssembledPencil::block_ib() const {
  return sub_block(stiffness, 0, n_interior, n_interior, n_boundary);
}
SparseMatrix AssembledPencil::block_bb() const {
  return sub_block(stiffness, n_interior, n_boundary, n_interior, n_boundary);
}

bool AssembledPencil::operator==(const AssembledPencil& o) const {
  if (!(grid == o.grid) || level != o.level || nodes != o.nodes || n_interior != o.n_interior ||
      n_boundary != o.n_boundary) {
    return false;
  }
  if (mass != o.mass || sigma != o.sigma) return false;
  if (stiffness.rows() != o.stiffness.rows() || stiffness.cols() != o.stiffness.cols()) return false;
  SparseMatrix a = stiffness, b = o.stiffness;
  a.prune(0.0);
  b.prune(0.0);
  a.makeCompressed();
  b.makeCompressed();
  if (a.nonZeros() != b.nonZeros()) return false;
  const auto nnz = static_cast<std::size_t>(a.nonZeros());
  return std::equal(a.outerIndexPtr(), a.outerIndexPtr() + a.outerSize() + 1, b.outerIndexPtr()) &&
         std::equal(a.innerIndexPtr(), a.innerIndexPtr() + nnz, b.innerIndexPtr()) &&
         std::equal(a.valuePtr(), a.valuePtr() + nnz, b.valuePtr());
}

bool SpectralSummary::operator==(const SpectralSummary& o) const {
  if (label != o.label || eigenvalues.size() != o.eigenvalues.size() ||
      eigenvalues != o.eigenvalues) {
    return false;
  }
  if (eigenvectors.has_value() != o.eigenvectors.has_value()) return false;
  if (!eigenvectors) return true;
  return eigenvectors->rows() == o.eigenvectors->rows() &&
         eigenvectors->cols() == o.eigenvectors->cols() && *eigenvectors == *o.eigenvectors;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::not_applicable: return "not-applicable";
  }
  return "not-applicable";
}

void BoundReport::judge() {
  if (!std::isfinite(rhs) || !std::isfinite(lhs)) {
    verdict = std::isnan(rhs) || std::isnan(lhs) ? Verdict::not_applicable
              : (lhs <= rhs ? Verdict::holds : Verdict::violated);
    return;
  }
  const double slack = lhs_integer ? 0.0 : tolerance * std::max(1.0, std::abs(rhs));
  verdict = lhs <= rhs + slack ? Verdict::holds : Verdict::violated;
}

}  // namespace a2rlab
