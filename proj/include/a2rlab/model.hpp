#pragma once

// Domain types shared by every stage of the pipeline: lattice, sampled
// potential, sublevel decomposition, assembled pencil, inertia, spectra and
// bound reports. All of them are plain values, immutable once built.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace a2rlab {

using Index = std::int64_t;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Point = std::array<double, 3>;

inline constexpr Index kDefaultNodeCap = 200000;

/// Uniform node-centred lattice on an axis-aligned box, dimension 1..3.
/// Nodes are numbered lexicographically with axis 0 running fastest.
struct GridSpec {
  int dimension = 1;
  Point lower{0.0, 0.0, 0.0};
  Point upper{0.0, 0.0, 0.0};
  std::array<int, 3> resolution{1, 1, 1};
  double spacing = 1.0;

  /// Validates and derives the spacing. Throws PreconditionError when the
  /// dimension is out of range, an axis has fewer than 3 nodes, the spacings
  /// differ between axes, or the node count exceeds `node_cap`.
  static GridSpec make(int dimension, const Point& lower, const Point& upper,
                       const std::array<int, 3>& resolution,
                       Index node_cap = kDefaultNodeCap);

  /// Same box [lo, hi] and node count on every axis.
  static GridSpec cube(int dimension, double lo, double hi, int nodes_per_axis,
                       Index node_cap = kDefaultNodeCap);

  Index node_count() const;
  std::array<int, 3> multi_index(Index node) const;
  Index linear_index(const std::array<int, 3>& idx) const;
  Point coordinate(Index node) const;
  bool on_box_boundary(Index node) const;
  double cell_volume() const;  // h^n
  double face_area() const;    // h^(n-1)

  /// Calls f(neighbor) for every lattice neighbour of `node`.
  template <class F>
  void for_each_neighbor(Index node, F&& f) const {
    const auto idx = multi_index(node);
    Index stride = 1;
    for (int axis = 0; axis < dimension; ++axis) {
      if (idx[axis] > 0) f(node - stride);
      if (idx[axis] + 1 < resolution[axis]) f(node + stride);
      stride *= resolution[axis];
    }
  }

  bool operator==(const GridSpec&) const = default;
};

double distance(const Point& a, const Point& b);

// ---------------------------------------------------------------------------
// Potential families

struct BallWell {
  Point center{};
  double radius = 1.0;
  double depth = 1.0;
  bool operator==(const BallWell&) const = default;
};

struct GaussianWell {
  Point center{};
  double width = 1.0;
  double depth = 1.0;
  bool operator==(const GaussianWell&) const = default;
};

using SingleWell = std::variant<BallWell, GaussianWell>;

struct MultiWell {
  std::vector<SingleWell> wells;
  bool operator==(const MultiWell&) const = default;
};

/// Random trigonometric field with wave numbers |k| <= cutoff (in units of
/// pi / box side), multiplied by a window that vanishes on the box walls.
struct BandLimitedRandom {
  std::uint64_t seed = 0;
  int cutoff = 3;
  double amplitude = 1.0;
  bool operator==(const BandLimitedRandom&) const = default;
};

/// Node values supplied directly (tests, imported fields).
struct SampledValues {
  bool operator==(const SampledValues&) const = default;
};

using PotentialFamily =
    std::variant<BallWell, GaussianWell, MultiWell, BandLimitedRandom, SampledValues>;

std::string family_name(const PotentialFamily& family);

/// Integrals of W = (V - e)_- by node quadrature sum W(x_i)^p h^n.
struct NegativePartNorms {
  double level = 0.0;
  double l1 = 0.0;
  std::map<double, double> lp;  // p -> ||W||_p
  bool operator==(const NegativePartNorms&) const = default;
};

struct PotentialField {
  GridSpec grid;
  std::vector<double> values;
  PotentialFamily family = SampledValues{};
  std::vector<std::string> warnings;

  static PotentialField from_values(const GridSpec& grid, std::vector<double> values);

  double negative_part_l1(double level) const;
  double negative_part_lp(double level, double p) const;
  NegativePartNorms norms(double level, const std::vector<double>& ps) const;

  bool operator==(const PotentialField&) const = default;
};

/// Samples `family` on `grid`. Throws UnknownFamily for SampledValues (no
/// analytic form) and records a warning when a well reaches past the box.
PotentialField build_potential(const PotentialFamily& family, const GridSpec& grid);

/// Value of the analytic family at a point.
double evaluate_family(const PotentialFamily& family, const GridSpec& grid, const Point& x);

// ---------------------------------------------------------------------------

/// Discrete sublevel set. Local numbering puts the interior nodes first
/// (0..|I|-1) followed by the boundary nodes (|I|..|I|+|B|-1).
struct SublevelDecomposition {
  GridSpec grid;
  double level = 0.0;
  std::vector<Index> interior;  // global node ids, ascending
  std::vector<Index> boundary;  // global node ids, ascending
  std::vector<std::array<Index, 2>> edges;  // local indices, first < second
  std::vector<int> component_of;            // per interior node
  int component_count = 0;
  double diameter = 0.0;

  Index n_interior() const { return static_cast<Index>(interior.size()); }
  Index n_boundary() const { return static_cast<Index>(boundary.size()); }
  Index order() const { return n_interior() + n_boundary(); }
  Index global_id(Index local) const;

  bool operator==(const SublevelDecomposition&) const = default;
};

/// The weighted pencil (K, M) on I u B plus the surface weights on B.
struct AssembledPencil {
  GridSpec grid;
  double level = 0.0;
  std::vector<Index> nodes;  // global ids in local order: interior then boundary
  Index n_interior = 0;
  Index n_boundary = 0;
  SparseMatrix stiffness;    // K
  Eigen::VectorXd mass;      // diag M: (V-e)_- h^n on I, 0 on B
  Eigen::VectorXd sigma;     // per boundary node, (#interior neighbours) h^(n-1)

  Index order() const { return n_interior + n_boundary; }
  Point coordinate(Index local) const { return grid.coordinate(nodes[local]); }

  SparseMatrix block_ii() const;
  SparseMatrix block_ib() const;
  SparseMatrix block_bb() const;
  Eigen::VectorXd interior_mass() const { return mass.head(n_interior); }

  bool operator==(const AssembledPencil& o) const;
};

struct Inertia {
  Index n_minus = 0;
  Index n_zero = 0;
  Index n_plus = 0;

  Index order() const { return n_minus + n_zero + n_plus; }
  Inertia operator+(const Inertia& o) const {
    return {n_minus + o.n_minus, n_zero + o.n_zero, n_plus + o.n_plus};
  }
  bool operator==(const Inertia&) const = default;
};

/// Finite generalized eigenvalues of a pencil (A, W), ascending, optionally
/// with W-orthonormal eigenvectors stored column-wise.
struct SpectralSummary {
  std::string label;
  Eigen::VectorXd eigenvalues;
  std::optional<Eigen::MatrixXd> eigenvectors;

  Index size() const { return eigenvalues.size(); }
  bool operator==(const SpectralSummary& o) const;
};

enum class Verdict { holds, violated, not_applicable };

std::string to_string(Verdict v);

struct BoundReport {
  std::string name;
  std::map<std::string, double> inputs;
  std::string point_name;  // "lambda", "gamma", "t", ...
  double point = 0.0;
  double rhs = 0.0;
  double lhs = 0.0;
  bool lhs_integer = false;
  double tolerance = 0.0;  // relative, only used for real-valued LHS
  Verdict verdict = Verdict::not_applicable;
  std::string notes;

  /// Sets the verdict from lhs/rhs: holds iff lhs <= rhs (+ tolerance).
  void judge();

  bool operator==(const BoundReport&) const = default;
};

}  // namespace a2rlab
