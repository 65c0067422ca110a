#pragma once

#include <string>
#include <vector>

#include "a2rlab/eigcount.hpp"
#include "a2rlab/model.hpp"

namespace a2rlab {

/// Finite-difference -Delta + V on the box with the outermost nodes pinned
/// to zero. Unknowns are the grid nodes off the box walls, in grid order.
struct SchrodingerPencil {
  GridSpec grid;
  std::vector<Index> nodes;  // unknown -> global node id
  SparseMatrix laplacian;    // h^(n-2) * Dirichlet graph Laplacian
  Eigen::VectorXd potential; // V(x_i) h^n
  double mass = 1.0;         // h^n, the (scalar) mass matrix

  Index order() const { return static_cast<Index>(nodes.size()); }

  /// K_Omega + diag(V h^n) - e h^n I.
  SparseMatrix shifted(double e) const;
};

SchrodingerPencil assemble_schrodinger(const PotentialField& v);

/// n-(K_Omega + V_diag - e M_Omega). Throws OnEigenvalue if e is an eigenvalue.
Index schrodinger_count(const SchrodingerPencil& s, double e);

struct ReductionResult {
  Index n_schrodinger = 0;
  Index n_weighted_full = 0;
  bool inequality_holds = false;
  std::vector<std::string> warnings;
};

/// Compares the bound-state count of -Delta + V below e with the counting
/// function of the weighted pencil on {V < e} at lambda. Positive parts of V
/// are clamped to zero (with a warning). Needs lambda >= 1 and e <= 0.
ReductionResult reduction_check(const PotentialField& v, double e, double lambda);

/// #{k in Z_+^n : (pi/L)^2 |k|^2 <= mu}, the exact counting function of the
/// Dirichlet Laplacian on the cube of side L. Throws EnumerationCap when
/// mu L^2 / pi^2 > 1e6.
Index box_exact_count(int n, double side, double mu);

}  // namespace a2rlab
