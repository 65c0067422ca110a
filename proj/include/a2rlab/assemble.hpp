#pragma once

#include "a2rlab/eigcount.hpp"
#include "a2rlab/model.hpp"

namespace a2rlab {

struct ClassifyOptions {
  /// Levels e > 0 are outside the standing assumption e <= 0; allow them
  /// only when exploring.
  bool allow_positive_level = false;
};

/// Interior I = {V < e}, boundary B = lattice neighbours of I outside I,
/// edges of I u B touching I, components of I and the diameter of I u B.
/// Throws EmptySublevel when I is empty and DetachedComponent when some
/// component of I has no boundary neighbour.
SublevelDecomposition classify_nodes(const PotentialField& v, double level,
                                     const ClassifyOptions& opts = {});

/// Stiffness K = h^(n-2) * graph Laplacian over the decomposition edges,
/// mass M = (V-e)_- h^n on I (0 on B), surface weights sigma on B. Verifies
/// that the Dirichlet block K_II is positive definite (SingularDirichletBlock
/// otherwise).
AssembledPencil assemble_pencil(const SublevelDecomposition& dec, const PotentialField& v,
                                double level);

}  // namespace a2rlab
