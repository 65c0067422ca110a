#pragma once

// Eigenvalue counting by Sylvester's law of inertia, dense pencil spectra
// (the brute-force reference), heat traces and L2 -> Linf semigroup norms.

#include <memory>
#include <optional>
#include <vector>

#include "a2rlab/model.hpp"

namespace a2rlab {

struct InertiaOptions {
  /// Pivots with |d| <= relative_zero * max|A_ij| count as zero eigenvalues.
  double relative_zero = 1e-12;
  /// Largest order for which a failed sparse factorization is redone densely.
  Index dense_fallback_cap = 4000;
};

inline constexpr Index kDenseOrderCap = 4000;

/// Symmetric-indefinite LDL^T with Bunch-Kaufman diagonal pivoting,
/// P A P^T = L D L^T, D block diagonal with 1x1 and 2x2 blocks. Only the
/// lower triangle of the input is read. Interchanges follow the LAPACK
/// xSYTF2 convention, so L is stored unpermuted column by column.
class BunchKaufman {
public:
  explicit BunchKaufman(Eigen::MatrixXd a);

  Index order() const { return factor_.rows(); }
  double max_abs_entry() const { return max_abs_; }
  /// Index of the first exactly-zero pivot column, if any.
  std::optional<Index> zero_pivot() const { return zero_pivot_; }

  /// Inertia read from D; pivots at or below `zero_tol` count as zero.
  Inertia inertia(double zero_tol) const;

  /// Solves A X = B. Throws FactorizationBreakdown when A is singular.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

private:
  Eigen::MatrixXd factor_;
  // pivots_[k] >= 0: 1x1 block, row k was swapped with pivots_[k].
  // pivots_[k] < 0: 2x2 block at (k, k+1), row k+1 swapped with -pivots_[k]-1.
  std::vector<Index> pivots_;
  double max_abs_ = 0.0;
  std::optional<Index> zero_pivot_;
};

/// Factorization of a symmetric matrix giving both inertia and solves. Sparse
/// input uses a fill-reducing LDL^T; if that meets a (near) zero pivot it is
/// redone with Bunch-Kaufman when the order permits.
class SymmetricFactor {
public:
  explicit SymmetricFactor(const SparseMatrix& a, const InertiaOptions& opts = {});
  explicit SymmetricFactor(const Eigen::MatrixXd& a, const InertiaOptions& opts = {});
  ~SymmetricFactor();
  SymmetricFactor(SymmetricFactor&&) noexcept;
  SymmetricFactor& operator=(SymmetricFactor&&) noexcept;

  const Inertia& inertia() const { return inertia_; }
  bool singular() const { return inertia_.n_zero > 0; }
  bool used_dense() const { return dense_.has_value(); }

  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

private:
  struct SparseLdlt;
  std::unique_ptr<SparseLdlt> sparse_;
  std::optional<BunchKaufman> dense_;
  Inertia inertia_;
};

/// (n-, n0, n+) of a symmetric matrix.
Inertia inertia(const Eigen::MatrixXd& a, const InertiaOptions& opts = {});
Inertia inertia(const SparseMatrix& a, const InertiaOptions& opts = {});

/// Number of finite eigenvalues below `lambda` of the pencil (K, diag M),
/// computed as n-(K - lambda M). Requires M >= 0 and K positive definite on
/// the nodes where M vanishes. Throws OnEigenvalue when K - lambda M is
/// singular.
Index count_below(const SparseMatrix& k, const Eigen::VectorXd& m, double lambda,
                  const InertiaOptions& opts = {});
Index count_below(const Eigen::MatrixXd& k, const Eigen::VectorXd& m, double lambda,
                  const InertiaOptions& opts = {});

/// All finite eigenvalues of (K, diag M), ascending, with M-orthonormal
/// eigenvectors on request. Nodes with zero mass are eliminated by a Schur
/// complement first. Dense; throws SizeCap above kDenseOrderCap.
SpectralSummary pencil_eigs(const Eigen::MatrixXd& k, const Eigen::VectorXd& m, bool want_vectors,
                            std::string label = {});
SpectralSummary pencil_eigs(const SparseMatrix& k, const Eigen::VectorXd& m, bool want_vectors,
                            std::string label = {});

/// Tr exp(-t L) = sum_i exp(-t mu_i).
double heat_trace(const SpectralSummary& s, double t);

/// ||exp(-t L)||_{L2(w) -> Linf} = max_x (sum_k exp(-2 t mu_k) u_k(x)^2)^(1/2),
/// maximised over the nodes with positive weight.
double two_infinity_norm(const SpectralSummary& s, const Eigen::VectorXd& w, double t);

}  // namespace a2rlab
