#include "a2rlab/eigcount.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "a2rlab/errors.hpp"

namespace a2rlab {

namespace {

constexpr double kBunchKaufmanAlpha = 0.6403882032022076;  // (1 + sqrt(17)) / 8

void classify(double value, double zero_tol, Inertia& in) {
  if (std::abs(value) <= zero_tol) {
    ++in.n_zero;
  } else if (value < 0.0) {
    ++in.n_minus;
  } else {
    ++in.n_plus;
  }
}

double max_abs_lower(const Eigen::MatrixXd& a) {
  double m = 0.0;
  for (Index c = 0; c < a.cols(); ++c) {
    for (Index r = c; r < a.rows(); ++r) m = std::max(m, std::abs(a(r, c)));
  }
  return m;
}

double max_abs(const SparseMatrix& a) {
  double m = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

void require_symmetric_finite(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw PreconditionError("matrix is not square");
  if (!a.allFinite()) throw PreconditionError("matrix has non-finite entries");
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw PreconditionError("matrix is not symmetric");
  }
}

void require_symmetric_finite(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw PreconditionError("matrix is not square");
  const double scale = max_abs(a);
  if (!std::isfinite(scale)) throw PreconditionError("matrix has non-finite entries");
  const SparseMatrix diff = a - SparseMatrix(a.transpose());
  if (max_abs(diff) > 1e-12 * std::max(scale, 1e-300)) {
    throw PreconditionError("matrix is not symmetric");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

BunchKaufman::BunchKaufman(Eigen::MatrixXd a) : factor_(std::move(a)) {
  auto& A = factor_;
  const Index n = A.rows();
  if (A.cols() != n) throw PreconditionError("matrix is not square");
  max_abs_ = max_abs_lower(A);
  pivots_.assign(static_cast<std::size_t>(n), 0);

  Index k = 0;
  while (k < n) {
    Index kstep = 1;
    Index kp = k;
    const double absakk = std::abs(A(k, k));
    Index imax = k;
    double colmax = 0.0;
    if (k + 1 < n) {
      Eigen::Index r = 0;
      colmax = A.col(k).segment(k + 1, n - k - 1).cwiseAbs().maxCoeff(&r);
      imax = k + 1 + r;
    }

    if (std::max(absakk, colmax) == 0.0 || std::isnan(absakk) || std::isnan(colmax)) {
      if (!zero_pivot_) zero_pivot_ = k;
      if (std::isnan(absakk) || std::isnan(colmax)) {
        throw FactorizationBreakdown("non-finite pivot column", k, absakk);
      }
    } else {
      if (absakk >= kBunchKaufmanAlpha * colmax) {
        kp = k;
      } else {
        double rowmax = 0.0;
        if (imax > k) rowmax = A.row(imax).segment(k, imax - k).cwiseAbs().maxCoeff();
        if (imax + 1 < n) {
          rowmax = std::max(rowmax, A.col(imax).segment(imax + 1, n - imax - 1).cwiseAbs().maxCoeff());
        }
        if (absakk >= kBunchKaufmanAlpha * colmax * (colmax / rowmax)) {
          kp = k;
        } else if (std::abs(A(imax, imax)) >= kBunchKaufmanAlpha * rowmax) {
          kp = imax;
        } else {
          kp = imax;
          kstep = 2;
        }
      }

      const Index kk = k + kstep - 1;
      if (kp != kk) {
        if (kp + 1 < n) {
          A.col(kk).segment(kp + 1, n - kp - 1).swap(A.col(kp).segment(kp + 1, n - kp - 1));
        }
        for (Index j = kk + 1; j < kp; ++j) std::swap(A(j, kk), A(kp, j));
        std::swap(A(kk, kk), A(kp, kp));
        if (kstep == 2) std::swap(A(k + 1, k), A(kp, k));
      }

      if (kstep == 1) {
        if (k + 1 < n) {
          const Index m = n - k - 1;
          const double d11 = 1.0 / A(k, k);
          const Eigen::VectorXd x = A.col(k).segment(k + 1, m);
          A.block(k + 1, k + 1, m, m).selfadjointView<Eigen::Lower>().rankUpdate(x, -d11);
          A.col(k).segment(k + 1, m) *= d11;
        }
      } else if (k + 2 < n) {
        const Index m = n - k - 2;
        double d21 = A(k + 1, k);
        const double d11 = A(k + 1, k + 1) / d21;
        const double d22 = A(k, k) / d21;
        const double t = 1.0 / (d11 * d22 - 1.0);
        d21 = t / d21;
        Eigen::MatrixXd c(m, 2);
        c.col(0) = A.col(k).segment(k + 2, m);
        c.col(1) = A.col(k + 1).segment(k + 2, m);
        Eigen::MatrixXd w(m, 2);
        w.col(0) = d21 * (d11 * c.col(0) - c.col(1));
        w.col(1) = d21 * (d22 * c.col(1) - c.col(0));
        A.block(k + 2, k + 2, m, m).triangularView<Eigen::Lower>() -= c * w.transpose();
        A.col(k).segment(k + 2, m) = w.col(0);
        A.col(k + 1).segment(k + 2, m) = w.col(1);
      }
    }

    if (kstep == 1) {
      pivots_[k] = kp;
    } else {
      pivots_[k] = pivots_[k + 1] = -kp - 1;
    }
    k += kstep;
  }
}

Inertia BunchKaufman::inertia(double zero_tol) const {
  Inertia in;
  const Index n = order();
  Index k = 0;
  while (k < n) {
    if (pivots_[k] >= 0) {
      classify(factor_(k, k), zero_tol, in);
      k += 1;
    } else {
      const double a = factor_(k, k), b = factor_(k + 1, k), c = factor_(k + 1, k + 1);
      const double mid = 0.5 * (a + c);
      const double rad = std::hypot(0.5 * (a - c), b);
      classify(mid + rad, zero_tol, in);
      classify(mid - rad, zero_tol, in);
      k += 2;
    }
  }
  return in;
}

Eigen::MatrixXd BunchKaufman::solve(const Eigen::MatrixXd& b) const {
  const Index n = order();
  if (b.rows() != n) throw PreconditionError("right-hand side has the wrong row count");
  if (zero_pivot_) {
    throw FactorizationBreakdown("solve with a singular matrix", *zero_pivot_, 0.0);
  }
  const auto& A = factor_;
  Eigen::MatrixXd x = b;

  Index k = 0;
  while (k < n) {
    if (pivots_[k] >= 0) {
      const Index kp = pivots_[k];
      if (kp != k) x.row(k).swap(x.row(kp));
      if (k + 1 < n) x.bottomRows(n - k - 1).noalias() -= A.col(k).tail(n - k - 1) * x.row(k);
      x.row(k) /= A(k, k);
      k += 1;
    } else {
      const Index kp = -pivots_[k] - 1;
      if (kp != k + 1) x.row(k + 1).swap(x.row(kp));
      if (k + 2 < n) {
        x.bottomRows(n - k - 2).noalias() -= A.col(k).tail(n - k - 2) * x.row(k);
        x.bottomRows(n - k - 2).noalias() -= A.col(k + 1).tail(n - k - 2) * x.row(k + 1);
      }
      const double akm1k = A(k + 1, k);
      const double akm1 = A(k, k) / akm1k;
      const double ak = A(k + 1, k + 1) / akm1k;
      const double denom = akm1 * ak - 1.0;
      const Eigen::RowVectorXd bkm1 = x.row(k) / akm1k;
      const Eigen::RowVectorXd bk = x.row(k + 1) / akm1k;
      x.row(k) = (ak * bkm1 - bk) / denom;
      x.row(k + 1) = (akm1 * bk - bkm1) / denom;
      k += 2;
    }
  }

  k = n - 1;
  while (k >= 0) {
    if (pivots_[k] >= 0) {
      if (k + 1 < n) x.row(k).noalias() -= A.col(k).tail(n - k - 1).transpose() * x.bottomRows(n - k - 1);
      const Index kp = pivots_[k];
      if (kp != k) x.row(k).swap(x.row(kp));
      k -= 1;
    } else {
      if (k + 1 < n) {
        x.row(k).noalias() -= A.col(k).tail(n - k - 1).transpose() * x.bottomRows(n - k - 1);
        x.row(k - 1).noalias() -= A.col(k - 1).tail(n - k - 1).transpose() * x.bottomRows(n - k - 1);
      }
      const Index kp = -pivots_[k] - 1;
      if (kp != k) x.row(k).swap(x.row(kp));
      k -= 2;
    }
  }
  return x;
}

// ---------------------------------------------------------------------------

struct SymmetricFactor::SparseLdlt {
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
};

SymmetricFactor::~SymmetricFactor() = default;
SymmetricFactor::SymmetricFactor(SymmetricFactor&&) noexcept = default;
SymmetricFactor& SymmetricFactor::operator=(SymmetricFactor&&) noexcept = default;

SymmetricFactor::SymmetricFactor(const Eigen::MatrixXd& a, const InertiaOptions& opts) {
  require_symmetric_finite(a);
  dense_.emplace(a);
  inertia_ = dense_->inertia(opts.relative_zero * dense_->max_abs_entry());
}

SymmetricFactor::SymmetricFactor(const SparseMatrix& a, const InertiaOptions& opts) {
  require_symmetric_finite(a);
  const Index n = a.rows();
  if (n == 0) return;
  const double tol = opts.relative_zero * max_abs(a);

  auto sparse = std::make_unique<SparseLdlt>();
  sparse->ldlt.compute(a);
  Index bad = -1;
  double bad_value = 0.0;
  if (sparse->ldlt.info() == Eigen::Success) {
    const Eigen::VectorXd d = sparse->ldlt.vectorD();
    for (Index i = 0; i < d.size(); ++i) {
      if (!std::isfinite(d[i]) || std::abs(d[i]) <= tol) {
        bad = i;
        bad_value = d[i];
        break;
      }
    }
    if (bad < 0) {
      for (Index i = 0; i < d.size(); ++i) classify(d[i], 0.0, inertia_);
      sparse_ = std::move(sparse);
      return;
    }
  } else {
    bad = 0;
  }

  if (n > opts.dense_fallback_cap) {
    std::ostringstream os;
    os << "sparse LDL^T met a zero pivot and order " << n << " exceeds the dense fallback cap";
    throw FactorizationBreakdown(os.str(), bad, bad_value);
  }
  dense_.emplace(Eigen::MatrixXd(a));
  inertia_ = dense_->inertia(tol);
}

Eigen::MatrixXd SymmetricFactor::solve(const Eigen::MatrixXd& b) const {
  if (singular()) throw FactorizationBreakdown("solve with a singular matrix", -1, 0.0);
  if (dense_) return dense_->solve(b);
  if (!sparse_) return b;  // order 0
  return sparse_->ldlt.solve(b);
}

Inertia inertia(const Eigen::MatrixXd& a, const InertiaOptions& opts) {
  return SymmetricFactor(a, opts).inertia();
}

Inertia inertia(const SparseMatrix& a, const InertiaOptions& opts) {
  return SymmetricFactor(a, opts).inertia();
}

// ---------------------------------------------------------------------------

namespace {

void require_mass(const Eigen::VectorXd& m, Index n) {
  if (m.size() != n) throw PreconditionError("mass has the wrong size");
  for (Index i = 0; i < n; ++i) {
    if (!(m[i] >= 0.0)) throw PreconditionError("mass must be nonnegative");
  }
}

std::vector<Index> zero_mass_nodes(const Eigen::VectorXd& m) {
  std::vector<Index> z;
  for (Index i = 0; i < m.size(); ++i) {
    if (m[i] == 0.0) z.push_back(i);
  }
  return z;
}

SparseMatrix select(const SparseMatrix& a, const std::vector<Index>& rows) {
  std::vector<Index> pos(static_cast<std::size_t>(a.rows()), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) pos[rows[i]] = static_cast<Index>(i);
  std::vector<Eigen::Triplet<double>> t;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      const Index r = pos[it.row()], c = pos[it.col()];
      if (r >= 0 && c >= 0) t.emplace_back(static_cast<int>(r), static_cast<int>(c), it.value());
    }
  }
  SparseMatrix s(static_cast<Index>(rows.size()), static_cast<Index>(rows.size()));
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

void require_definite_on_null_mass(const SparseMatrix& k, const Eigen::VectorXd& m,
                                   const InertiaOptions& opts) {
  const auto z = zero_mass_nodes(m);
  if (z.empty()) return;
  const Inertia in = inertia(select(k, z), opts);
  if (in.n_plus != static_cast<Index>(z.size())) {
    throw PreconditionError("stiffness is not positive definite where the mass vanishes");
  }
}

SparseMatrix shifted(const SparseMatrix& k, const Eigen::VectorXd& m, double lambda) {
  SparseMatrix d(k.rows(), k.cols());
  std::vector<Eigen::Triplet<double>> t;
  for (Index i = 0; i < m.size(); ++i) {
    if (m[i] != 0.0) t.emplace_back(static_cast<int>(i), static_cast<int>(i), lambda * m[i]);
  }
  d.setFromTriplets(t.begin(), t.end());
  return k - d;
}

}  // namespace

Index count_below(const SparseMatrix& k, const Eigen::VectorXd& m, double lambda,
                  const InertiaOptions& opts) {
  require_mass(m, k.rows());
  require_definite_on_null_mass(k, m, opts);
  const Inertia in = inertia(shifted(k, m, lambda), opts);
  if (in.n_zero > 0) {
    std::ostringstream os;
    os << "lambda = " << lambda << " is an eigenvalue of the pencil (n0 = " << in.n_zero << ")";
    throw OnEigenvalue(os.str());
  }
  return in.n_minus;
}

Index count_below(const Eigen::MatrixXd& k, const Eigen::VectorXd& m, double lambda,
                  const InertiaOptions& opts) {
  return count_below(SparseMatrix(k.sparseView(0.0, 0.0)), m, lambda, opts);
}

SpectralSummary pencil_eigs(const Eigen::MatrixXd& k, const Eigen::VectorXd& m, bool want_vectors,
                            std::string label) {
  const Index n = k.rows();
  if (n > kDenseOrderCap) {
    throw SizeCap("dense pencil order " + std::to_string(n) + " exceeds " +
                  std::to_string(kDenseOrderCap));
  }
  require_symmetric_finite(k);
  require_mass(m, n);

  std::vector<Index> pos_nodes, zero_nodes;
  for (Index i = 0; i < n; ++i) (m[i] > 0.0 ? pos_nodes : zero_nodes).push_back(i);
  const auto np = static_cast<Index>(pos_nodes.size());
  const auto nz = static_cast<Index>(zero_nodes.size());

  Eigen::MatrixXd kpp = k(pos_nodes, pos_nodes);
  Eigen::MatrixXd elim;  // K_ZZ^{-1} K_ZP
  if (nz > 0) {
    const Eigen::MatrixXd kzz = k(zero_nodes, zero_nodes);
    Eigen::LLT<Eigen::MatrixXd> llt(kzz);
    if (llt.info() != Eigen::Success) {
      throw PreconditionError("stiffness is not positive definite where the mass vanishes");
    }
    elim = llt.solve(Eigen::MatrixXd(k(zero_nodes, pos_nodes)));
    kpp -= k(pos_nodes, zero_nodes) * elim;
  }
  Eigen::VectorXd scale(np);
  for (Index i = 0; i < np; ++i) scale[i] = 1.0 / std::sqrt(m[pos_nodes[i]]);
  Eigen::MatrixXd c = scale.asDiagonal() * kpp * scale.asDiagonal();
  c = 0.5 * (c + c.transpose()).eval();

  SpectralSummary out;
  out.label = std::move(label);
  if (np == 0) {
    out.eigenvalues.resize(0);
    if (want_vectors) out.eigenvectors = Eigen::MatrixXd(n, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      c, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("dense eigensolver failed to converge");
  out.eigenvalues = es.eigenvalues();
  if (want_vectors) {
    const Eigen::MatrixXd xp = scale.asDiagonal() * es.eigenvectors();
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, np);
    for (Index i = 0; i < np; ++i) u.row(pos_nodes[i]) = xp.row(i);
    if (nz > 0) {
      const Eigen::MatrixXd xz = -elim * xp;
      for (Index i = 0; i < nz; ++i) u.row(zero_nodes[i]) = xz.row(i);
    }
    out.eigenvectors = std::move(u);
  }
  return out;
}

SpectralSummary pencil_eigs(const SparseMatrix& k, const Eigen::VectorXd& m, bool want_vectors,
                            std::string label) {
  if (k.rows() > kDenseOrderCap) {
    throw SizeCap("dense pencil order " + std::to_string(k.rows()) + " exceeds " +
                  std::to_string(kDenseOrderCap));
  }
  return pencil_eigs(Eigen::MatrixXd(k), m, want_vectors, std::move(label));
}

double heat_trace(const SpectralSummary& s, double t) {
  if (!(t > 0.0)) throw PreconditionError("heat trace needs t > 0");
  double sum = 0.0;
  for (Index i = s.size() - 1; i >= 0; --i) {
    const double mu = s.eigenvalues[i];
    if (mu < -1e-10 * std::max(1.0, std::abs(s.eigenvalues.maxCoeff()))) {
      throw PreconditionError("heat trace needs a nonnegative spectrum");
    }
    sum += std::exp(-t * std::max(mu, 0.0));
  }
  return sum;
}

double two_infinity_norm(const SpectralSummary& s, const Eigen::VectorXd& w, double t) {
  if (!s.eigenvectors) throw MissingVectors("two_infinity_norm needs eigenvectors");
  if (!(t > 0.0)) throw PreconditionError("two_infinity_norm needs t > 0");
  const auto& u = *s.eigenvectors;
  if (u.rows() != w.size()) throw PreconditionError("weight vector has the wrong size");
  const Eigen::ArrayXd decay = (-2.0 * t * s.eigenvalues.array()).exp();
  double best = 0.0;
  for (Index x = 0; x < u.rows(); ++x) {
    if (!(w[x] > 0.0)) continue;
    const double sq = (u.row(x).array().square().transpose() * decay).sum();
    best = std::max(best, sq);
  }
  return std::sqrt(best);
}

}  // namespace a2rlab
