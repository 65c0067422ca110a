#pragma once

// Discrete absorption-to-reflection machinery. With the local ordering
// [interior | boundary] the weighted pencil splits as
//
//     K - lambda M = [ A_II  K_IB ]      A_II = K_II - lambda M_II
//                    [ K_BI  K_BB ]
//
// The lambda-harmonic extension of boundary data phi is u_I = P_lambda phi
// with P_lambda = -A_II^{-1} K_IB, and the boundary form is the Schur
// complement S(lambda) = K_BB - K_BI A_II^{-1} K_IB, so that
// phi^T S(lambda) phi = u^T (K - lambda M) u. Haynsworth inertia additivity
// then gives n-(K - lambda M) = n-(A_II) + n-(S(lambda)) exactly.

#include <cstdint>

#include "a2rlab/eigcount.hpp"
#include "a2rlab/model.hpp"

namespace a2rlab {

/// Factorization of K_II - lambda M_II. Throws ResolventViolation when lambda
/// is (numerically) a Dirichlet eigenvalue.
class DirichletResolvent {
public:
  DirichletResolvent(const AssembledPencil& p, double lambda, const InertiaOptions& opts = {});

  double lambda() const { return lambda_; }
  const Inertia& inertia() const { return factor_.inertia(); }
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return factor_.solve(rhs); }

private:
  double lambda_;
  SymmetricFactor factor_;
};

/// P_lambda (|I| x |B|). At lambda = 0 every row is a probability vector: the
/// discrete harmonic measure of the interior node.
Eigen::MatrixXd poisson_matrix(const AssembledPencil& p, double lambda);

/// Full vector on I u B with u_B = phi and u_I = P_lambda phi.
Eigen::VectorXd harmonic_extension(const AssembledPencil& p, double lambda,
                                   const Eigen::VectorXd& phi);

/// S(lambda), the Schur complement of K - lambda M onto the boundary.
Eigen::MatrixXd schur_form(const AssembledPencil& p, double lambda);

/// Matrix of A_lambda = L (L - lambda)^{-1}, L = M_II^{-1} K_II, acting on
/// interior vectors. Dense; for verification at desk scale.
Eigen::MatrixXd a_lambda_matrix(const AssembledPencil& p, double lambda);

struct BoundaryMeasures {
  Eigen::VectorXd mu;  // mu_e(b) = sum_i M_ii P_0[i, b]
  Eigen::VectorXd nu;  // nu_e(b) = sum_i h^n P_0[i, b]
  Eigen::VectorXd dmu_dsigma;
  Eigen::VectorXd dnu_dsigma;
  Eigen::VectorXd dnu_dmu;
};

BoundaryMeasures boundary_measures(const AssembledPencil& p);
BoundaryMeasures boundary_measures(const AssembledPencil& p, const Eigen::MatrixXd& p0);

/// ||lambda A_lambda|| = max over the Dirichlet spectrum of |lambda mu / (mu - lambda)|.
double a_lambda_norm(const SpectralSummary& dirichlet, double lambda);

/// Relative residual of K_II (u^lambda - u^0)_I = lambda (M u^lambda)_I.
double verify_isomorphism(const AssembledPencil& p, double lambda, const Eigen::VectorXd& phi);

struct SplittingCounts {
  Index n_full = 0;
  Index n_dirichlet = 0;
  Index n_a2r_nonpositive = 0;
  bool identity_holds = false;
};

/// n-(K - lambda M), n-(K_II - lambda M_II), n-(S(lambda)). Throws
/// OnEigenvalue if any of the three matrices is singular.
SplittingCounts splitting_counts(const AssembledPencil& p, double lambda);

struct A2RSpectrum {
  SpectralSummary spectrum;
  Index count = 0;  // n-(S(0) - gamma diag(mu_e))
};

/// Steklov-type spectrum of (S(0), diag mu_e) and its count below gamma.
A2RSpectrum a2r_spectrum_and_count(const Eigen::MatrixXd& s0, const BoundaryMeasures& bm,
                                   double gamma);

/// Count only: n-(S(0) - gamma diag(mu_e)). Throws OnEigenvalue if singular.
Index a2r_count(const Eigen::MatrixXd& s0, const BoundaryMeasures& bm, double gamma);

struct RadonNikodymReport {
  double p = 0.0;
  double dmu_dsigma_lp = 0.0;   // ||d mu_e / d sigma||_{L^p(sigma)}
  double dnu_dsigma_sup = 0.0;  // ||d nu_e / d sigma||_inf
  double dnu_dmu_sup = 0.0;     // ||d nu_e / d mu_e||_inf
};

RadonNikodymReport radon_nikodym_report(const BoundaryMeasures& bm, const Eigen::VectorXd& sigma,
                                        double p);

struct PoissonConstantEstimate {
  double c_p = 1.0;
  Index pairs = 0;
  bool empirical = true;  // a lower estimate from sampled pairs, not a bound
};

/// Smallest c >= 1 with c^-1 k <= h <= c k over sampled (interior, boundary)
/// pairs, h(x, y) = P_0[x, y] / sigma_y and k(x, y) = d(x, B) / |x - y|^n.
/// The first `samples` pairs of the seeded sequence are used, so the estimate
/// is nondecreasing in `samples`.
PoissonConstantEstimate estimate_poisson_constant(const AssembledPencil& p, Index samples,
                                                  std::uint64_t seed = 0);
PoissonConstantEstimate estimate_poisson_constant(const AssembledPencil& p,
                                                  const Eigen::MatrixXd& p0, Index samples,
                                                  std::uint64_t seed = 0);

/// Lambda-independent boundary data of a pencil, computed once and shared
/// read-only across sweeps.
struct BoundaryAnalysis {
  Eigen::MatrixXd p0;
  Eigen::MatrixXd s0;
  BoundaryMeasures measures;
  SpectralSummary dirichlet;  // spectrum of (K_II, M_II), with vectors
};

BoundaryAnalysis analyze_boundary(const AssembledPencil& p);

}  // namespace a2rlab
