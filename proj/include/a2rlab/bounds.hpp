#pragma once

// Closed-form constants and right-hand sides of the semiclassical and
// semigroup bounds. Everything here is scalar arithmetic except estimate_b,
// which samples boundary vectors. Comparison against measured counts happens
// in the scenario runner.

#include <cstdint>
#include <optional>
#include <string>

#include "a2rlab/a2r.hpp"
#include "a2rlab/model.hpp"

namespace a2rlab {

/// Which measure of the unit sphere/ball enters the trace Sobolev constant.
enum class OmegaConvention { sphere_area, ball_volume };

std::string to_string(OmegaConvention c);
OmegaConvention omega_convention_from_string(const std::string& s);

/// omega_n under the chosen convention: 2 pi^(n/2) / Gamma(n/2) for the
/// sphere area, pi^(n/2) / Gamma(1 + n/2) for the ball volume.
double omega(int n, OmegaConvention c);

/// C_n = (4 pi)^(-n/2) / Gamma(1 + n/2).
double classical_constant(int n);

/// Best Sobolev constant S_n = (n(n-2) pi)^-1 (Gamma(n) / Gamma(n/2))^(2/n), n >= 3.
double sobolev_constant(int n);

/// r -> 2r/(r-2) and its inverse d -> 2d/(d-2).
double exponent_from_sobolev(double r);
double sobolev_from_exponent(double d);

struct WeightedSobolev {
  double r = 0.0;
  double s_r = 0.0;
  double d = 0.0;  // 2r/(r-2)
};

/// r = n*(1 - 1/p) with n* = 2n/(n-2); S_r = S_n ||W||_p^(2/r). Needs n >= 3, p > n/2.
WeightedSobolev weighted_sobolev(int n, double p, double norm_wp);

/// e^(2d) S_n^d ||W||_1^2 ||W||_p^(d-2) lambda^d.
double dirichlet_count_bound(int n, double p, double norm_w1, double norm_wp, double lambda);

struct SemigroupBounds {
  double two_to_inf = 0.0;  // (e (d/4) S_r)^(d/4) t^(-d/4)
  double trace = 0.0;       // ||W||_1^2 (e d S_r)^d t^(-d)
};

SemigroupBounds ultracontractivity_and_trace_bounds(double d, double s_r, double norm_w1, double t);

struct TraceSobolev {
  double q = 0.0;  // 2(n-1)/(n-2)
  double s = 0.0;  // (2/(n-2)) omega_n^(1/(1-n))
};

TraceSobolev trace_sobolev_constants(int n, OmegaConvention c = OmegaConvention::sphere_area);

struct BoundaryConstants {
  double s = 0.0;  // q (1 - 1/p)
  double m = 0.0;  // 2s/(s-2)
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Throws SubcriticalExponent when s <= 2, i.e. p <= n - 1.
BoundaryConstants boundary_bound_constants(int n, double p, double trace_s, double b,
                                           double norm_dmu_dsigma_p, double norm_dnu_dmu_inf);

/// e^(2m) ||W||_1^2 (c1 gamma + c2)^m.
double a2r_count_bound(double m, double c1, double c2, double norm_w1, double gamma);

/// (e m c1)^m ||W||_1^2 e^((c2/c1) t) t^(-m).
double a2r_trace_bound(double m, double c1, double c2, double norm_w1, double t);

/// (e (m/4) c1)^(m/4) e^((c2/c1) t) t^(-m/4).
double a2r_ultracontractivity_bound(double m, double c1, double c2, double t);

struct BEstimate {
  double b = 0.0;
  Index samples = 0;
  bool empirical = true;  // a lower estimate of the true constant
};

/// max over sampled boundary vectors phi of
///   (||phi||^2_{L^q(sigma)} - S phi^T S0 phi) / ||phi||^2_{L^2(nu_e)}.
/// The candidate sequence is the constant vector, then the lowest
/// `steklov_vectors` eigenvectors of (S0, diag mu_e), then seeded random
/// vectors; the first `samples` candidates are used.
BEstimate estimate_b(const Eigen::MatrixXd& s0, const BoundaryMeasures& bm,
                     const Eigen::VectorXd& sigma, double q, double trace_s, Index samples,
                     std::uint64_t seed = 0, Index steklov_vectors = 8);

/// C_n |Omega| mu^(n/2).
double polya_weyl_report(int n, double volume, double mu);

/// L_n * sum_x h^n (V(x) - mu)_-^(n/2). Throws MissingConstant if L_n is unset.
double lieb_bound(const PotentialField& v, double mu, std::optional<double> l_n);

/// Every constant of the bound chain in one place, for reports.
struct BoundConstants {
  int n = 3;
  double p = 0.0;
  double n_star = 0.0;
  double r = 0.0;
  double s_n = 0.0;
  double s_r = 0.0;
  double d = 0.0;
  double q = 0.0;
  double trace_s = 0.0;
  std::optional<double> b;
  double s = 0.0;
  double m = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c_n = 0.0;
  std::optional<double> l_n;
  OmegaConvention convention = OmegaConvention::sphere_area;
};

/// Fills the interior chain (n*, r, S_n, S_r, d), the trace Sobolev pair and
/// C_n. The boundary constants are filled only when b is known and s > 2;
/// otherwise they stay NaN.
BoundConstants bound_constants(int n, double p, double norm_wp, OmegaConvention c,
                               std::optional<double> b, std::optional<double> l_n,
                               double norm_dmu_dsigma_p, double norm_dnu_dmu_inf);

}  // namespace a2rlab
