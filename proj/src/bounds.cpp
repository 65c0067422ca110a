#include "a2rlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "a2rlab/errors.hpp"
#include "a2rlab/random.hpp"

namespace a2rlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_dimension(int n) {
  if (n < 3) throw DimensionTooLow("bound evaluators need n >= 3, got n = " + std::to_string(n));
}

}  // namespace

std::string to_string(OmegaConvention c) {
  return c == OmegaConvention::sphere_area ? "sphere_area" : "ball_volume";
}

OmegaConvention omega_convention_from_string(const std::string& s) {
  if (s == "sphere_area") return OmegaConvention::sphere_area;
  if (s == "ball_volume") return OmegaConvention::ball_volume;
  throw ConfigError("unknown omega convention '" + s + "'");
}

double omega(int n, OmegaConvention c) {
  if (n < 1) throw PreconditionError("omega needs n >= 1");
  const double half = 0.5 * n;
  if (c == OmegaConvention::sphere_area) return 2.0 * std::pow(kPi, half) / std::tgamma(half);
  return std::pow(kPi, half) / std::tgamma(1.0 + half);
}

double classical_constant(int n) {
  if (n < 1) throw PreconditionError("classical_constant needs n >= 1");
  return std::pow(4.0 * kPi, -0.5 * n) / std::tgamma(1.0 + 0.5 * n);
}

double sobolev_constant(int n) {
  require_dimension(n);
  return std::pow(std::tgamma(n) / std::tgamma(0.5 * n), 2.0 / n) / (n * (n - 2) * kPi);
}

double exponent_from_sobolev(double r) {
  if (!(r > 2.0)) throw PreconditionError("Sobolev exponent must exceed 2");
  return 2.0 * r / (r - 2.0);
}

double sobolev_from_exponent(double d) {
  if (!(d > 2.0)) throw PreconditionError("dimension exponent must exceed 2");
  return 2.0 * d / (d - 2.0);
}

WeightedSobolev weighted_sobolev(int n, double p, double norm_wp) {
  require_dimension(n);
  if (!(p > 0.5 * n)) throw PreconditionError("weighted Sobolev inequality needs p > n/2");
  if (!(norm_wp >= 0.0)) throw PreconditionError("norm must be nonnegative");
  const double n_star = 2.0 * n / (n - 2.0);
  WeightedSobolev w;
  w.r = n_star * (1.0 - 1.0 / p);
  w.s_r = sobolev_constant(n) * std::pow(norm_wp, 2.0 / w.r);
  w.d = exponent_from_sobolev(w.r);
  return w;
}

double dirichlet_count_bound(int n, double p, double norm_w1, double norm_wp, double lambda) {
  if (!(lambda >= 0.0)) throw PreconditionError("dirichlet_count_bound needs lambda >= 0");
  const WeightedSobolev w = weighted_sobolev(n, p, norm_wp);
  const double d = w.d;
  return std::exp(2.0 * d) * std::pow(sobolev_constant(n), d) * norm_w1 * norm_w1 *
         std::pow(norm_wp, d - 2.0) * std::pow(lambda, d);
}

SemigroupBounds ultracontractivity_and_trace_bounds(double d, double s_r, double norm_w1, double t) {
  if (!(t > 0.0)) throw PreconditionError("semigroup bounds need t > 0");
  SemigroupBounds b;
  b.two_to_inf = std::pow(kE * (d / 4.0) * s_r, d / 4.0) * std::pow(t, -d / 4.0);
  b.trace = norm_w1 * norm_w1 * std::pow(kE * d * s_r, d) * std::pow(t, -d);
  return b;
}

TraceSobolev trace_sobolev_constants(int n, OmegaConvention c) {
  require_dimension(n);
  TraceSobolev ts;
  ts.q = 2.0 * (n - 1.0) / (n - 2.0);
  ts.s = (2.0 / (n - 2.0)) * std::pow(omega(n, c), 1.0 / (1.0 - n));
  return ts;
}

BoundaryConstants boundary_bound_constants(int n, double p, double trace_s, double b,
                                           double norm_dmu_dsigma_p, double norm_dnu_dmu_inf) {
  require_dimension(n);
  if (!(p >= 1.0)) throw PreconditionError("boundary constants need p >= 1");
  const double q = 2.0 * (n - 1.0) / (n - 2.0);
  BoundaryConstants bc;
  bc.s = q * (1.0 - 1.0 / p);
  // s = 2 exactly at p = n - 1; allow for rounding in q (1 - 1/p).
  if (!(bc.s > 2.0 + 1e-12)) {
    throw SubcriticalExponent("boundary Sobolev exponent s = " + std::to_string(bc.s) +
                              " must exceed 2 (needs p > n - 1)");
  }
  bc.m = 2.0 * bc.s / (bc.s - 2.0);
  const double factor = std::pow(norm_dmu_dsigma_p, 2.0 / bc.s);
  bc.c1 = trace_s * factor;
  bc.c2 = b * factor * norm_dnu_dmu_inf;
  return bc;
}

double a2r_count_bound(double m, double c1, double c2, double norm_w1, double gamma) {
  if (!(gamma >= 0.0)) throw PreconditionError("a2r_count_bound needs gamma >= 0");
  return std::exp(2.0 * m) * norm_w1 * norm_w1 * std::pow(c1 * gamma + c2, m);
}

double a2r_trace_bound(double m, double c1, double c2, double norm_w1, double t) {
  if (!(t > 0.0)) throw PreconditionError("trace bound needs t > 0");
  return std::pow(kE * m * c1, m) * norm_w1 * norm_w1 * std::exp((c2 / c1) * t) * std::pow(t, -m);
}

double a2r_ultracontractivity_bound(double m, double c1, double c2, double t) {
  if (!(t > 0.0)) throw PreconditionError("ultracontractivity bound needs t > 0");
  return std::pow(kE * (m / 4.0) * c1, m / 4.0) * std::exp((c2 / c1) * t) * std::pow(t, -m / 4.0);
}

BEstimate estimate_b(const Eigen::MatrixXd& s0, const BoundaryMeasures& bm,
                     const Eigen::VectorXd& sigma, double q, double trace_s, Index samples,
                     std::uint64_t seed, Index steklov_vectors) {
  const Index nb = s0.rows();
  if (nb == 0 || bm.nu.size() != nb || sigma.size() != nb) {
    throw PreconditionError("estimate_b needs matching nonempty boundary data");
  }
  auto ratio = [&](const Eigen::VectorXd& phi) {
    double lq = 0.0;
    for (Index b = 0; b < nb; ++b) lq += sigma[b] * std::pow(std::abs(phi[b]), q);
    lq = std::pow(lq, 2.0 / q);
    const double energy = phi.dot(s0 * phi);
    const double l2nu = phi.cwiseAbs2().dot(bm.nu);
    return (lq - trace_s * energy) / l2nu;
  };

  BEstimate est;
  est.b = -std::numeric_limits<double>::infinity();
  auto take = [&](const Eigen::VectorXd& phi) {
    if (est.samples >= samples) return false;
    est.b = std::max(est.b, ratio(phi));
    ++est.samples;
    return true;
  };

  if (!take(Eigen::VectorXd::Ones(nb))) return est;
  const Index k = std::min(steklov_vectors, nb);
  if (k > 0 && est.samples < samples) {
    const SpectralSummary st = pencil_eigs(s0, bm.mu, true, "steklov");
    for (Index j = 0; j < k; ++j) {
      if (!take(st.eigenvectors->col(j))) return est;
    }
  }
  std::mt19937_64 gen(seed);
  Eigen::VectorXd phi(nb);
  while (est.samples < samples) {
    for (Index b = 0; b < nb; ++b) phi[b] = uniform_symmetric(gen);
    take(phi);
  }
  return est;
}

double polya_weyl_report(int n, double volume, double mu) {
  if (!(mu >= 0.0)) throw PreconditionError("Weyl/Polya term needs mu >= 0");
  return classical_constant(n) * volume * std::pow(mu, 0.5 * n);
}

double lieb_bound(const PotentialField& v, double mu, std::optional<double> l_n) {
  require_dimension(v.grid.dimension);
  if (!l_n) throw MissingConstant("Lieb constant L_n is not configured");
  const double half = 0.5 * v.grid.dimension;
  double sum = 0.0;
  for (double value : v.values) sum += std::pow(std::max(mu - value, 0.0), half);
  return *l_n * sum * v.grid.cell_volume();
}

BoundConstants bound_constants(int n, double p, double norm_wp, OmegaConvention c,
                               std::optional<double> b, std::optional<double> l_n,
                               double norm_dmu_dsigma_p, double norm_dnu_dmu_inf) {
  BoundConstants k;
  k.n = n;
  k.p = p;
  k.convention = c;
  k.b = b;
  k.l_n = l_n;
  k.n_star = 2.0 * n / (n - 2.0);
  const WeightedSobolev w = weighted_sobolev(n, p, norm_wp);
  k.r = w.r;
  k.s_n = sobolev_constant(n);
  k.s_r = w.s_r;
  k.d = w.d;
  const TraceSobolev ts = trace_sobolev_constants(n, c);
  k.q = ts.q;
  k.trace_s = ts.s;
  k.c_n = classical_constant(n);
  k.s = k.m = k.c1 = k.c2 = kNaN;
  if (b) {
    try {
      const BoundaryConstants bc =
          boundary_bound_constants(n, p, ts.s, *b, norm_dmu_dsigma_p, norm_dnu_dmu_inf);
      k.s = bc.s;
      k.m = bc.m;
      k.c1 = bc.c1;
      k.c2 = bc.c2;
    } catch (const SubcriticalExponent&) {
    }
  }
  return k;
}

}  // namespace a2rlab
