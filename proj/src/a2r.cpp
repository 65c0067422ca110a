#include "a2rlab/a2r.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "a2rlab/errors.hpp"
#include "a2rlab/random.hpp"

namespace a2rlab {

namespace {

SparseMatrix shifted_interior(const AssembledPencil& p, double lambda) {
  SparseMatrix a = p.block_ii();
  for (Index i = 0; i < p.n_interior; ++i) a.coeffRef(i, i) -= lambda * p.mass[i];
  a.makeCompressed();
  return a;
}

SymmetricFactor factor_resolvent(const AssembledPencil& p, double lambda, const InertiaOptions& opts) {
  SymmetricFactor f(shifted_interior(p, lambda), opts);
  if (f.singular()) {
    std::ostringstream os;
    os << "lambda = " << lambda << " is a Dirichlet eigenvalue (n0 = " << f.inertia().n_zero << ")";
    throw ResolventViolation(os.str());
  }
  return f;
}

Eigen::MatrixXd poisson_from(const AssembledPencil& p, const DirichletResolvent& r) {
  const Eigen::MatrixXd kib = Eigen::MatrixXd(p.block_ib());
  return -r.solve(kib);
}

Eigen::MatrixXd schur_from(const AssembledPencil& p, const Eigen::MatrixXd& pl) {
  Eigen::MatrixXd s = Eigen::MatrixXd(p.block_bb());
  s.noalias() += Eigen::MatrixXd(p.block_ib()).transpose() * pl;
  return 0.5 * (s + s.transpose());
}

void require_boundary_vector(const AssembledPencil& p, const Eigen::VectorXd& phi) {
  if (phi.size() != p.n_boundary) throw PreconditionError("boundary vector has the wrong size");
}

}  // namespace

DirichletResolvent::DirichletResolvent(const AssembledPencil& p, double lambda,
                                       const InertiaOptions& opts)
    : lambda_(lambda), factor_(factor_resolvent(p, lambda, opts)) {}

Eigen::MatrixXd poisson_matrix(const AssembledPencil& p, double lambda) {
  return poisson_from(p, DirichletResolvent(p, lambda));
}

Eigen::VectorXd harmonic_extension(const AssembledPencil& p, double lambda,
                                   const Eigen::VectorXd& phi) {
  require_boundary_vector(p, phi);
  const DirichletResolvent r(p, lambda);
  Eigen::VectorXd u(p.order());
  u.tail(p.n_boundary) = phi;
  u.head(p.n_interior) = -r.solve(p.block_ib() * phi);
  return u;
}

Eigen::MatrixXd schur_form(const AssembledPencil& p, double lambda) {
  return schur_from(p, poisson_matrix(p, lambda));
}

Eigen::MatrixXd a_lambda_matrix(const AssembledPencil& p, double lambda) {
  // A = M^{-1} K (K - lambda M)^{-1} M on interior vectors.
  const DirichletResolvent r(p, lambda);
  const Eigen::VectorXd m = p.interior_mass();
  const Eigen::MatrixXd y = r.solve(Eigen::MatrixXd(m.asDiagonal()));
  Eigen::MatrixXd a = p.block_ii() * y;
  return m.cwiseInverse().asDiagonal() * a;
}

BoundaryMeasures boundary_measures(const AssembledPencil& p, const Eigen::MatrixXd& p0) {
  if (p0.rows() != p.n_interior || p0.cols() != p.n_boundary) {
    throw PreconditionError("Poisson matrix has the wrong shape");
  }
  BoundaryMeasures bm;
  bm.mu = p0.transpose() * p.interior_mass();
  bm.nu = p0.transpose() * Eigen::VectorXd::Constant(p.n_interior, p.grid.cell_volume());
  bm.dmu_dsigma = bm.mu.cwiseQuotient(p.sigma);
  bm.dnu_dsigma = bm.nu.cwiseQuotient(p.sigma);
  bm.dnu_dmu = bm.nu.cwiseQuotient(bm.mu);
  return bm;
}

BoundaryMeasures boundary_measures(const AssembledPencil& p) {
  return boundary_measures(p, poisson_matrix(p, 0.0));
}

double a_lambda_norm(const SpectralSummary& dirichlet, double lambda) {
  const auto& mu = dirichlet.eigenvalues;
  if (mu.size() == 0) throw PreconditionError("a_lambda_norm needs a nonempty spectrum");
  if (!(mu.minCoeff() > 0.0)) throw PreconditionError("a_lambda_norm needs a positive spectrum");
  if (lambda == 0.0) return 0.0;

  const double scale = std::max(std::abs(lambda), mu.cwiseAbs().maxCoeff());
  auto f = [&](double m) {
    if (std::abs(m - lambda) <= 1e-14 * scale) {
      std::ostringstream os;
      os << "lambda = " << lambda << " is a Dirichlet eigenvalue";
      throw OnEigenvalue(os.str());
    }
    return std::abs(lambda * m / (m - lambda));
  };
  const Index n = mu.size();
  double best = std::max(f(mu[0]), f(mu[n - 1]));
  const auto* begin = mu.data();
  const auto* above = std::lower_bound(begin, begin + n, lambda);
  if (above != begin + n) best = std::max(best, f(*above));
  if (above != begin) best = std::max(best, f(*(above - 1)));
  return best;
}

double verify_isomorphism(const AssembledPencil& p, double lambda, const Eigen::VectorXd& phi) {
  if (lambda == 0.0) throw PreconditionError("verify_isomorphism needs lambda != 0");
  const Eigen::VectorXd ul = harmonic_extension(p, lambda, phi);
  const Eigen::VectorXd u0 = harmonic_extension(p, 0.0, phi);
  const Eigen::VectorXd v = (ul - u0).head(p.n_interior);
  const Eigen::VectorXd lhs = p.block_ii() * v;
  const Eigen::VectorXd rhs = lambda * p.interior_mass().cwiseProduct(ul.head(p.n_interior));
  const double scale = std::max({lhs.norm(), rhs.norm(), std::numeric_limits<double>::min()});
  return (lhs - rhs).norm() / scale;
}

SplittingCounts splitting_counts(const AssembledPencil& p, double lambda) {
  SparseMatrix full = p.stiffness;
  for (Index i = 0; i < p.n_interior; ++i) full.coeffRef(i, i) -= lambda * p.mass[i];
  const Inertia in_full = inertia(full);
  if (in_full.n_zero > 0) {
    std::ostringstream os;
    os << "lambda = " << lambda << " is an eigenvalue of the full pencil";
    throw OnEigenvalue(os.str());
  }
  const DirichletResolvent r(p, lambda);
  const Eigen::MatrixXd s = schur_from(p, poisson_from(p, r));
  const Inertia in_s = inertia(s);
  if (in_s.n_zero > 0) {
    std::ostringstream os;
    os << "S(lambda) is singular at lambda = " << lambda;
    throw OnEigenvalue(os.str());
  }
  SplittingCounts out;
  out.n_full = in_full.n_minus;
  out.n_dirichlet = r.inertia().n_minus;
  out.n_a2r_nonpositive = in_s.n_minus;
  out.identity_holds = out.n_full == out.n_dirichlet + out.n_a2r_nonpositive;
  return out;
}

namespace {

void require_a2r_inputs(const Eigen::MatrixXd& s0, const BoundaryMeasures& bm) {
  if (s0.rows() != bm.mu.size()) throw PreconditionError("S(0) and mu_e sizes differ");
  for (Index i = 0; i < bm.mu.size(); ++i) {
    if (!(bm.mu[i] > 0.0)) throw PreconditionError("mu_e must be strictly positive");
  }
}

}  // namespace

Index a2r_count(const Eigen::MatrixXd& s0, const BoundaryMeasures& bm, double gamma) {
  require_a2r_inputs(s0, bm);
  Eigen::MatrixXd a = s0;
  a.diagonal() -= gamma * bm.mu;
  const Inertia in = inertia(a);
  if (in.n_zero > 0) {
    std::ostringstream os;
    os << "gamma = " << gamma << " is an eigenvalue of the absorption-to-reflection pencil";
    throw OnEigenvalue(os.str());
  }
  return in.n_minus;
}

A2RSpectrum a2r_spectrum_and_count(const Eigen::MatrixXd& s0, const BoundaryMeasures& bm,
                                   double gamma) {
  require_a2r_inputs(s0, bm);
  A2RSpectrum out;
  out.spectrum = pencil_eigs(s0, bm.mu, false, "a2r");
  const double scale = std::max(1.0, out.spectrum.eigenvalues.cwiseAbs().maxCoeff());
  if (out.spectrum.size() > 0 && out.spectrum.eigenvalues[0] < -1e-9 * scale) {
    throw PreconditionError("S(0) is not positive semidefinite");
  }
  out.count = a2r_count(s0, bm, gamma);
  return out;
}

RadonNikodymReport radon_nikodym_report(const BoundaryMeasures& bm, const Eigen::VectorXd& sigma,
                                        double p) {
  if (bm.mu.size() == 0) throw PreconditionError("boundary is empty");
  if (!(p >= 1.0)) throw PreconditionError("L^p norm requires p >= 1");
  RadonNikodymReport r;
  r.p = p;
  double sum = 0.0;
  for (Index b = 0; b < sigma.size(); ++b) sum += sigma[b] * std::pow(bm.dmu_dsigma[b], p);
  r.dmu_dsigma_lp = std::pow(sum, 1.0 / p);
  r.dnu_dsigma_sup = bm.dnu_dsigma.maxCoeff();
  r.dnu_dmu_sup = bm.dnu_dmu.maxCoeff();
  return r;
}

PoissonConstantEstimate estimate_poisson_constant(const AssembledPencil& p,
                                                  const Eigen::MatrixXd& p0, Index samples,
                                                  std::uint64_t seed) {
  const int n = p.grid.dimension;
  if (n < 2) throw DimensionTooLow("Poisson kernel estimate needs n >= 2");
  if (p.n_boundary == 0 || p.n_interior == 0) throw PreconditionError("empty decomposition");

  std::vector<Point> bpts(static_cast<std::size_t>(p.n_boundary));
  for (Index b = 0; b < p.n_boundary; ++b) bpts[b] = p.coordinate(p.n_interior + b);

  std::mt19937_64 gen(seed);
  PoissonConstantEstimate est;
  for (Index s = 0; s < samples; ++s) {
    const Index i = uniform_index(gen, p.n_interior);
    const Index b = uniform_index(gen, p.n_boundary);
    const Point x = p.coordinate(i);
    double dist_to_boundary = std::numeric_limits<double>::infinity();
    for (const auto& y : bpts) dist_to_boundary = std::min(dist_to_boundary, distance(x, y));
    const double k = dist_to_boundary / std::pow(distance(x, bpts[b]), n);
    const double h = p0(i, b) / p.sigma[b];
    if (h <= 0.0) continue;  // disconnected pair: no two-sided bound possible
    est.c_p = std::max({est.c_p, h / k, k / h});
    ++est.pairs;
  }
  return est;
}

PoissonConstantEstimate estimate_poisson_constant(const AssembledPencil& p, Index samples,
                                                  std::uint64_t seed) {
  return estimate_poisson_constant(p, poisson_matrix(p, 0.0), samples, seed);
}

BoundaryAnalysis analyze_boundary(const AssembledPencil& p) {
  BoundaryAnalysis a;
  a.p0 = poisson_matrix(p, 0.0);
  a.s0 = schur_from(p, a.p0);
  a.measures = boundary_measures(p, a.p0);
  a.dirichlet = pencil_eigs(p.block_ii(), p.interior_mass(), true, "dirichlet");
  return a;
}

}  // namespace a2rlab
