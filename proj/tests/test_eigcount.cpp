#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "a2rlab/assemble.hpp"
#include "a2rlab/eigcount.hpp"
#include "a2rlab/errors.hpp"
#include "a2rlab/random.hpp"
#include "oracles.hpp"

using namespace a2rlab;

namespace {

Eigen::MatrixXd random_symmetric(std::mt19937_64& gen, Index n) {
  Eigen::MatrixXd a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = uniform_symmetric(gen);
  }
  return a;
}

Inertia oracle_inertia(const Eigen::MatrixXd& a) {
  const Eigen::VectorXd ev = oracle::sym_eigenvalues(a);
  const double tol = 1e-9 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  Inertia in;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -tol) ++in.n_minus;
    else if (ev[i] > tol) ++in.n_plus;
    else ++in.n_zero;
  }
  return in;
}

}  // namespace

TEST_CASE("Bunch-Kaufman inertia matches the symmetric eigensolver") {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + uniform_index(gen, 40);
    const Eigen::MatrixXd a = random_symmetric(gen, n);
    const BunchKaufman bk(a);
    CHECK(bk.inertia(1e-12 * bk.max_abs_entry()) == oracle_inertia(a));
    const Eigen::MatrixXd b = Eigen::MatrixXd::Random(n, 2);
    const Eigen::MatrixXd x = bk.solve(b);
    CHECK((a * x - b).norm() <= 1e-8 * (1.0 + a.norm() * x.norm()));
  }
}

TEST_CASE("Bunch-Kaufman handles zero diagonals with 2x2 pivots") {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 1, 0;
  const BunchKaufman bk(a);
  CHECK(bk.inertia(0.0) == Inertia{1, 0, 1});
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 3);
  z(0, 0) = 1.0;
  z(2, 2) = -1.0;
  CHECK(inertia(z) == Inertia{1, 1, 1});
  CHECK_THROWS_AS(BunchKaufman(z).solve(Eigen::MatrixXd::Ones(3, 1)), FactorizationBreakdown);
}

TEST_CASE("sparse factorization falls back to dense pivoting on a zero pivot") {
  SparseMatrix a(2, 2);
  a.insert(0, 1) = 1.0;
  a.insert(1, 0) = 1.0;
  const SymmetricFactor f(a);
  CHECK(f.used_dense());
  CHECK(f.inertia() == Inertia{1, 0, 1});

  SparseMatrix spd(3, 3);
  spd.insert(0, 0) = 2.0;
  spd.insert(1, 1) = 3.0;
  spd.insert(2, 2) = 4.0;
  const SymmetricFactor g(spd);
  CHECK_FALSE(g.used_dense());
  CHECK(g.inertia() == Inertia{0, 0, 3});
  CHECK(inertia(SparseMatrix(0, 0)) == Inertia{0, 0, 0});
}

TEST_CASE("asymmetric and non-finite inputs are rejected") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 3, 4;
  CHECK_THROWS_AS(inertia(a), PreconditionError);
  a << 1, NAN, NAN, 1;
  CHECK_THROWS_AS(inertia(a), PreconditionError);
}

TEST_CASE("count_below on a diagonal pencil") {
  const Eigen::MatrixXd k = Eigen::Vector3d(1, 2, 3).asDiagonal();
  const Eigen::VectorXd m = Eigen::VectorXd::Ones(3);
  CHECK(count_below(k, m, 2.5) == 2);
  CHECK(count_below(k, m, 0.5) == 0);
  CHECK(count_below(k, m, 10.0) == 3);
  CHECK_THROWS_AS(count_below(k, m, 2.0), OnEigenvalue);
  // A massless node where K vanishes breaks the precondition.
  Eigen::MatrixXd k0 = k;
  k0(2, 2) = 0.0;
  Eigen::VectorXd m0 = m;
  m0[2] = 0.0;
  CHECK_THROWS_AS(count_below(k0, m0, 1.5), PreconditionError);
  CHECK_THROWS_AS(count_below(k, Eigen::Vector3d(1, -1, 1), 1.5), PreconditionError);
}

TEST_CASE("pencil spectra match the QZ oracle, including massless nodes") {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 2 + uniform_index(gen, 30);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) b(i, j) = uniform_symmetric(gen);
    }
    const Eigen::MatrixXd k = b * b.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd m(n);
    for (Index i = 0; i < n; ++i) m[i] = uniform01(gen) < 0.3 ? 0.0 : 0.1 + uniform01(gen);
    if (m.maxCoeff() == 0.0) m[0] = 1.0;

    const SpectralSummary s = pencil_eigs(k, m, true);
    const auto ref = oracle::qz_eigenvalues(k, m);
    REQUIRE(s.size() == static_cast<Index>(ref.size()));
    for (Index i = 0; i < s.size(); ++i) {
      CHECK(s.eigenvalues[i] == doctest::Approx(ref[i]).epsilon(1e-7));
    }
    const Eigen::MatrixXd& x = *s.eigenvectors;
    const Eigen::MatrixXd gram = x.transpose() * m.asDiagonal() * x;
    CHECK((gram - Eigen::MatrixXd::Identity(s.size(), s.size())).norm() < 1e-8);
    const Eigen::MatrixXd resid = k * x - m.asDiagonal() * x * s.eigenvalues.asDiagonal();
    CHECK(resid.norm() < 1e-7 * (1.0 + k.norm()) * std::max(1.0, s.eigenvalues.cwiseAbs().maxCoeff()));

    // Counting agrees with the spectrum away from eigenvalues.
    const double lambda = 0.5 * (ref.front() + ref.back());
    const bool near = std::any_of(ref.begin(), ref.end(), [&](double mu) { return std::abs(mu - lambda) < 1e-6; });
    if (!near) {
      const auto expected = std::count_if(ref.begin(), ref.end(), [&](double mu) { return mu < lambda; });
      CHECK(count_below(k, m, lambda) == expected);
    }
  }
}

TEST_CASE("count_below is nondecreasing in lambda") {
  std::mt19937_64 gen(3);
  const Index n = 25;
  Eigen::MatrixXd b = Eigen::MatrixXd::Random(n, n);
  const Eigen::MatrixXd k = b * b.transpose() + Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd m = Eigen::VectorXd::Constant(n, 1.0);
  Index prev = 0;
  for (double lambda = 0.01; lambda < 200.0; lambda *= 1.37) {
    const Index c = count_below(k, m, lambda);
    CHECK(c >= prev);
    prev = c;
  }
  CHECK(prev == n);
}

TEST_CASE("pencil_eigs refuses orders above the dense cap") {
  SparseMatrix k(kDenseOrderCap + 1, kDenseOrderCap + 1);
  k.setIdentity();
  CHECK_THROWS_AS(pencil_eigs(k, Eigen::VectorXd::Ones(kDenseOrderCap + 1), false), SizeCap);
}

TEST_CASE("heat trace and the 2 -> inf norm agree with the matrix exponential") {
  const Index n = 12;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    k(i, i) = 2.0;
    if (i + 1 < n) k(i, i + 1) = k(i + 1, i) = -1.0;
  }
  Eigen::VectorXd m(n);
  for (Index i = 0; i < n; ++i) m[i] = 0.5 + 0.1 * i;

  const SpectralSummary s = pencil_eigs(k, m, true);
  for (double t : {0.01, 0.3, 2.0, 10.0}) {
    CHECK(heat_trace(s, t) == doctest::Approx(oracle::expm_heat_trace(k, m, t)).epsilon(1e-10));

    // Kernel of exp(-t M^-1 K) w.r.t. the measure m: p_t(x, y) = (e^{-tA})_{xy} / m_y.
    const Eigen::MatrixXd a = -(t * m.cwiseInverse().asDiagonal() * k);
    const Eigen::MatrixXd e = a.exp();
    double best = 0.0;
    for (Index x = 0; x < n; ++x) {
      double sq = 0.0;
      for (Index y = 0; y < n; ++y) sq += e(x, y) * e(x, y) / m[y];
      best = std::max(best, sq);
    }
    CHECK(two_infinity_norm(s, m, t) == doctest::Approx(std::sqrt(best)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(heat_trace(s, 0.0), PreconditionError);
  const SpectralSummary bare = pencil_eigs(k, m, false);
  CHECK_THROWS_AS(two_infinity_norm(bare, m, 1.0), MissingVectors);
}

namespace {

Eigen::MatrixXd path_laplacian(Index n, bool dirichlet) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) {
    k(i, i) += 1.0;
    k(i + 1, i + 1) += 1.0;
    k(i, i + 1) = k(i + 1, i) = -1.0;
  }
  if (dirichlet) {
    k(0, 0) += 1.0;
    k(n - 1, n - 1) += 1.0;
  }
  return k;
}

}  // namespace

TEST_CASE("inertia examples") {
  CHECK(inertia(Eigen::MatrixXd(Eigen::Vector2d(1, -2).asDiagonal())) == Inertia{1, 0, 1});
  CHECK(inertia(Eigen::MatrixXd(Eigen::Vector4d(3, 0, -1, -1).asDiagonal())) == Inertia{2, 1, 1});
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd a = random_symmetric(gen, 8);
    CHECK(inertia(a) == oracle_inertia(a));
    CHECK(inertia(a).order() == 8);
  }
}

TEST_CASE("Sylvester: inertia is invariant under congruence") {
  std::mt19937_64 gen(10);
  Eigen::MatrixXd a = random_symmetric(gen, 8);
  a.row(7).setZero();
  a.col(7).setZero();
  const Inertia ref = inertia(a);
  CHECK(ref.n_zero == 1);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd g(8, 8);
    for (Index i = 0; i < 64; ++i) g.data()[i] = uniform_symmetric(gen);
    g += 3.0 * Eigen::MatrixXd::Identity(8, 8);
    REQUIRE(std::abs(g.determinant()) > 1e-6);
    const Eigen::MatrixXd c = g.transpose() * a * g;
    CHECK(inertia(Eigen::MatrixXd(0.5 * (c + c.transpose()))) == ref);
  }
}

TEST_CASE("Haynsworth additivity on random symmetric matrices") {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + uniform_index(gen, 20);
    const Index k = 1 + uniform_index(gen, n - 1);
    const Eigen::MatrixXd a = random_symmetric(gen, n);
    const Eigen::MatrixXd a11 = a.topLeftCorner(k, k);
    if (oracle::min_abs_eigenvalue(a11) < 1e-6) continue;
    const Eigen::MatrixXd schur = a.bottomRightCorner(n - k, n - k) -
                                  a.bottomLeftCorner(n - k, k) * a11.inverse() * a.topRightCorner(k, n - k);
    if (oracle::min_abs_eigenvalue(schur) < 1e-6 || oracle::min_abs_eigenvalue(a) < 1e-6) continue;
    CHECK(inertia(a) == inertia(a11) + inertia(Eigen::MatrixXd(0.5 * (schur + schur.transpose()))));
  }
}

TEST_CASE("counting examples") {
  const Eigen::MatrixXd path3 = path_laplacian(3, true);
  CHECK(count_below(path3, Eigen::VectorXd::Ones(3), 3.0) == 2);

  const Eigen::MatrixXd free3 = path_laplacian(3, false);
  const Eigen::Vector3d m(1, 1, 0);
  const auto ref = oracle::qz_eigenvalues(free3, m);
  const auto expected = std::count_if(ref.begin(), ref.end(), [](double mu) { return mu < 0.5; });
  CHECK(count_below(free3, m, 0.5) == expected);
  CHECK(count_below(free3, m, -0.1) == 0);

  const SpectralSummary one = pencil_eigs(Eigen::MatrixXd::Constant(1, 1, 2.0), Eigen::VectorXd::Ones(1), false);
  CHECK(one.eigenvalues.size() == 1);
  CHECK(one.eigenvalues[0] == doctest::Approx(2.0));

  const SpectralSummary path4 = pencil_eigs(path_laplacian(4, true), Eigen::VectorXd::Ones(4), false);
  for (int k = 1; k <= 4; ++k) {
    CHECK(path4.eigenvalues[k - 1] == doctest::Approx(2 - 2 * std::cos(k * std::numbers::pi / 5)));
  }

  std::mt19937_64 gen(13);
  const Eigen::MatrixXd big = path_laplacian(30, true);
  const Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(30, 0.5, 2.0);
  const SpectralSummary s = pencil_eigs(big, w, false);
  for (int trial = 0; trial < 100; ++trial) {
    const double lambda = -0.2 + 5.0 * uniform01(gen);
    CHECK(count_below(big, w, lambda) == (s.eigenvalues.array() < lambda).count());
  }
  CHECK(count_below(big, w, 0.5 * s.eigenvalues[0]) == 0);
}

TEST_CASE("heat trace examples and shape") {
  const SpectralSummary two{"x", Eigen::Vector2d(1.0, 2.0), std::nullopt};
  CHECK(heat_trace(two, 1.0) == doctest::Approx(0.503215).epsilon(1e-6));
  CHECK(heat_trace(two, 1e-12) == doctest::Approx(2.0));

  const SpectralSummary path3 = pencil_eigs(path_laplacian(3, true), Eigen::VectorXd::Ones(3), false);
  const double r2 = std::sqrt(2.0);
  CHECK(heat_trace(path3, 0.5) ==
        doctest::Approx(std::exp(-0.5 * (2 - r2)) + std::exp(-1.0) + std::exp(-0.5 * (2 + r2))));

  // Strictly decreasing and log-convex along a t grid.
  const SpectralSummary s = pencil_eigs(path_laplacian(20, true), Eigen::VectorXd::Ones(20), false);
  std::vector<double> logs;
  for (double t = 0.05; t < 20.0; t *= 1.5) logs.push_back(std::log(heat_trace(s, t)));
  for (std::size_t i = 1; i < logs.size(); ++i) CHECK(logs[i] < logs[i - 1]);
  double t = 0.05;
  for (int i = 0; i < 20; ++i, t += 0.4) {
    const double a = std::log(heat_trace(s, t));
    const double b = std::log(heat_trace(s, t + 0.2));
    const double c = std::log(heat_trace(s, t + 0.4));
    CHECK(2 * b <= a + c + 1e-12);
  }
}

TEST_CASE("2 -> inf norm examples") {
  const SpectralSummary single{"x", Eigen::VectorXd::Constant(1, 1.7), Eigen::MatrixXd::Identity(1, 1)};
  CHECK(two_infinity_norm(single, Eigen::VectorXd::Ones(1), 0.8) == doctest::Approx(std::exp(-1.7 * 0.8)));

  const Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(6, 0.3, 1.8);
  const SpectralSummary s = pencil_eigs(path_laplacian(6, true), w, true);
  CHECK(two_infinity_norm(s, w, 1e-12) == doctest::Approx(1.0 / std::sqrt(w.minCoeff())).epsilon(1e-6));
}

TEST_CASE("2 -> inf norm on a disk-well Dirichlet pencil") {
  const PotentialField v = build_potential(BallWell{{0, 0, 0}, 1.0, 2.0}, GridSpec::cube(2, -2.0, 2.0, 13));
  const SublevelDecomposition d = a2rlab::classify_nodes(v, -0.5);
  const AssembledPencil p = assemble_pencil(d, v, -0.5);
  const Eigen::MatrixXd k = p.block_ii();
  const Eigen::VectorXd m = p.interior_mass();
  const SpectralSummary s = pencil_eigs(k, m, true);
  for (double t : {0.05, 0.5}) {
    const Eigen::MatrixXd e = (-(t * m.cwiseInverse().asDiagonal() * k)).exp();
    double best = 0.0;
    for (Index x = 0; x < k.rows(); ++x) {
      double sq = 0.0;
      for (Index y = 0; y < k.rows(); ++y) sq += e(x, y) * e(x, y) / m[y];
      best = std::max(best, sq);
    }
    CHECK(two_infinity_norm(s, m, t) == doctest::Approx(std::sqrt(best)).epsilon(1e-8));
  }
}
