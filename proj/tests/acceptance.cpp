// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "a2rlab/a2r.hpp"
#include "a2rlab/bounds.hpp"
#include "a2rlab/eigcount.hpp"
#include "a2rlab/errors.hpp"
#include "a2rlab/random.hpp"
#include "a2rlab/scenario.hpp"
#include "a2rlab/schrodinger.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace a2rlab;

namespace {

const std::filesystem::path kConfigs = A2RLAB_CONFIG_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Eigen::VectorXd random_vector(std::mt19937_64& gen, Index n) {
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = uniform_symmetric(gen);
  return v;
}

// Randomized well scenarios shared by criteria 1, 2 and 5.
struct Case {
  fixture::RandomScenario scenario;
  AssembledPencil pencil;
  BoundaryAnalysis boundary;
};

constexpr int kScenarios = 120;

const std::vector<Case>& cases() {
  static const std::vector<Case> all = [] {
    std::vector<Case> out;
    for (std::uint64_t seed = 1; out.size() < static_cast<std::size_t>(kScenarios); ++seed) {
      auto s = fixture::random_scenario(seed);
      AssembledPencil p = fixture::pencil_of(s.v, s.e);
      BoundaryAnalysis ba = analyze_boundary(p);
      out.push_back({std::move(s), std::move(p), std::move(ba)});
    }
    return out;
  }();
  return all;
}

const std::vector<double>& lambda_grid() {
  static const std::vector<double> g = log_grid(0.02, 50.0, 10);
  return g;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  const auto start = Clock::now();
  Index points = 0, failures = 0, dims2 = 0, dims3 = 0, nudged = 0;
  for (const Case& c : cases()) {
    (c.pencil.grid.dimension == 2 ? dims2 : dims3)++;
    for (double lambda : lambda_grid()) {
      int used = 0;
      const SplittingCounts s = with_nudging(lambda, [&](double x) { return splitting_counts(c.pencil, x); }, 10, &used);
      nudged += used > 0;
      ++points;
      if (!(s.identity_holds && s.n_full == s.n_dirichlet + s.n_a2r_nonpositive)) ++failures;
    }
  }
  const double secs = seconds_since(start);
  Outcome o;
  o.pass = failures == 0 && cases().size() >= 100 && dims2 > 0 && dims3 > 0 && secs <= 300.0;
  o.detail = std::to_string(cases().size()) + " scenarios (" + std::to_string(dims2) + " 2D, " +
             std::to_string(dims3) + " 3D), " + std::to_string(points) + " lambda points, " +
             std::to_string(failures) + " failures, " + std::to_string(nudged) + " nudged, " +
             fmt("%.1f s including setup", secs);
  return o;
}

Outcome criterion2() {
  Index points = 0, failures = 0, strict = 0;
  for (const Case& c : cases()) {
    for (double lambda : lambda_grid()) {
      const auto [full, bound] = with_nudging(lambda, [&](double x) {
        const SplittingCounts s = splitting_counts(c.pencil, x);
        const double gamma = a_lambda_norm(c.boundary.dirichlet, x);
        return std::pair<Index, Index>{s.n_full, s.n_dirichlet + a2r_count(c.boundary.s0, c.boundary.measures, gamma)};
      });
      ++points;
      failures += full > bound;
      strict += full < bound;
    }
  }
  return {failures == 0, std::to_string(points) + " points, " + std::to_string(failures) + " violations, " +
                             std::to_string(strict) + " strict"};
}

Outcome criterion3() {
  Index levels = 0, failures = 0, max_bound = 0;
  std::ostringstream d;
  for (double depth : {2.0, 8.0}) {
    const PotentialField v = fixture::ball_well(3, 17, depth);
    for (int k = 1; k <= 10; ++k) {
      const double e = -depth * (k - 0.5) / 10.0;
      const ReductionResult r = with_nudging(1.0, [&](double x) { return reduction_check(v, e, x); });
      ++levels;
      failures += !r.inequality_holds;
      max_bound = std::max(max_bound, r.n_schrodinger);
    }
  }
  d << levels << " levels (depth 2 and 8, 17^3), " << failures << " violations, max N_schrodinger " << max_bound;
  return {failures == 0, d.str()};
}

Outcome criterion4() {
  struct Pencil {
    std::string name;
    AssembledPencil p;
  };
  std::vector<Pencil> pencils;
  pencils.push_back({"disk 21^2", fixture::pencil_of(fixture::ball_well(2, 21), -0.5)});
  pencils.push_back({"disk 41^2", fixture::pencil_of(fixture::ball_well(2, 41), -0.5)});
  pencils.push_back({"ball 17^3", fixture::pencil_of(fixture::ball_well(3, 17), -0.5)});
  pencils.push_back({"ball 21^3", fixture::pencil_of(fixture::ball_well(3, 21), -0.1)});
  pencils.push_back({"gaussian 21^3",
                     fixture::pencil_of(build_potential(GaussianWell{{0.2, -0.1, 0.0}, 0.6, 3.0},
                                                        GridSpec::cube(3, -2.0, 2.0, 21)),
                                        -0.4)});
  double worst_identity = 0.0, worst_iso = 0.0;
  Index max_order = 0;
  std::mt19937_64 gen(404);
  for (const Pencil& item : pencils) {
    const AssembledPencil& p = item.p;
    max_order = std::max(max_order, p.order());
    const Index ni = p.n_interior;
    const Eigen::MatrixXd k = p.stiffness;
    const Eigen::MatrixXd kii = k.topLeftCorner(ni, ni);
    const Eigen::VectorXd m = p.interior_mass();
    const Eigen::MatrixXd p0 = -kii.llt().solve(k.topRightCorner(ni, p.n_boundary));
    const Eigen::MatrixXd s0 = schur_form(p, 0.0);
    for (double lambda : {0.5, 1.2, 1.7, 4.0}) {
      // Reference: M A_lambda = K (K - lambda M)^{-1} M on the interior.
      const Eigen::MatrixXd shifted = kii - lambda * Eigen::MatrixXd(m.asDiagonal());
      const Eigen::MatrixXd ma = kii * shifted.partialPivLu().solve(Eigen::MatrixXd(m.asDiagonal()));
      const Eigen::MatrixXd rhs = lambda * p0.transpose() * ma * p0;
      const Eigen::MatrixXd lhs = s0 - schur_form(p, lambda);
      worst_identity = std::max(worst_identity, (lhs - rhs).norm() / lhs.norm());
      for (int trial = 0; trial < 20; ++trial) {
        worst_iso = std::max(worst_iso, verify_isomorphism(p, lambda, random_vector(gen, p.n_boundary)));
      }
    }
  }
  const bool pass = worst_identity <= 1e-10 && worst_iso <= 1e-10 && max_order <= 2000;
  return {pass, std::to_string(pencils.size()) + " pencils (max order " + std::to_string(max_order) +
                    "), identity residual " + fmt("%.2e", worst_identity) + ", isomorphism residual " +
                    fmt("%.2e", worst_iso)};
}

Outcome criterion5() {
  std::mt19937_64 gen(505);
  Index checks = 0, contraction_fail = 0, lower_fail = 0;
  for (const Case& c : cases()) {
    const BoundaryAnalysis& ba = c.boundary;
    const Eigen::VectorXd& mu = ba.measures.mu;
    const Eigen::MatrixXd contraction =
        Eigen::MatrixXd(mu.asDiagonal()) - ba.p0.transpose() * c.pencil.interior_mass().asDiagonal() * ba.p0;
    std::vector<std::pair<Eigen::MatrixXd, double>> forms;
    for (std::size_t i : {std::size_t{2}, std::size_t{5}, std::size_t{8}}) {
      forms.push_back(with_nudging(lambda_grid()[i], [&](double x) {
        const double g = a_lambda_norm(ba.dirichlet, x);
        return std::pair<Eigen::MatrixXd, double>{schur_form(c.pencil, x), g};
      }));
    }
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd phi = random_vector(gen, c.pencil.n_boundary);
      const double mu_norm = phi.cwiseAbs2().dot(mu);
      ++checks;
      contraction_fail += phi.dot(contraction * phi) < -1e-12 * mu_norm;
      const double e0 = phi.dot(ba.s0 * phi);
      for (const auto& [sl, g] : forms) {
        const double el = phi.dot(sl * phi);
        const double scale = std::abs(e0) + std::abs(el) + g * mu_norm;
        lower_fail += el < e0 - g * mu_norm - 1e-10 * scale;
      }
    }
  }
  return {contraction_fail == 0 && lower_fail == 0,
          std::to_string(checks) + " boundary vectors over " + std::to_string(cases().size()) +
              " scenarios; contraction violations " + std::to_string(contraction_fail) +
              ", lower-bound violations " + std::to_string(lower_fail) + " (3 lambda each)"};
}

Outcome criterion6() {
  const auto start = Clock::now();
  const Index at100 = box_exact_count(3, 1.0, 100.0);
  Index polya_fail = 0, points = 0;
  for (const double mu : log_grid(1.0, 1e4, 200)) {
    ++points;
    polya_fail += static_cast<double>(box_exact_count(3, 1.0, mu)) > polya_weyl_report(3, 1.0, mu);
  }
  std::vector<double> ratios;
  for (double mu : {1e2, 1e3, 1e4}) ratios.push_back(box_exact_count(3, 1.0, mu) / polya_weyl_report(3, 1.0, mu));
  const bool trend = ratios[0] < ratios[1] && ratios[1] < ratios[2];
  const double secs = seconds_since(start);
  const bool pass = at100 == 7 && polya_fail == 0 && ratios[2] >= 0.85 && ratios[2] <= 1.0 && trend && secs <= 30.0;
  return {pass, "N(100) = " + std::to_string(at100) + ", Polya violations " + std::to_string(polya_fail) + "/" +
                    std::to_string(points) + ", Weyl ratios " + fmt("%.4f", ratios[0]) + " " + fmt("%.4f", ratios[1]) +
                    " " + fmt("%.4f", ratios[2]) + ", " + fmt("%.2f s", secs)};
}

struct SuiteSummary {
  Index reports = 0;
  Index violated = 0;
  Index not_applicable = 0;
  double gap = 0.0;        // largest relative violation (lhs - rhs) / rhs, 0 if all hold
  double min_slack = 0.0;  // smallest log10(rhs / lhs) over reports with lhs > 0
};

SuiteSummary bound_suite(int nodes) {
  ScenarioConfig c = load_config(kConfigs / "ball_well_3d.cfg");
  c.grid = GridSpec::cube(3, -2.0, 2.0, nodes);
  c.csv_path.clear();
  c.json_path.clear();
  const ScenarioResult r = run_scenario(c);
  static const std::vector<std::string> names = {
      "dirichlet_count_bound",      "dirichlet_heat_trace_bound", "dirichlet_ultracontractivity_bound",
      "a2r_count_bound",            "a2r_heat_trace_bound",       "a2r_ultracontractivity_bound"};
  SuiteSummary s;
  s.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& level : r.report["levels"]) {
    if (!level.contains("reports")) continue;
    for (const auto& j : level["reports"]) {
      const BoundReport b = j.get<BoundReport>();
      if (std::find(names.begin(), names.end(), b.name) == names.end()) continue;
      ++s.reports;
      if (b.verdict == Verdict::not_applicable) {
        ++s.not_applicable;
        continue;
      }
      if (b.verdict == Verdict::violated) ++s.violated;
      if (b.rhs > 0.0 && b.lhs > b.rhs) s.gap = std::max(s.gap, (b.lhs - b.rhs) / b.rhs);
      if (b.lhs > 0.0 && b.rhs > 0.0) s.min_slack = std::min(s.min_slack, std::log10(b.rhs / b.lhs));
    }
  }
  return s;
}

Outcome criterion7() {
  const SuiteSummary coarse = bound_suite(17);
  const SuiteSummary fine = bound_suite(25);
  const bool pass = coarse.violated == 0 && fine.violated == 0 && coarse.not_applicable == 0 &&
                    fine.not_applicable == 0 && coarse.reports > 0 && fine.gap <= coarse.gap;
  auto describe = [](const char* name, const SuiteSummary& s) {
    return std::string(name) + ": " + std::to_string(s.reports) + " reports, " + std::to_string(s.violated) +
           " violated, " + std::to_string(s.not_applicable) + " n/a, gap " + fmt("%.3g", s.gap) +
           ", min log10 slack " + fmt("%.2f", s.min_slack);
  };
  return {pass, describe("17^3", coarse) + "; " + describe("25^3", fine)};
}

Outcome criterion8() {
  std::mt19937_64 gen(808);
  Index pencils = 0, mismatches = 0, massless = 0;
  while (pencils < 500) {
    const Index n = 1 + uniform_index(gen, 64);
    Eigen::MatrixXd b(n, n);
    for (Index i = 0; i < n * n; ++i) b.data()[i] = uniform_symmetric(gen);
    Eigen::MatrixXd k = b * b.transpose() + 0.05 * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd m(n);
    for (Index i = 0; i < n; ++i) m[i] = uniform01(gen) < 0.25 ? 0.0 : 0.05 + uniform01(gen);
    if (m.maxCoeff() == 0.0) m[0] = 1.0;
    const auto finite = oracle::qz_eigenvalues(k, m);
    const double top = finite.empty() ? 1.0 : finite.back();
    const double lambda = -0.1 * top + 1.3 * top * uniform01(gen);
    // Stay clearly off the spectrum so that both sides are well defined.
    bool near = false;
    for (double mu : finite) near = near || std::abs(mu - lambda) < 1e-7 * std::max(1.0, std::abs(mu));
    if (near) continue;
    const auto expected = std::count_if(finite.begin(), finite.end(), [&](double mu) { return mu < lambda; });
    const Index via_eig = oracle::negative_count(k - lambda * Eigen::MatrixXd(m.asDiagonal()));
    const Index dense = count_below(k, m, lambda);
    const Index sparse = count_below(SparseMatrix(k.sparseView()), m, lambda);
    mismatches += dense != expected || sparse != expected || via_eig != expected;
    massless += (m.array() == 0.0).any();
    ++pencils;
  }
  return {mismatches == 0, std::to_string(pencils) + " pencils of order <= 64 (" + std::to_string(massless) +
                               " with massless nodes), " + std::to_string(mismatches) + " mismatches"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome criterion9() {
  const auto root = std::filesystem::temp_directory_path() / "a2rlab_acceptance";
  std::filesystem::remove_all(root);
  Index files = 0, differ = 0;
  for (const char* name : {"ball_well_3d", "disk_well_2d", "diag_example", "flat"}) {
    std::string bytes[2][2];
    for (int run = 0; run < 2; ++run) {
      // Different worker counts on the two runs.
      ::setenv("A2RLAB_WORKERS", run == 0 ? "1" : "4", 1);
      ScenarioConfig c = load_config(kConfigs / (std::string(name) + ".cfg"));
      const auto dir = root / ("run" + std::to_string(run));
      std::filesystem::create_directories(dir);
      c.csv_path = (dir / (std::string(name) + ".csv")).string();
      c.json_path = (dir / (std::string(name) + ".json")).string();
      run_scenario_files(c);
      bytes[run][0] = slurp(c.csv_path);
      bytes[run][1] = slurp(c.json_path);
    }
    for (int f = 0; f < 2; ++f) {
      ++files;
      differ += bytes[0][f].empty() || bytes[0][f] != bytes[1][f];
    }
  }
  ::unsetenv("A2RLAB_WORKERS");
  std::filesystem::remove_all(root);
  return {differ == 0, std::to_string(files) + " report files compared, " + std::to_string(differ) + " differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"exact splitting identity on randomized scenarios", criterion1},
      {"counting inequality with the a2r count at gamma = ||lambda A_lambda||", criterion2},
      {"Schroedinger reduction over a 10-level e-sweep", criterion3},
      {"Schur-difference identity and isomorphism residuals <= 1e-10", criterion4},
      {"contraction and lower-bound quadratic forms", criterion5},
      {"box count, Polya bound and Weyl ratio", criterion6},
      {"bound suite at two resolutions", criterion7},
      {"inertia counts match dense eigensolvers", criterion8},
      {"byte-identical reports across runs", criterion9},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %zu: %s [%s] (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
