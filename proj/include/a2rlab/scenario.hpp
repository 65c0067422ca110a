#pragma once

// Configuration-driven scenario runner. A scenario fixes a potential on a
// grid (or an explicit diagonal pencil), a list of energy levels and the
// sweep grids; running it produces one CSV row per (level, lambda) and a
// JSON document with every bound report.
//
// Config files are INI-style:
//
//   [scenario]  id
//   [grid]      dimension, lower, upper, nodes, node_cap
//   [potential] family = ball_well | gaussian_well | multi_well | band_limited_random
//               center, radius, depth, width; for multi_well: wells = N and
//               wellK_family, wellK_center, ... for K = 1..N; for
//               band_limited_random: cutoff, amplitude, seed
//   [pencil]    stiffness_diag, mass_diag (replaces grid and potential)
//   [levels]    e = list
//   [sweeps]    lambda = list, or lambda_min, lambda_max, lambda_count;
//               t = list, or t_min, t_max, t_count
//   [constants] p, L_n, b, c_P, omega_convention, samples
//   [output]    csv, json
//   [seed]      value
//
// Lists are separated by whitespace or commas.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "a2rlab/a2r.hpp"
#include "a2rlab/bounds.hpp"
#include "a2rlab/errors.hpp"
#include "a2rlab/model.hpp"
#include "a2rlab/serialize.hpp"

namespace a2rlab {

inline constexpr int kReportSchemaVersion = 1;

struct ConstantsConfig {
  double p = 3.0;
  std::optional<double> l_n;
  std::optional<double> b;    // estimated when absent
  std::optional<double> c_p;  // estimated when absent
  OmegaConvention convention = OmegaConvention::sphere_area;
  Index samples = 500;
};

/// K = diag(stiffness), M = diag(mass); for quick checks of the counting code.
struct ExplicitPencil {
  Eigen::VectorXd stiffness;
  Eigen::VectorXd mass;
};

struct ScenarioConfig {
  std::string id = "scenario";
  std::optional<GridSpec> grid;
  std::optional<PotentialFamily> family;
  std::optional<ExplicitPencil> pencil;
  std::vector<double> levels;
  std::vector<double> lambdas;
  std::vector<double> heat_times;
  ConstantsConfig constants;
  std::string csv_path;
  std::string json_path;
  std::uint64_t seed = 0;
};

/// n points log-spaced in [lo, hi], both ends included.
std::vector<double> log_grid(double lo, double hi, int n);

/// Throws ConfigError on any missing, malformed or inconsistent entry.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::filesystem::path& path);

json to_json_config(const ScenarioConfig& c);

/// One CSV row. Empty optionals are written as NA.
struct SweepRow {
  std::string scenario_id;
  double e = 0.0;
  double lambda = 0.0;
  std::optional<Index> n_full;
  std::optional<Index> n_dir;
  std::optional<Index> n_a2r_nonpos;
  std::optional<bool> identity_holds;
  std::optional<double> gamma;
  std::optional<Index> n_a2r_gamma;
  std::optional<double> a_lambda_norm;
  std::optional<double> bound_dirichlet;  // column bound_thm54
  std::optional<double> bound_a2r;        // column bound_thm59
  std::optional<double> heat_trace_t;     // heat trace at t = d / lambda
  std::optional<double> trace_bound;
  Verdict a2r_inequality = Verdict::not_applicable;
  Verdict dirichlet_bound = Verdict::not_applicable;
  Verdict a2r_bound = Verdict::not_applicable;
  Verdict trace = Verdict::not_applicable;
};

const std::vector<std::string>& csv_columns();
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Shift-perturbation loop: calls f(lambda * (1 + 1e-9)^k) for k = 0, 1, ...
/// until it stops throwing OnEigenvalue (at most `tries` attempts).
template <class F>
auto with_nudging(double lambda, F&& f, int tries = 10, int* used = nullptr) {
  double x = lambda;
  for (int k = 0;; ++k) {
    try {
      if (used) *used = k;
      return f(x);
    } catch (const OnEigenvalue&) {
      if (k + 1 >= tries) throw;
      x *= 1.0 + 1e-9;
    }
  }
}

/// Everything computed once per (potential, level) and shared by the sweeps.
struct LevelData {
  double e = 0.0;
  bool empty = false;
  std::optional<SublevelDecomposition> decomposition;
  std::optional<AssembledPencil> pencil;
  std::optional<BoundaryAnalysis> boundary;
  double norm_w1 = 0.0;
  double norm_wp = 0.0;
};

LevelData prepare_level(const PotentialField& v, double e, double p);

struct ScenarioResult {
  std::vector<SweepRow> rows;
  json report;
  std::vector<std::string> failures;  // violated must-hold identities

  bool must_hold_ok() const { return failures.empty(); }
};

ScenarioResult run_scenario(const ScenarioConfig& config);

/// Runs the scenario and writes the CSV and JSON files named in the config.
/// Returns the process exit code: 1 if a must-hold identity failed, else 0.
int run_scenario_files(const ScenarioConfig& config);

}  // namespace a2rlab
