// Command-line front end for the scenario runner and the individual checks.
//
// Exit codes: 0 success, 1 a must-hold identity failed, 2 configuration or
// usage error (including scenarios the library refuses to run).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "a2rlab/a2r.hpp"
#include "a2rlab/assemble.hpp"
#include "a2rlab/bounds.hpp"
#include "a2rlab/eigcount.hpp"
#include "a2rlab/errors.hpp"
#include "a2rlab/scenario.hpp"
#include "a2rlab/schrodinger.hpp"
#include "a2rlab/serialize.hpp"

using namespace a2rlab;

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

double pick_level(const ScenarioConfig& cfg, const std::optional<double>& level) {
  return level ? *level : cfg.levels.front();
}

PotentialField potential_of(const ScenarioConfig& cfg) {
  if (!cfg.family) throw ConfigError("this subcommand needs [grid] and [potential]");
  return build_potential(*cfg.family, *cfg.grid);
}

int cmd_assemble(const std::string& config, const std::optional<double>& level, const std::string& out) {
  const ScenarioConfig cfg = load_config(config);
  const PotentialField v = potential_of(cfg);
  const double e = pick_level(cfg, level);
  const SublevelDecomposition dec = classify_nodes(v, e);
  const AssembledPencil p = assemble_pencil(dec, v, e);
  std::cout << "e            " << num(e) << '\n'
            << "grid nodes   " << v.grid.node_count() << '\n'
            << "interior     " << p.n_interior << '\n'
            << "boundary     " << p.n_boundary << '\n'
            << "edges        " << dec.edges.size() << '\n'
            << "components   " << dec.component_count << '\n'
            << "diameter     " << num(dec.diameter) << '\n'
            << "nnz(K)       " << p.stiffness.nonZeros() << '\n'
            << "mass(I)      " << num(p.mass.sum()) << '\n';
  for (const auto& w : v.warnings) std::cout << "warning      " << w << '\n';
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + out + "'");
    f << json{{"decomposition", dec}, {"pencil", p}}.dump() << '\n';
  }
  return 0;
}

int cmd_count(const std::string& config, double lambda, const std::optional<double>& level, bool dirichlet) {
  const ScenarioConfig cfg = load_config(config);
  Index count = 0;
  if (cfg.pencil) {
    if (dirichlet) throw ConfigError("--dirichlet needs a grid scenario");
    const Eigen::MatrixXd k = cfg.pencil->stiffness.asDiagonal();
    count = count_below(k, cfg.pencil->mass, lambda);
  } else {
    const PotentialField v = potential_of(cfg);
    const double e = pick_level(cfg, level);
    try {
      const AssembledPencil p = assemble_pencil(classify_nodes(v, e), v, e);
      count = dirichlet ? count_below(p.block_ii(), p.interior_mass(), lambda)
                        : count_below(p.stiffness, p.mass, lambda);
    } catch (const EmptySublevel&) {
      count = 0;
    }
  }
  std::cout << count << '\n';
  return 0;
}

int cmd_splitting(const std::string& config, int grid_points, const std::optional<double>& level) {
  ScenarioConfig cfg = load_config(config);
  const PotentialField v = potential_of(cfg);
  const double e = pick_level(cfg, level);
  std::vector<double> lambdas = cfg.lambdas;
  if (grid_points > 0) lambdas = log_grid(cfg.lambdas.front(), cfg.lambdas.back(), grid_points);

  const LevelData ld = prepare_level(v, e, cfg.constants.p);
  std::cout << "lambda,N_full,N_dir,N_a2r_nonpos,identity_holds\n";
  bool ok = true;
  for (double lambda : lambdas) {
    if (ld.empty) {
      std::cout << num(lambda) << ",0,0,0,true\n";
      continue;
    }
    double used = lambda;
    const SplittingCounts s = with_nudging(lambda, [&](double x) {
      used = x;
      return splitting_counts(*ld.pencil, x);
    });
    ok = ok && s.identity_holds;
    std::cout << num(used) << ',' << s.n_full << ',' << s.n_dirichlet << ',' << s.n_a2r_nonpositive << ','
              << (s.identity_holds ? "true" : "false") << '\n';
  }
  return ok ? 0 : 1;
}

int cmd_bounds(const std::string& config, const std::optional<double>& level) {
  ScenarioConfig cfg = load_config(config);
  if (level) cfg.levels = {*level};
  const ScenarioResult res = run_scenario(cfg);
  if (res.report.contains("levels")) {
    for (const auto& lj : res.report["levels"]) {
      std::cout << "# e = " << num(lj["e"].get<double>()) << '\n';
      if (lj.contains("constants")) std::cout << lj["constants"].dump(2) << '\n';
      std::cout << "name,point_name,point,lhs,rhs,verdict\n";
      for (const auto& r : lj["reports"]) {
        const BoundReport b = r.get<BoundReport>();
        std::cout << b.name << ',' << b.point_name << ',' << num(b.point) << ',' << num(b.lhs) << ','
                  << num(b.rhs) << ',' << to_string(b.verdict) << '\n';
      }
    }
  }
  return res.must_hold_ok() ? 0 : 1;
}

int cmd_box_count(int n, double mu, double side) {
  std::cout << box_exact_count(n, side, mu) << '\n';
  return 0;
}

int cmd_report(const std::string& config, const std::string& csv, const std::string& json_path) {
  ScenarioConfig cfg = load_config(config);
  if (!csv.empty()) cfg.csv_path = csv;
  if (!json_path.empty()) cfg.json_path = json_path;
  if (cfg.csv_path.empty() && cfg.json_path.empty()) {
    const ScenarioResult res = run_scenario(cfg);
    write_csv(std::cout, res.rows);
    for (const auto& f : res.failures) std::cerr << "must-hold failure: " << f << '\n';
    return res.must_hold_ok() ? 0 : 1;
  }
  const int code = run_scenario_files(cfg);
  if (code != 0) std::cerr << "must-hold identity failed; see the JSON report\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue counting for weighted Laplacian pencils and their boundary reduction"};
  app.require_subcommand(1);

  std::string config;
  std::optional<double> level;

  auto* assemble = app.add_subcommand("assemble", "Build the sublevel decomposition and pencil, print a summary");
  std::string assemble_out;
  assemble->add_option("--config,-c", config, "Scenario config file")->required()->check(CLI::ExistingFile);
  assemble->add_option("--level,-e", level, "Energy level (default: first configured level)");
  assemble->add_option("--json", assemble_out, "Write the decomposition and pencil as JSON");

  auto* count = app.add_subcommand("count", "Print the number of pencil eigenvalues below lambda");
  double lambda = 0.0;
  bool dirichlet = false;
  count->add_option("--config,-c", config, "Scenario config file")->required()->check(CLI::ExistingFile);
  count->add_option("--lambda,-l", lambda, "Spectral parameter")->required();
  count->add_option("--level,-e", level, "Energy level (default: first configured level)");
  count->add_flag("--dirichlet", dirichlet, "Count the Dirichlet block (K_II, M_II) instead");

  auto* splitting = app.add_subcommand("splitting", "Tabulate the splitting identity over a lambda grid");
  int grid_points = 0;
  splitting->add_option("--config,-c", config, "Scenario config file")->required()->check(CLI::ExistingFile);
  splitting->add_option("--lambda-grid", grid_points,
                        "Use N log-spaced values between the first and last configured lambda")
      ->check(CLI::PositiveNumber);
  splitting->add_option("--level,-e", level, "Energy level (default: first configured level)");

  auto* bounds = app.add_subcommand("bounds", "Evaluate every bound report for the scenario");
  bounds->add_option("--config,-c", config, "Scenario config file")->required()->check(CLI::ExistingFile);
  bounds->add_option("--level,-e", level, "Restrict to one energy level");

  auto* oracle = app.add_subcommand("oracle", "Closed-form oracles");
  oracle->require_subcommand(1);
  auto* box = oracle->add_subcommand("box-count", "Exact Dirichlet eigenvalue count of a cube");
  int box_n = 3;
  double box_mu = 0.0;
  double box_side = 1.0;
  box->add_option("--n", box_n, "Dimension")->check(CLI::Range(1, 3));
  box->add_option("--mu", box_mu, "Spectral threshold")->required();
  box->add_option("--side", box_side, "Cube side length");

  auto* report = app.add_subcommand("report", "Run the full scenario and write CSV/JSON reports");
  std::string csv;
  std::string json_path;
  report->add_option("config", config, "Scenario config file")->required()->check(CLI::ExistingFile);
  report->add_option("--csv", csv, "CSV output path (overrides the config)");
  report->add_option("--json", json_path, "JSON output path (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*assemble) return cmd_assemble(config, level, assemble_out);
    if (*count) return cmd_count(config, lambda, level, dirichlet);
    if (*splitting) return cmd_splitting(config, grid_points, level);
    if (*bounds) return cmd_bounds(config, level);
    if (*box) return cmd_box_count(box_n, box_mu, box_side);
    if (*report) return cmd_report(config, csv, json_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
