// coshift: batch driver for the cocyclic-perturbation laboratory.
//
// Subcommands:
//   inner     Clark inner function report for each measure
//   verify    full invariant battery, JSON report, exit 0 iff all pass
//   scan      convergence scans + sqrt(t) probe over the config grid
//   parfenov  interval sums, boundary moment, embedding comparison

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "coshift/experiment.hpp"

namespace {

using coshift::ExperimentConfig;

struct CommonFlags {
  std::string config_path;
  std::vector<std::string> measures;
  double q = -1.0;
  std::vector<double> t_list, p_list;
  std::vector<int> dim_list;
  int window = -1;
  int nodes = -1;
  std::vector<std::string> tol_pairs;
  std::string format;
  std::string output;
  int jobs = -1;
  bool no_timestamp = false;
  unsigned long long seed = 0;
  bool seed_set = false;
};

void attach(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "experiment config JSON");
  cmd->add_option("--measure", f.measures, "measure config path(s)");
  cmd->add_option("--q", f.q, "moment exponent (> 3)");
  cmd->add_option("--t", f.t_list, "semigroup times");
  cmd->add_option("--p", f.p_list, "Schatten exponents");
  cmd->add_option("--dim", f.dim_list, "truncation dimensions, ascending");
  cmd->add_option("--window", f.window, "half-line interval window K");
  cmd->add_option("--nodes", f.nodes, "quadrature nodes per unit interval");
  cmd->add_option("--tol", f.tol_pairs, "tolerance overrides key=value");
  cmd->add_option("--format", f.format, "csv or json");
  cmd->add_option("--out", f.output, "output path (default stdout)");
  cmd->add_option("--jobs", f.jobs, "parallel grid cells");
  cmd->add_flag("--no-timestamp", f.no_timestamp, "suppress timestamps");
  cmd->add_option("--seed", f.seed, "seed for spot-check vectors")
      ->each([&f](const std::string&) { f.seed_set = true; });
}

ExperimentConfig build_config(const CommonFlags& f) {
  ExperimentConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw coshift::Error("IoError", "cannot open " + f.config_path);
    nlohmann::json j;
    in >> j;
    cfg = coshift::config_from_json(j);
  }
  for (const auto& m : f.measures) cfg.measure_paths.push_back(m);
  if (f.q > 0.0) cfg.q = f.q;
  if (!f.t_list.empty()) cfg.t_list = f.t_list;
  if (!f.p_list.empty()) cfg.p_list = f.p_list;
  if (!f.dim_list.empty()) cfg.N_list = f.dim_list;
  if (f.window > 0) cfg.K = f.window;
  if (f.nodes > 0) cfg.nodes = f.nodes;
  if (!f.format.empty()) cfg.format = f.format;
  if (!f.output.empty()) cfg.output_path = f.output;
  if (f.jobs > 0) cfg.jobs = f.jobs;
  if (f.no_timestamp) cfg.timestamp = false;
  if (f.seed_set) cfg.seed = f.seed;
  for (const auto& kv : f.tol_pairs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw coshift::Error("ConfigError", "--tol expects key=value");
    cfg.tolerances[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cocyclic perturbations of the shift in model spaces"};
  app.require_subcommand(1);

  CommonFlags f_inner, f_verify, f_scan, f_parf;
  CLI::App* cmd_inner = app.add_subcommand("inner", "Clark inner report");
  CLI::App* cmd_verify = app.add_subcommand("verify", "invariant battery");
  CLI::App* cmd_scan = app.add_subcommand("scan", "convergence scans + probe");
  CLI::App* cmd_parf = app.add_subcommand("parfenov", "half-line sums");
  attach(cmd_inner, f_inner);
  attach(cmd_verify, f_verify);
  attach(cmd_scan, f_scan);
  attach(cmd_parf, f_parf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (cmd_inner->parsed()) {
      const ExperimentConfig cfg = build_config(f_inner);
      const auto measures = coshift::load_measures(cfg);
      nlohmann::ordered_json out;
      out["command"] = "inner";
      if (cfg.timestamp) out["generated_at"] = coshift::iso8601_now();
      auto arr = nlohmann::ordered_json::array();
      for (const auto& m : measures) arr.push_back(coshift::run_inner(m, cfg));
      out["measures"] = arr;
      coshift::emit(dump(out), cfg);
      return 0;
    }
    if (cmd_verify->parsed()) {
      const ExperimentConfig cfg = build_config(f_verify);
      const auto measures = coshift::load_measures(cfg);
      std::vector<coshift::VerifyReport> reports;
      bool all = true;
      for (const auto& m : measures) {
        reports.push_back(coshift::run_verify(m, cfg));
        all = all && reports.back().pass;
      }
      coshift::emit(dump(coshift::verify_to_json(reports, cfg)), cfg);
      return all ? 0 : 1;
    }
    if (cmd_scan->parsed()) {
      const ExperimentConfig cfg = build_config(f_scan);
      const auto measures = coshift::load_measures(cfg);
      const auto cells = coshift::run_scan(measures, cfg);
      if (cfg.format == "json")
        coshift::emit(dump(coshift::scan_to_json(cells, cfg)), cfg);
      else
        coshift::emit(coshift::scan_to_csv(cells, cfg), cfg);
      return 0;
    }
    if (cmd_parf->parsed()) {
      const ExperimentConfig cfg = build_config(f_parf);
      const auto measures = coshift::load_measures(cfg);
      nlohmann::ordered_json out;
      out["command"] = "parfenov";
      if (cfg.timestamp) out["generated_at"] = coshift::iso8601_now();
      auto arr = nlohmann::ordered_json::array();
      for (const auto& m : measures)
        arr.push_back(coshift::run_parfenov(m, cfg));
      out["measures"] = arr;
      coshift::emit(dump(out), cfg);
      return 0;
    }
  } catch (const coshift::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const std::string code = e.code();
    const bool config_like = code == "ConfigError" || code == "IoError" ||
                             code == "EmptyMeasure" || code == "AtomAtOne" ||
                             code == "DuplicateAngle" ||
                             code == "NonPositiveWeight" ||
                             code == "BadExponent";
    return config_like ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
