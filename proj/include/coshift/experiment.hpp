#pragma once

// Batch front door: experiment configs, the named verification battery,
// scan/probe grids and report serialization. Everything here is
// deterministic for a fixed config and seed; grid cells may execute in
// parallel and are reassembled in config order.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "coshift/measures.hpp"
#include "coshift/parfenov.hpp"
#include "coshift/schatten.hpp"

namespace coshift {

struct ExperimentConfig {
  std::vector<std::string> measure_paths;
  double q = 4.0;
  std::vector<double> t_list{0.25, 0.5, 1.0};
  std::vector<double> p_list{1.0, 1.5, 2.0};
  std::vector<int> N_list{64, 128, 256, 512};
  int K = 512;
  int nodes = 16;
  std::map<std::string, double> tolerances;  // overrides by check name
  std::string output_path;                   // empty = stdout
  std::string format = "csv";                // "csv" or "json"
  int jobs = 0;                              // 0 = hardware concurrency
  bool timestamp = true;
  unsigned long long seed = 12345;

  void validate() const;  // throws Error("ConfigError", ...)
  double tol(const std::string& name, double fallback) const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);

struct NamedMeasure {
  std::string id;
  AtomicMeasure mu;
};

std::vector<NamedMeasure> load_measures(const ExperimentConfig& cfg);

// ---- verify ----

struct VerifyCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool lower_bound = false;  // pass means residual >= tolerance
  bool pass = false;
};

struct VerifyReport {
  std::string measure_id;
  int N = 0;
  std::vector<VerifyCheck> checks;
  bool pass = false;
};

/// The full invariant battery at truncation N: frame quality,
/// intertwining, isometry/unitarity, Wold split, dilation consistency,
/// functional-calculus laws, the dilation defect identity and the cocycle
/// law. Time grids derive from t_list as documented in the README.
VerifyReport run_verify(const NamedMeasure& m, const ExperimentConfig& cfg);

nlohmann::ordered_json verify_to_json(const std::vector<VerifyReport>& reports,
                                      const ExperimentConfig& cfg);

// ---- scan ----

struct ScanCell {
  std::string builder;
  std::string theta_id;
  double t = 0.0;
  double p = 0.0;
  int N = 0;
  double norm = 0.0;
  std::string flag;  // scan verdict, probe verdict, or empty
};

/// Grid product of (measure, builder, t, p) convergence scans over N_list
/// plus one sqrt(t) probe per measure; cells run on up to cfg.jobs threads.
std::vector<ScanCell> run_scan(const std::vector<NamedMeasure>& measures,
                               const ExperimentConfig& cfg);

std::string scan_to_csv(const std::vector<ScanCell>& cells,
                        const ExperimentConfig& cfg);
nlohmann::ordered_json scan_to_json(const std::vector<ScanCell>& cells,
                                    const ExperimentConfig& cfg);

// ---- inner / parfenov ----

nlohmann::ordered_json run_inner(const NamedMeasure& m,
                                 const ExperimentConfig& cfg);
nlohmann::ordered_json run_parfenov(const NamedMeasure& m,
                                    const ExperimentConfig& cfg);

// ---- helpers ----

std::string format_double(double v);  // deterministic %.17g
std::string iso8601_now();
void emit(const std::string& text, const ExperimentConfig& cfg);

}  // namespace coshift
