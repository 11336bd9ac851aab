// Scenario catalog keyed to the classification theorems, a parallel runner
// and the JSON / text reports of a run.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "hh/io.hpp"

namespace hh {

enum class Status { pass, fail, inconclusive };
std::string to_string(Status s);

struct Tolerances {
  double exponent = 0.02;       // relative, power exponents
  double log_exponent = 0.05;   // relative, exponents of |ln r|
  double limit = 0.01;          // relative, limits pinned by a closed form
  double residual = 1e-8;       // exact closed forms
  double residual_fd = 1e-6;    // closed forms near singular endpoints, integrated profiles
  double fixed_point = 1e-3;    // distance to a target fixed point
  double window_stability = 0.05;
};

struct VerifyConfig {
  std::string filter = "*";  // glob on scenario ids; comma separates alternatives
  Tolerances tol;
  std::string output_dir;    // empty: no files written
  unsigned jobs = 0;         // 0: hardware concurrency
  std::uint64_t seed = 20240601;
  int sweep_seeds = 64;      // seeds per quadrant in nonexistence sweeps
};

// Keys absent from the JSON object keep their defaults.
VerifyConfig load_config(const nlohmann::json& j, VerifyConfig base = {});
VerifyConfig load_config_file(const std::string& path, VerifyConfig base = {});

struct Metric {
  std::string name;
  double value = 0;
  double expected = 0;
  double tolerance = 0;
  bool ok = true;
  bool informational = false;
  std::string note;
};

struct ScenarioResult {
  std::string id, theorem, region;
  Status status = Status::pass;
  bool sampled_evidence = false;
  nlohmann::json params;
  std::vector<Metric> metrics;
  std::vector<std::string> artifacts;
  std::vector<std::string> diagnostics;
  double runtime_s = 0;
};

class Context {
 public:
  Context(const VerifyConfig& cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {}

  const Tolerances& tol() const { return cfg_.tol; }
  int sweep_seeds() const { return cfg_.sweep_seeds; }
  std::mt19937_64& rng() { return rng_; }

  // |value - expected| <= tol * max(|expected|, floor).
  bool expect_rel(const std::string& name, double value, double expected, double tol,
                  double floor = 0.05);
  bool expect_abs(const std::string& name, double value, double expected, double tol);
  bool expect_lt(const std::string& name, double value, double bound);
  bool expect_true(const std::string& name, bool cond, const std::string& note = {});
  void info(const std::string& name, double value, const std::string& note = {});
  void artifact(const std::string& name, const CsvTable& table);
  void params(nlohmann::json p) { res_.params = std::move(p); }
  void diag(const std::string& msg) { res_.diagnostics.push_back(msg); }
  void inconclusive(const std::string& why);
  void sampled_evidence() { res_.sampled_evidence = true; }

  ScenarioResult& result() { return res_; }
  bool flagged_inconclusive() const { return inconclusive_; }
  const std::vector<std::pair<std::string, CsvTable>>& tables() const { return tables_; }

 private:
  void add(Metric m);

  const VerifyConfig& cfg_;
  std::mt19937_64 rng_;
  ScenarioResult res_;
  bool inconclusive_ = false;
  std::vector<std::pair<std::string, CsvTable>> tables_;
};

struct Scenario {
  std::string id;
  std::string theorem;  // theorem label the scenario restates
  std::string region;
  std::string description;
  std::function<void(Context&)> run;
};

const std::vector<Scenario>& scenario_catalog();

// Worst relative gap between closed-form fixed-point eigenvalues and those of a
// finite-difference Jacobian.
double eigen_fd_mismatch(const ScalarParams& sp);

// '*' matches any run, '?' one character; comma-separated alternatives.
bool glob_match(const std::string& pattern, const std::string& text);

// Exceptions from the recipe become inconclusive (InvalidParams, integration
// trouble) or fail (anything else) with the message as diagnostic.
ScenarioResult run_scenario(const Scenario& sc, const VerifyConfig& cfg);

struct VerifyReport {
  std::vector<ScenarioResult> results;  // catalog order
  int passed = 0, failed = 0, inconclusive = 0;
  double runtime_s = 0;
  int exit_code() const { return failed > 0 || results.empty() ? 1 : 0; }
};

// Runs the filtered catalog on a pool of cfg.jobs threads. Writes
// report.json, summary.txt and CSV artifacts when cfg.output_dir is set.
VerifyReport run_all(const VerifyConfig& cfg);

// Runtimes are left out so that identical inputs give identical bytes.
nlohmann::json report_json(const VerifyReport& rep, const VerifyConfig& cfg);
std::string summary_text(const VerifyReport& rep);
// Summary of a report.json written by an earlier run.
std::string summarize_report_json(const nlohmann::json& j);

}  // namespace hh
