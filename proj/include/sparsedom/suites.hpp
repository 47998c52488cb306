#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace sparsedom {

/// Shared configuration of the seeded suites. Zero trials/depth/dimension
/// mean "per-suite default" (the defaults are the published check sizes).
struct ExperimentConfig {
  uint64_t seed = 42;
  long trials = 0;
  int depth = 0;
  int dimension = 0;
  double p = 2.0;
  double q = 2.0;
  std::vector<std::string> selectors;  // empty = every suite
  int threads = 0;                     // 0 = SPARSEDOM_THREADS, else 1
};

struct CheckRow {
  long trial = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = true;
};

struct CheckResult {
  std::string suite;
  std::string check;
  long trials = 0;
  long violations = 0;
  double worst_margin = 0.0;
  double empirical_constant = 0.0;
  double runtime_ms = 0.0;  // timing; excluded from determinism comparisons
  std::vector<CheckRow> rows;
};

struct SuiteReport {
  ExperimentConfig config;
  std::vector<CheckResult> checks;

  long total_violations() const;
  const CheckResult* find(const std::string& suite, const std::string& check) const;
};

std::vector<std::string> suite_names();

/// Runs the selected suites; deterministic given the seed (timings aside).
SuiteReport run_suite(const ExperimentConfig& config);

/// CSV columns: suite,check,trial,lhs,rhs,margin,pass.
void emit_csv(const SuiteReport& report, std::ostream& os);
nlohmann::json report_to_json(const SuiteReport& report, bool include_runtime = true);

/// Threads resolved from the config and SPARSEDOM_THREADS.
int resolve_threads(const ExperimentConfig& config);

}  // namespace sparsedom
