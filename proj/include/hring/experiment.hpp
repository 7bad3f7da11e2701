#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hring/analysis.hpp"
#include "hring/model.hpp"
#include "hring/routing.hpp"

namespace hring {

/// Malformed or inconsistent experiment request (exit code 2 in the CLI).
class UsageError : public InputError {
 public:
  using InputError::InputError;
};

enum class OutputFormat { csv, jsonl };

struct ExperimentConfig {
  std::string command;
  std::vector<std::uint32_t> n_values;
  std::vector<std::string> degree_specs{"fixed:1"};
  std::string distance_spec = "harmonic";
  std::uint64_t seed = 1;
  std::uint64_t trials = 100000;
  std::uint32_t shards = 1;
  McMode mode = McMode::lazy;
  std::optional<std::vector<Degree>> per_node_degrees;
  bool with_exact = false;
  std::uint32_t pernode_cap = kDefaultPerNodeCap;
  double oracle_limit = kDefaultOracleLimit;
  double edge_limit = kDefaultEdgeLimit;
  std::string output_path;  // empty: standard output
  OutputFormat format = OutputFormat::csv;
};

struct ReportRow {
  std::uint32_t n = 0;
  std::string degree;
  double mean_degree = 0.0;
  std::string method;  // exact | mc | oracle | pernode | bound
  double value = 0.0;
  std::optional<double> std_error;
  std::optional<double> p_half_min;
  std::optional<double> lambda;
  std::optional<double> bound;
  double runtime_ms = 0.0;
  std::optional<std::uint64_t> seed;
  // Emitted as extra trailing columns only when some row sets them.
  std::optional<double> z;
  std::optional<double> ratio;
  std::optional<bool> dominates;
};

struct CompareVerdict {
  std::uint32_t n = 0;
  std::string minimizer;
  bool concentrated_law_won = false;  // minimizer supported on {floor(mean), ceil(mean)}
};

struct ScalingSummary {
  std::string degree_spec;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  bool degenerate = false;  // fewer than two ring sizes
  bool all_dominated = true;
};

struct VerifyCheck {
  std::string name;
  bool applicable = true;
  bool passed = true;
  std::string detail;
};

struct Report {
  std::string command;
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;  // resolved config, truncation warnings, summaries
  std::vector<CompareVerdict> verdicts;  // one per ring size
  std::vector<ScalingSummary> scaling;
  std::vector<VerifyCheck> checks;

  bool all_checks_passed() const;
};

/// Test-harness hooks for the verification battery.
struct VerifyHooks {
  std::function<void(ProgressRow&)> perturb_row;
};

Report run_exact(const ExperimentConfig& config);
Report run_compare(const ExperimentConfig& config);
Report run_simulate(const ExperimentConfig& config);
Report run_pernode(const ExperimentConfig& config);
Report run_sweep(const ExperimentConfig& config);
Report run_oracle(const ExperimentConfig& config);
Report run_verify(const ExperimentConfig& config, const VerifyHooks& hooks = {});

/// Dispatches on config.command.
Report run_command(const ExperimentConfig& config);

/// Writes notes as `# ` comment lines, then the rows. CSV columns are fixed:
/// `n,degree,mean_degree,method,value,stderr,p_half_min,lambda,bound,runtime_ms,seed`
/// followed by `z`, `ratio`, `dominates` when present. Floats use 12
/// significant digits.
void write_report(std::ostream& out, const Report& report, OutputFormat format);

/// Process exit code for a finished report: 1 if a verification check failed, else 0.
int exit_code(const Report& report);

std::string format_real(double x);

}  // namespace hring
