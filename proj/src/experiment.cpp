#include "hring/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

namespace hring {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct ResolvedDegree {
  std::string spec;
  DegreeDistribution dist;
};

std::vector<ResolvedDegree> resolve_degrees(const ExperimentConfig& config, std::uint32_t n) {
  if (config.degree_specs.empty()) throw UsageError("no degree spec given");
  std::vector<ResolvedDegree> out;
  for (const auto& spec : config.degree_specs) out.push_back({spec, parse_degree_spec(spec, n)});
  return out;
}

void require_sizes(const ExperimentConfig& config) {
  if (config.n_values.empty()) throw UsageError("no ring size given (--n)");
  for (const auto n : config.n_values) {
    if (n < 2) throw UsageError(fmt::format("ring size must be at least 2, got {}", n));
  }
}

// Resolved configuration, echoed at the head of every report.
void echo_config(Report& report, const ExperimentConfig& config) {
  nlohmann::ordered_json j;
  j["command"] = config.command;
  j["n"] = config.n_values;
  j["degree"] = config.degree_specs;
  j["distance"] = config.distance_spec;
  j["beta"] = parse_distance_spec(config.distance_spec);
  j["seed"] = config.seed;
  j["trials"] = config.trials;
  j["shards"] = config.shards;
  j["mode"] = to_string(config.mode);
  if (config.per_node_degrees) j["per_node_degrees"] = *config.per_node_degrees;
  j["pernode_cap"] = config.pernode_cap;
  j["oracle_limit"] = config.oracle_limit;
  j["edge_limit"] = config.edge_limit;
  report.notes.push_back("config " + j.dump());

  for (const auto n : config.n_values) {
    for (const auto& spec : config.degree_specs) {
      try {
        const auto deg = parse_degree_spec(spec, n);
        report.notes.push_back(fmt::format("resolved n={} degree={} -> {} mean={} cap={}", n, spec,
                                           deg.origin(), format_real(deg.mean()), deg.cap()));
        if (deg.warning()) report.notes.push_back("warning " + *deg.warning());
      } catch (const InputError&) {
        // Reported by the command itself.
      }
    }
  }
}

Report start_report(const ExperimentConfig& config, std::string_view command) {
  Report report;
  report.command = std::string(command);
  ExperimentConfig echoed = config;
  echoed.command = report.command;
  echo_config(report, echoed);
  return report;
}

ReportRow exact_row(std::uint32_t n, const DegreeDistribution& deg, const DistanceDistribution& dist) {
  const auto start = Clock::now();
  const auto table = expected_times(n, deg, dist);
  const auto bound = theorem2_upper_bound(n, deg, dist, table.avg);
  ReportRow row;
  row.n = n;
  row.degree = deg.origin();
  row.mean_degree = deg.mean();
  row.method = "exact";
  row.value = table.avg;
  row.p_half_min = bound.p_half_min;
  row.lambda = bound.lambda;
  row.bound = bound.bound;
  row.dominates = bound.dominates();
  row.runtime_ms = elapsed_ms(start);
  return row;
}

bool concentrated(const DegreeDistribution& deg) {
  const double lo = std::floor(deg.mean() + 1e-9);
  const double hi = std::ceil(deg.mean() - 1e-9);
  return std::all_of(deg.entries().begin(), deg.entries().end(), [&](const DegreeEntry& e) {
    return e.degree == lo || e.degree == hi;
  });
}

std::string per_node_descriptor(std::span<const Degree> degrees) {
  std::string out = "pernode:";
  for (std::size_t i = 0; i < degrees.size(); ++i) out += fmt::format("{}{}", i == 0 ? "" : ",", degrees[i]);
  return out;
}

double average_degree(std::span<const Degree> degrees) {
  double total = 0.0;
  for (const auto d : degrees) total += d;
  return degrees.empty() ? 0.0 : total / static_cast<double>(degrees.size());
}

std::uint32_t per_node_size(const ExperimentConfig& config) {
  if (!config.per_node_degrees || config.per_node_degrees->empty()) {
    throw UsageError("per-node degree list required (--degrees)");
  }
  const auto len = static_cast<std::uint32_t>(config.per_node_degrees->size());
  if (!config.n_values.empty() && (config.n_values.size() != 1 || config.n_values.front() != len)) {
    throw UsageError(fmt::format("per-node degree list has {} entries but --n is {}", len,
                                 fmt::join(config.n_values, ",")));
  }
  if (len < 2) throw UsageError("ring size must be at least 2");
  return len;
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.12g}", x);
}

bool Report::all_checks_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

int exit_code(const Report& report) { return report.all_checks_passed() ? 0 : 1; }

Report run_exact(const ExperimentConfig& config) {
  require_sizes(config);
  Report report = start_report(config, "exact");
  const double beta = parse_distance_spec(config.distance_spec);
  for (const auto n : config.n_values) {
    const auto dist = DistanceDistribution::make(n, beta);
    for (const auto& deg : resolve_degrees(config, n)) report.rows.push_back(exact_row(n, deg.dist, dist));
  }
  return report;
}

Report run_compare(const ExperimentConfig& config) {
  require_sizes(config);
  Report report = start_report(config, "compare");
  const double beta = parse_distance_spec(config.distance_spec);
  for (const auto n : config.n_values) {
    const auto dist = DistanceDistribution::make(n, beta);
    const auto degrees = resolve_degrees(config, n);
    const double reference = degrees.front().dist.mean();
    const bool same_mean = std::all_of(degrees.begin(), degrees.end(), [&](const ResolvedDegree& d) {
      return std::abs(d.dist.mean() - reference) <= 1e-9;
    });
    if (!same_mean) {
      std::string listing;
      for (const auto& d : degrees) {
        listing += fmt::format("{}{}={}", listing.empty() ? "" : ", ", d.spec, format_real(d.dist.mean()));
      }
      throw UsageError(fmt::format("compare needs equal means at n={}: {}", n, listing));
    }

    std::vector<std::pair<ReportRow, std::size_t>> rows;
    for (std::size_t i = 0; i < degrees.size(); ++i) rows.emplace_back(exact_row(n, degrees[i].dist, dist), i);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first.value < b.first.value; });

    const auto& best = degrees[rows.front().second];
    CompareVerdict verdict{n, best.spec, concentrated(best.dist)};
    report.notes.push_back(fmt::format("verdict n={} minimizer={} concentrated_law_won={}", n,
                                       verdict.minimizer, verdict.concentrated_law_won));
    report.verdicts.push_back(verdict);
    for (auto& [row, index] : rows) report.rows.push_back(std::move(row));
  }
  return report;
}

Report run_simulate(const ExperimentConfig& config) {
  require_sizes(config);
  if (config.trials == 0) throw UsageError("--trials must be at least 1");
  Report report = start_report(config, "simulate");
  const double beta = parse_distance_spec(config.distance_spec);
  McOptions options;
  options.trials = config.trials;
  options.seed = config.seed;
  options.shards = config.shards;
  options.mode = config.mode;
  options.edge_limit = config.edge_limit;

  for (const auto n : config.n_values) {
    const auto dist = DistanceDistribution::make(n, beta);
    for (const auto& deg : resolve_degrees(config, n)) {
      std::optional<double> exact;
      if (config.with_exact) {
        auto row = exact_row(n, deg.dist, dist);
        exact = row.value;
        report.rows.push_back(std::move(row));
      }
      const auto start = Clock::now();
      const auto est = mc_estimate_average(n, deg.dist, dist, options);
      ReportRow row;
      row.n = n;
      row.degree = deg.dist.origin();
      row.mean_degree = deg.dist.mean();
      row.method = "mc";
      row.value = est.mean;
      row.std_error = est.std_error;
      row.seed = config.seed;
      row.runtime_ms = elapsed_ms(start);
      if (exact) {
        const double diff = est.mean - *exact;
        row.z = est.std_error > 0.0 ? diff / est.std_error : (diff == 0.0 ? 0.0 : INFINITY);
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

Report run_pernode(const ExperimentConfig& config) {
  const std::uint32_t n = per_node_size(config);
  ExperimentConfig resolved = config;
  resolved.n_values = {n};
  Report report = start_report(resolved, "pernode");
  const auto dist = DistanceDistribution::make(n, parse_distance_spec(config.distance_spec));
  const auto& degrees = *config.per_node_degrees;

  const auto start = Clock::now();
  const auto result = per_node_expected_times(n, degrees, dist, false, config.pernode_cap);
  ReportRow row;
  row.n = n;
  row.degree = per_node_descriptor(degrees);
  row.mean_degree = average_degree(degrees);
  row.method = "pernode";
  row.value = result.avg;
  row.runtime_ms = elapsed_ms(start);
  report.rows.push_back(std::move(row));
  return report;
}

Report run_oracle(const ExperimentConfig& config) {
  const double beta = parse_distance_spec(config.distance_spec);
  if (config.per_node_degrees) {
    const std::uint32_t n = per_node_size(config);
    ExperimentConfig resolved = config;
    resolved.n_values = {n};
    Report report = start_report(resolved, "oracle");
    const auto dist = DistanceDistribution::make(n, beta);
    const auto start = Clock::now();
    ReportRow row;
    row.n = n;
    row.degree = per_node_descriptor(*config.per_node_degrees);
    row.mean_degree = average_degree(*config.per_node_degrees);
    row.method = "oracle";
    row.value = oracle_average_time(n, dist, DegreeAssignment{*config.per_node_degrees}, config.oracle_limit);
    row.runtime_ms = elapsed_ms(start);
    report.rows.push_back(std::move(row));
    return report;
  }

  require_sizes(config);
  Report report = start_report(config, "oracle");
  for (const auto n : config.n_values) {
    const auto dist = DistanceDistribution::make(n, beta);
    for (const auto& deg : resolve_degrees(config, n)) {
      const auto start = Clock::now();
      ReportRow row;
      row.n = n;
      row.degree = deg.dist.origin();
      row.mean_degree = deg.dist.mean();
      row.method = "oracle";
      row.value = oracle_average_time(n, dist, DegreeAssignment{deg.dist}, config.oracle_limit);
      row.runtime_ms = elapsed_ms(start);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

Report run_sweep(const ExperimentConfig& config) {
  require_sizes(config);
  Report report = start_report(config, "sweep");
  const double beta = parse_distance_spec(config.distance_spec);

  for (const auto& spec : config.degree_specs) {
    ScalingSummary summary;
    summary.degree_spec = spec;
    summary.ratio_min = INFINITY;
    summary.ratio_max = -INFINITY;
    for (const auto n : config.n_values) {
      const auto dist = DistanceDistribution::make(n, beta);
      const auto deg = parse_degree_spec(spec, n);
      auto row = exact_row(n, deg, dist);
      const double log_n = std::log2(static_cast<double>(n));
      row.ratio = row.value * deg.mean() / (log_n * log_n);
      summary.ratio_min = std::min(summary.ratio_min, *row.ratio);
      summary.ratio_max = std::max(summary.ratio_max, *row.ratio);
      summary.all_dominated = summary.all_dominated && row.dominates.value_or(false);
      report.rows.push_back(std::move(row));
    }
    summary.degenerate = config.n_values.size() < 2;
    const double spread = summary.ratio_min > 0.0 ? summary.ratio_max / summary.ratio_min : INFINITY;
    report.notes.push_back(fmt::format("scaling degree={} ratio_min={} ratio_max={} max_over_min={}{} bound_dominates_all={}",
                                       spec, format_real(summary.ratio_min), format_real(summary.ratio_max),
                                       format_real(spread), summary.degenerate ? " (degenerate: single n)" : "",
                                       summary.all_dominated));
    report.scaling.push_back(summary);
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kConvexityMargin = 1e-9;
constexpr double kOracleTolerance = 1e-10;
constexpr double kRowTolerance = 1e-12;

VerifyCheck lemma1_check(const DistanceDistribution& dist) {
  VerifyCheck check;
  check.name = fmt::format("lemma1-bounds n={}", dist.n());
  if (dist.beta() != 1.0) {
    check.applicable = false;
    check.detail = "not applicable: distance law is not harmonic";
    return check;
  }
  const auto bounds = lemma1_bounds(dist.n());
  for (Distance r = 1; r < dist.n(); ++r) {
    const double p = halving_probability(dist, r);
    if (!(bounds.lower < p && p < bounds.upper)) {
      check.passed = false;
      check.detail = fmt::format("r={} halving={} outside ({}, {})", r, format_real(p),
                                 format_real(bounds.lower), format_real(bounds.upper));
      return check;
    }
  }
  check.detail = fmt::format("all r within ({}, {})", format_real(bounds.lower), format_real(bounds.upper));
  return check;
}

VerifyCheck row_check(const DistanceDistribution& dist, const DegreeDistribution& deg,
                      const VerifyHooks& hooks) {
  VerifyCheck check;
  check.name = fmt::format("progress-rows n={} degree={}", dist.n(), deg.origin());
  for (Distance r = 1; r < dist.n(); ++r) {
    auto row = progress_row(dist, r);
    if (hooks.perturb_row) hooks.perturb_row(row);
    for (Distance s = 1; s <= r; ++s) {
      const double expected = 1.0 - dist.interval_mass(s + 1, r);
      const bool ok = std::abs(row.alpha[s] - expected) <= kRowTolerance &&
                      (s == 1 || row.alpha[s] >= row.alpha[s - 1]) && row.alpha[s] > 0.0;
      if (!ok) {
        check.passed = false;
        check.detail = fmt::format("r={} s={} alpha={} expected {}", r, s, format_real(row.alpha[s]),
                                   format_real(expected));
        return check;
      }
    }
    if (row.alpha[r] != 1.0) {
      check.passed = false;
      check.detail = fmt::format("r={} alpha[r]={} != 1", r, format_real(row.alpha[r]));
      return check;
    }
    const auto pmf = jump_pmf(row, deg);
    CompensatedSum total;
    for (const double p : pmf) total.add(p);
    if (std::abs(total.value() - 1.0) > kRowTolerance) {
      check.passed = false;
      check.detail = fmt::format("r={} jump pmf sums to {}", r, format_real(total.value()));
      return check;
    }
  }
  return check;
}

VerifyCheck tau_check(const DistanceDistribution& dist, const DegreeDistribution& deg,
                      const ExpectedTimeTable& table) {
  VerifyCheck check;
  check.name = fmt::format("tau-positive n={} degree={}", dist.n(), deg.origin());
  if (!dist.strictly_decreasing()) {
    check.applicable = false;
    check.detail = "not applicable: weights not strictly decreasing";
    return check;
  }
  for (std::size_t r = 1; r < table.tau.size(); ++r) {
    if (!(table.tau[r] > 0.0)) {
      check.passed = false;
      check.detail = fmt::format("tau[{}]={}", r, format_real(table.tau[r]));
      return check;
    }
  }
  return check;
}

VerifyCheck oracle_check(const DistanceDistribution& dist, const DegreeDistribution& deg,
                         const ExpectedTimeTable& table, double limit) {
  VerifyCheck check;
  check.name = fmt::format("oracle-vs-dp n={} degree={}", dist.n(), deg.origin());
  const DegreeAssignment assignment{deg};
  const double count = oracle_outcome_count(dist.n(), assignment);
  if (count > limit) {
    check.applicable = false;
    check.detail = fmt::format("not applicable: {} realizations exceed budget", format_real(count));
    return check;
  }
  const double oracle = oracle_average_time(dist.n(), dist, assignment, limit);
  const double diff = std::abs(oracle - table.avg);
  check.passed = diff <= kOracleTolerance;
  check.detail = fmt::format("oracle={} dp={} diff={}", format_real(oracle), format_real(table.avg), format_real(diff));
  return check;
}

std::vector<VerifyCheck> convexity_checks(const DistanceDistribution& dist, const DegreeDistribution& deg,
                                          const ExpectedTimeTable& table, const VerifyHooks& hooks) {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.5 * i);
  std::vector<Distance> radii{1};
  for (const Distance r : {dist.n() / 4, dist.n() / 2}) {
    if (r >= 2 && std::find(radii.begin(), radii.end(), r) == radii.end()) radii.push_back(r);
  }
  std::vector<VerifyCheck> checks;
  for (const Distance r : radii) {
    VerifyCheck check;
    check.name = fmt::format("convexity n={} degree={} r={}", dist.n(), deg.origin(), r);
    auto row = progress_row(dist, r);
    if (hooks.perturb_row) hooks.perturb_row(row);
    const auto rep = convexity_check(table, row, grid);
    if (rep.degenerate) {
      check.applicable = false;
      check.detail = "exempt: T_1(d) is constant";
    } else {
      check.passed = rep.passed(kConvexityMargin);
      check.detail = fmt::format("decrease_margin={} convex_margin={}", format_real(rep.decrease_margin),
                                 format_real(rep.convex_margin));
    }
    checks.push_back(std::move(check));
  }
  return checks;
}

}  // namespace

Report run_verify(const ExperimentConfig& config, const VerifyHooks& hooks) {
  ExperimentConfig resolved = config;
  if (resolved.n_values.empty()) resolved.n_values = {4, 5, 64, 1024};
  require_sizes(resolved);
  Report report = start_report(resolved, "verify");
  const double beta = parse_distance_spec(config.distance_spec);

  for (const auto n : resolved.n_values) {
    const auto dist = DistanceDistribution::make(n, beta);
    report.checks.push_back(lemma1_check(dist));
    for (const auto& deg : resolve_degrees(resolved, n)) {
      const auto table = expected_times(n, deg.dist, dist);
      report.checks.push_back(row_check(dist, deg.dist, hooks));
      report.checks.push_back(tau_check(dist, deg.dist, table));
      report.checks.push_back(oracle_check(dist, deg.dist, table, config.oracle_limit));
      for (auto& c : convexity_checks(dist, deg.dist, table, hooks)) report.checks.push_back(std::move(c));

      const auto bound = theorem2_upper_bound(n, deg.dist, dist, table.avg);
      VerifyCheck dominance;
      dominance.name = fmt::format("bound-dominance n={} degree={}", n, deg.dist.origin());
      dominance.passed = bound.dominates();
      dominance.detail = fmt::format("bound={} exact={}", format_real(bound.bound), format_real(table.avg));
      report.checks.push_back(std::move(dominance));
    }
  }
  for (const auto& c : report.checks) {
    const char* status = !c.applicable ? (c.passed ? "SKIP" : "FAIL") : (c.passed ? "PASS" : "FAIL");
    report.notes.push_back(fmt::format("{} {}: {}", status, c.name, c.detail));
  }
  return report;
}

Report run_command(const ExperimentConfig& config) {
  const auto& cmd = config.command;
  if (cmd == "exact") return run_exact(config);
  if (cmd == "compare") return run_compare(config);
  if (cmd == "simulate") return run_simulate(config);
  if (cmd == "pernode") return run_pernode(config);
  if (cmd == "sweep") return run_sweep(config);
  if (cmd == "oracle") return run_oracle(config);
  if (cmd == "verify") return run_verify(config);
  throw UsageError(fmt::format("unknown command '{}'", cmd));
}

// ---------------------------------------------------------------------------

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string opt_real(const std::optional<double>& x) { return x ? format_real(*x) : ""; }

nlohmann::ordered_json json_real(double x) {
  if (!std::isfinite(x)) return format_real(x);
  const auto text = fmt::format("{:.12g}", x);
  double rounded = x;
  std::from_chars(text.data(), text.data() + text.size(), rounded);
  return rounded;
}

nlohmann::ordered_json json_opt(const std::optional<double>& x) { return x ? json_real(*x) : nlohmann::ordered_json(); }

}  // namespace

void write_report(std::ostream& out, const Report& report, OutputFormat format) {
  const bool has_z = std::any_of(report.rows.begin(), report.rows.end(), [](const auto& r) { return r.z.has_value(); });
  const bool has_ratio =
      std::any_of(report.rows.begin(), report.rows.end(), [](const auto& r) { return r.ratio.has_value(); });
  const bool has_dom = std::any_of(report.rows.begin(), report.rows.end(),
                                   [](const auto& r) { return r.dominates.has_value(); });

  if (format == OutputFormat::csv) {
    for (const auto& note : report.notes) out << "# " << note << '\n';
    out << "n,degree,mean_degree,method,value,stderr,p_half_min,lambda,bound,runtime_ms,seed";
    if (has_z) out << ",z";
    if (has_ratio) out << ",ratio";
    if (has_dom) out << ",dominates";
    out << '\n';
    for (const auto& r : report.rows) {
      out << r.n << ',' << csv_field(r.degree) << ',' << format_real(r.mean_degree) << ',' << r.method << ','
          << format_real(r.value) << ',' << opt_real(r.std_error) << ',' << opt_real(r.p_half_min) << ','
          << opt_real(r.lambda) << ',' << opt_real(r.bound) << ',' << format_real(r.runtime_ms) << ','
          << (r.seed ? std::to_string(*r.seed) : "");
      if (has_z) out << ',' << opt_real(r.z);
      if (has_ratio) out << ',' << opt_real(r.ratio);
      if (has_dom) out << ',' << (r.dominates ? (*r.dominates ? "true" : "false") : "");
      out << '\n';
    }
    return;
  }

  for (const auto& note : report.notes) out << nlohmann::ordered_json{{"note", note}}.dump() << '\n';
  for (const auto& r : report.rows) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["degree"] = r.degree;
    j["mean_degree"] = json_real(r.mean_degree);
    j["method"] = r.method;
    j["value"] = json_real(r.value);
    j["stderr"] = json_opt(r.std_error);
    j["p_half_min"] = json_opt(r.p_half_min);
    j["lambda"] = json_opt(r.lambda);
    j["bound"] = json_opt(r.bound);
    j["runtime_ms"] = json_real(r.runtime_ms);
    j["seed"] = r.seed ? nlohmann::ordered_json(*r.seed) : nlohmann::ordered_json();
    if (has_z) j["z"] = json_opt(r.z);
    if (has_ratio) j["ratio"] = json_opt(r.ratio);
    if (has_dom) j["dominates"] = r.dominates ? nlohmann::ordered_json(*r.dominates) : nlohmann::ordered_json();
    out << j.dump() << '\n';
  }
}

}  // namespace hring
