// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "hring/analysis.hpp"
#include "hring/experiment.hpp"
#include "hring/routing.hpp"

using namespace hring;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<Outcome()> body;
};

std::vector<double> d_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.5 * i);
  return grid;
}

// Geometric law on {0..cap} whose truncated mean is exactly `mean`: the ratio
// q is re-solved by bisection after truncation, then frozen as an explicit pmf.
DegreeDistribution renormalized_geometric(double mean, Degree cap) {
  auto truncated_mean = [cap](double q) {
    double num = 0.0;
    double den = 0.0;
    double w = 1.0;
    for (Degree k = 0; k <= cap; ++k) {
      num += k * w;
      den += w;
      w *= q;
    }
    return num / den;
  };
  double lo = 0.0;
  double hi = 0.999999;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (truncated_mean(mid) < mean ? lo : hi) = mid;
  }
  const double q = 0.5 * (lo + hi);
  std::vector<DegreeEntry> entries;
  double w = 1.0;
  double z = 0.0;
  for (Degree k = 0; k <= cap; ++k) {
    entries.push_back({k, w});
    z += w;
    w *= q;
  }
  for (auto& e : entries) e.prob /= z;
  return DegreeDistribution::from_pmf(entries);
}

const std::vector<std::uint32_t> kSweepSizes{1u << 8, 1u << 9, 1u << 10, 1u << 11, 1u << 12, 1u << 13, 1u << 14};
const std::vector<Degree> kSweepDegrees{1, 2, 4};

Outcome oracle_matches_dp() {
  Outcome out;
  for (const std::uint32_t n : {3u, 4u, 5u}) {
    const auto dist = DistanceDistribution::harmonic(n);
    const auto deg = DegreeDistribution::fixed(1);
    const double dp = expected_times(n, deg, dist).avg;
    const double oracle = oracle_average_time(n, dist, deg);
    const double diff = std::abs(oracle - dp);
    out.detail += fmt::format("n={} dp={} |diff|={:.3g}; ", n, format_real(dp), diff);
    out.require(diff <= 1e-10, fmt::format("n={} oracle and DP differ by {:.3g}", n, diff));
    if (n == 4) out.require(std::abs(dp - 299.0 / 242) <= 1e-10, "n=4 value differs from 299/242");
  }
  return out;
}

Outcome per_node_matches_oracle() {
  Outcome out;
  const auto dist = DistanceDistribution::harmonic(4);
  const std::vector<Degree> degrees{1, 0, 2, 1};
  const double dp = per_node_expected_times(4, degrees, dist).avg;
  const double oracle = oracle_average_time(4, dist, degrees);
  const double diff = std::abs(dp - oracle);
  out.detail = fmt::format("dp={} oracle={} |diff|={:.3g}", format_real(dp), format_real(oracle), diff);
  out.require(diff <= 1e-10, "per-node DP disagrees with enumeration");
  return out;
}

Outcome mc_matches_dp() {
  Outcome out;
  const std::uint32_t n = 1024;
  const auto dist = DistanceDistribution::harmonic(n);
  const auto deg = DegreeDistribution::fixed(1);
  const double dp = expected_times(n, deg, dist).avg;
  for (const McMode mode : {McMode::lazy, McMode::full}) {
    McOptions opt;
    opt.trials = 100000;
    opt.seed = 20240611;
    opt.shards = 4;
    opt.mode = mode;
    const auto est = mc_estimate_average(n, deg, dist, opt);
    const double z = (est.mean - dp) / est.std_error;
    out.detail += fmt::format("{}: mean={} stderr={:.4g} z={:.3f}; ", to_string(mode), format_real(est.mean),
                              est.std_error, z);
    out.require(std::abs(est.mean - dp) <= 4 * est.std_error, to_string(mode) + " mode outside 4 stderr");
  }
  out.detail += fmt::format("dp={}", format_real(dp));
  return out;
}

Outcome lemma1_bounds_hold() {
  Outcome out;
  for (const std::uint32_t n : {16u, 256u, 4096u}) {
    const auto dist = DistanceDistribution::harmonic(n);
    const auto bounds = lemma1_bounds(n);
    double lo = 1.0;
    double hi = 0.0;
    for (Distance r = 1; r < n; ++r) {
      const double p = halving_probability(dist, r);
      lo = std::min(lo, p);
      hi = std::max(hi, p);
      out.require(bounds.lower < p && p < bounds.upper, fmt::format("n={} r={} out of bounds", n, r));
    }
    out.detail += fmt::format("n={} ({:.4f} < [{:.4f}, {:.4f}] < {:.4f}); ", n, bounds.lower, lo, hi, bounds.upper);
  }
  return out;
}

Outcome tau_positive() {
  Outcome out;
  const std::uint32_t n = 2048;
  for (const double beta : {0.5, 1.0, 2.0}) {
    const auto dist = DistanceDistribution::make(n, beta);
    for (const char* spec : {"fixed:1", "fixed:4", "twopoint:2.5"}) {
      const auto table = expected_times(n, parse_degree_spec(spec, n), dist);
      double min_tau = INFINITY;
      for (std::uint32_t r = 1; r < n; ++r) min_tau = std::min(min_tau, table.tau[r]);
      out.require(min_tau > 0.0, fmt::format("beta={} {} min tau {:.3g}", beta, spec, min_tau));
      out.detail += fmt::format("beta={} {} min_tau={:.3g}; ", beta, spec, min_tau);
    }
  }
  return out;
}

Outcome bound_dominates() {
  Outcome out;
  int checked = 0;
  auto check = [&](std::uint32_t n, const DegreeDistribution& deg, const DistanceDistribution& dist) {
    const auto rep = theorem2_upper_bound(n, deg, dist);
    ++checked;
    out.require(rep.dominates(), fmt::format("n={} {} {}: bound {} < exact {}", n, deg.origin(), dist.describe(),
                                             format_real(rep.bound), format_real(rep.exact_avg)));
  };
  for (const std::uint32_t n : {3u, 4u, 5u}) check(n, DegreeDistribution::fixed(1), DistanceDistribution::harmonic(n));
  check(1024, DegreeDistribution::fixed(1), DistanceDistribution::harmonic(1024));
  for (const double beta : {0.5, 1.0, 2.0}) {
    const auto dist = DistanceDistribution::make(2048, beta);
    for (const char* spec : {"fixed:1", "fixed:4", "twopoint:2.5"}) check(2048, parse_degree_spec(spec, 2048), dist);
  }
  double min_slack = INFINITY;
  for (const auto n : kSweepSizes) {
    const auto dist = DistanceDistribution::harmonic(n);
    for (const Degree l : kSweepDegrees) {
      const auto rep = theorem2_upper_bound(n, DegreeDistribution::fixed(l), dist);
      ++checked;
      min_slack = std::min(min_slack, rep.bound / rep.exact_avg);
      out.require(rep.dominates(), fmt::format("n={} fixed:{} bound {} < exact {}", n, l, format_real(rep.bound),
                                               format_real(rep.exact_avg)));
    }
  }
  out.detail = fmt::format("{} configs; smallest bound/exact on the sweep = {:.4f}", checked, min_slack);
  return out;
}

Outcome fixed_degree_optimal() {
  Outcome out;
  for (const std::uint32_t n : {256u, 1024u}) {
    const auto dist = DistanceDistribution::harmonic(n);
    const auto fixed = DegreeDistribution::fixed(2);
    const double best = expected_times(n, fixed, dist).avg;
    const Degree cap = default_degree_cap(n);
    const std::vector<std::pair<std::string, DegreeDistribution>> rivals{
        {"pmf:1=0.5,3=0.5", parse_degree_spec("pmf:1=0.5,3=0.5", n)},
        {"pmf:0=0.5,4=0.5", parse_degree_spec("pmf:0=0.5,4=0.5", n)},
        {"pmf:0=2/3,6=1/3", parse_degree_spec("pmf:0=2/3,6=1/3", n)},
        {fmt::format("geometric:2 (cap {}, mean renormalized)", cap), renormalized_geometric(2.0, cap)}};
    out.detail += fmt::format("n={} fixed:2={}", n, format_real(best));
    for (const auto& [name, q] : rivals) {
      out.require(std::abs(q.mean() - 2.0) <= 1e-9, fmt::format("{} has mean {}", q.origin(), q.mean()));
      const double v = expected_times(n, q, dist).avg;
      out.detail += fmt::format(" {}: +{:.6g}{}", name, v - best, v > best ? " (strict)" : "");
      out.require(best <= v - 1e-12, fmt::format("n={} {} beats or ties fixed:2", n, name));
    }
    out.detail += "; ";
  }
  return out;
}

Outcome shape_of_real_degree_time() {
  Outcome out;
  const std::uint32_t n = 256;
  const auto dist = DistanceDistribution::harmonic(n);
  const auto grid = d_grid();
  for (const char* spec : {"fixed:2", "fixed:1", "twopoint:2.5"}) {
    const auto table = expected_times(n, parse_degree_spec(spec, n), dist);
    for (const Distance r : {16u, 64u, 128u}) {
      const auto rep = convexity_check(table, progress_row(dist, r), grid);
      out.require(!rep.degenerate && rep.passed(1e-9),
                  fmt::format("{} r={} margins {:.3g}/{:.3g}", spec, r, rep.decrease_margin, rep.convex_margin));
      if (std::string(spec) == "fixed:2") {
        out.detail += fmt::format("r={} decrease>={:.3g} convex>={:.3g}; ", r, rep.decrease_margin, rep.convex_margin);
      }
    }
    const auto flat = convexity_check(table, progress_row(dist, 1), grid);
    out.require(flat.degenerate, "r=1 not flagged as constant");
  }
  out.detail += "r=1 exempt (constant)";
  return out;
}

Outcome alternating_degrees_win() {
  Outcome out;
  const auto dist = DistanceDistribution::harmonic(8);
  const double alt = per_node_expected_times(8, std::vector<Degree>{2, 0, 2, 0, 2, 0, 2, 0}, dist).avg;
  const double flat = per_node_expected_times(8, std::vector<Degree>(8, 1), dist).avg;
  out.detail = fmt::format("alternating={} uniform={} gap={:.6g}", format_real(alt), format_real(flat), flat - alt);
  out.require(alt < flat, "alternating two/zero contacts does not beat one contact each");
  return out;
}

Outcome scaling_report() {
  Outcome out;
  ExperimentConfig config;
  config.command = "sweep";
  config.n_values = kSweepSizes;
  config.degree_specs = {"fixed:1", "fixed:2", "fixed:4"};
  const auto report = run_sweep(config);
  std::puts("    n      degree   value          ratio      bound       dominates");
  for (const auto& row : report.rows) {
    out.require(row.ratio.has_value(), "ratio missing");
    out.require(row.dominates.value_or(false), fmt::format("n={} {} not dominated", row.n, row.degree));
    std::printf("    %-6u %-8s %-14s %-10s %-11s %s\n", row.n, row.degree.c_str(), format_real(row.value).c_str(),
                row.ratio ? fmt::format("{:.6f}", *row.ratio).c_str() : "-",
                row.bound ? fmt::format("{:.5g}", *row.bound).c_str() : "-",
                row.dominates.value_or(false) ? "yes" : "no");
  }
  for (const auto& s : report.scaling) {
    out.detail += fmt::format("{} ratio in [{:.4f}, {:.4f}] max/min={:.4f}; ", s.degree_spec, s.ratio_min,
                              s.ratio_max, s.ratio_max / s.ratio_min);
  }
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "oracle == DP (n = 3, 4, 5)", 1.0, oracle_matches_dp},
      {2, "per-node DP == oracle (n = 4, degrees 1,0,2,1)", 5.0, per_node_matches_oracle},
      {3, "MC == DP within 4 stderr (n = 1024, lazy and full)", 30.0, mc_matches_dp},
      {4, "halving probability inside the two-sided bounds", 5.0, lemma1_bounds_hold},
      {5, "T_r strictly increasing (n = 2048)", 30.0, tau_positive},
      {6, "lambda log2 n dominates the exact average", 300.0, bound_dominates},
      {7, "fixed degree optimal among mean-2 laws", 120.0, fixed_degree_optimal},
      {8, "T_r(d) strictly decreasing and convex in d", 5.0, shape_of_real_degree_time},
      {9, "alternating 2/0 contacts beat uniform 1 (n = 8, per-node)", 1.0, alternating_degrees_win},
      {10, "scaling report T*l/log2(n)^2 over n = 2^8..2^14", 300.0, scaling_report},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.body();
    } catch (const std::exception& e) {
      outcome.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    outcome.require(secs < c.budget_s, fmt::format("runtime {:.2f}s over {:.0f}s budget", secs, c.budget_s));
    failures += outcome.passed ? 0 : 1;
    std::printf("[%s] criterion %2d: %s (%.2fs)\n      %s\n", outcome.passed ? "PASS" : "FAIL", c.id,
                c.title.c_str(), secs, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
