#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hring/model.hpp"

namespace hring {

/// Progress CDF of a node holding one contact at remaining distance r:
/// alpha[s] = P(greedy jump <= s), s in [1, r]. A contact longer than r
/// overshoots and leaves the ring edge (jump 1) as the best move.
struct ProgressRow {
  Distance r = 0;
  std::vector<double> alpha;  // alpha[0] is unused and held at 0

  double at(Distance s) const { return alpha[s]; }
};

ProgressRow progress_row(const DistanceDistribution& dist, Distance r);

/// P(jump = s) for s in [1, r] with the source's degree drawn from `deg`.
/// Index 0 of the result is 0.
std::vector<double> jump_pmf(const ProgressRow& row, const DegreeDistribution& deg);

struct ExpectedTimeTable {
  std::uint32_t n = 0;
  std::vector<double> T;    // T[r], r in [0, n-1]
  std::vector<double> tau;  // tau[r] = T[r] - T[r-1]; tau[0] = 0
  double avg = 0.0;         // (1/n) * sum_r T[r]
  std::string degree;
  std::string distance;
};

/// Exact expected greedy routing times on a ring whose nodes all draw their
/// degree from `deg`. Cost O(n^2 * |support|).
ExpectedTimeTable expected_times(std::uint32_t n, const DegreeDistribution& deg,
                                 const DistanceDistribution& dist);

/// T_r(d): expected time from distance row.r when the source holds d contacts
/// (d real, via alpha^d) and every downstream node follows `table`.
double first_step_time_real_degree(const ExpectedTimeTable& table, const ProgressRow& row,
                                   double d);

struct ConvexityReport {
  Distance r = 0;
  bool degenerate = false;   // r = 1: T_1(d) is constant
  bool decreasing = false;
  bool convex = false;
  double decrease_margin = 0.0;  // min over consecutive grid pairs of -(f[i+1]-f[i])/h
  double convex_margin = 0.0;    // min over interior points of the second difference
  std::vector<double> values;

  bool passed(double threshold) const {
    return degenerate || (decrease_margin > threshold && convex_margin > threshold);
  }
};

/// Finite-difference shape check of T_r(d) over `d_grid`.
ConvexityReport convexity_check(const ExpectedTimeTable& table, const ProgressRow& row,
                                std::span<const double> d_grid);

inline constexpr std::uint32_t kDefaultPerNodeCap = 512;

struct PerNodeTimes {
  double avg = 0.0;
  /// Row-major T(u, v) when requested.
  std::optional<std::vector<double>> matrix;
};

/// Exact all-pairs average when node u holds exactly degrees[u] contacts.
/// O(n^3); n above `cap` raises ResourceError.
PerNodeTimes per_node_expected_times(std::uint32_t n, std::span<const Degree> degrees,
                                     const DistanceDistribution& dist, bool want_matrix = false,
                                     std::uint32_t cap = kDefaultPerNodeCap);

/// Probability that one contact from distance r lands within r/2 of the
/// destination: mass of distances in [ceil(r/2), r].
double halving_probability(const DistanceDistribution& dist, Distance r);

struct HalvingBounds {
  double lower;
  double upper;
  double upper_clipped() const { return upper < 1.0 ? upper : 1.0; }
};

/// (ln 2 / H_{n-1}, (2 + ln 4) / H_{n-1}).
HalvingBounds lemma1_bounds(std::uint32_t n);

struct BoundReport {
  std::uint32_t n = 0;
  double p_half_min = 0.0;
  double miss_factor = 0.0;
  double lambda = 0.0;
  double bound = 0.0;
  double exact_avg = 0.0;
  bool infinite = false;  // no contact can ever halve the distance

  bool dominates() const { return infinite || bound >= exact_avg; }
};

/// Finite-n halving bound lambda * log2(n), with the per-step success
/// probability taken from the exact minimum halving probability.
BoundReport theorem2_upper_bound(std::uint32_t n, const DegreeDistribution& deg,
                                 const DistanceDistribution& dist);
/// Same, reusing a DP average that is already known.
BoundReport theorem2_upper_bound(std::uint32_t n, const DegreeDistribution& deg,
                                 const DistanceDistribution& dist, double exact_avg);

inline constexpr double kDefaultOracleLimit = 1.0e7;

using DegreeAssignment = std::variant<std::vector<Degree>, DegreeDistribution>;

/// Number of weighted realizations the oracle would visit.
double oracle_outcome_count(std::uint32_t n, const DegreeAssignment& degrees);

/// Exact all-pairs average by enumerating every realization (each node's
/// degree and ordered contact-distance tuple) and routing every pair on it.
double oracle_average_time(std::uint32_t n, const DistanceDistribution& dist,
                           const DegreeAssignment& degrees,
                           double limit = kDefaultOracleLimit);

/// CSV with header `r,T_r,tau_r` and a trailing `# avg=<value>` line.
void write_table_csv(std::ostream& out, const ExpectedTimeTable& table);

}  // namespace hring
