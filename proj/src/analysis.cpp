#include "hring/analysis.hpp"

#include <cmath>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "hring/routing.hpp"

namespace hring {

namespace {

double int_pow(double base, Degree exp) {
  double result = 1.0;
  while (exp != 0) {
    if (exp & 1U) result *= base;
    base *= base;
    exp >>= 1U;
  }
  return result;
}

// alpha^d for real d >= 0; alpha = 1 and d = 0 are exact.
double real_pow(double alpha, double d) {
  if (alpha == 1.0 || d == 0.0) return 1.0;
  if (alpha <= 0.0) return 0.0;
  return std::exp(d * std::log(alpha));
}

void require_distance(const DistanceDistribution& dist, Distance r) {
  if (r < 1 || r > dist.n() - 1) {
    throw InputError(fmt::format("distance {} outside [1, {}]", r, dist.n() - 1));
  }
}

void require_ring(std::uint32_t n, const DistanceDistribution& dist) {
  if (n < 2) throw InputError(fmt::format("ring size must be at least 2, got {}", n));
  if (dist.n() != n) {
    throw InputError(fmt::format("distance law built for n={} used with n={}", dist.n(), n));
  }
}

// Fills alpha[1..r] straight from the cdf: alpha[s] = 1 - (cdf[r] - cdf[s]).
void fill_alpha(std::span<const double> cdf, Distance r, std::vector<double>& alpha) {
  alpha.assign(static_cast<std::size_t>(r) + 1, 0.0);
  const double top = cdf[r];
  for (Distance s = 1; s < r; ++s) alpha[s] = 1.0 - (top - cdf[s]);
  alpha[r] = 1.0;
}

// P(jump = s) = G(s) - G(s-1) with G(s) = sum_d p(d) alpha[s]^d and G(0) = 0.
void fill_jump_pmf(std::span<const double> alpha, std::span<const DegreeEntry> entries,
                   std::vector<double>& pmf) {
  const std::size_t r = alpha.size() - 1;
  pmf.assign(r + 1, 0.0);
  double prev = 0.0;
  for (std::size_t s = 1; s <= r; ++s) {
    double g = 0.0;
    for (const auto& e : entries) g += e.prob * int_pow(alpha[s], e.degree);
    pmf[s] = g - prev;
    prev = g;
  }
}

}  // namespace

ProgressRow progress_row(const DistanceDistribution& dist, Distance r) {
  require_distance(dist, r);
  ProgressRow row;
  row.r = r;
  fill_alpha(dist.cdf_table(), r, row.alpha);
  return row;
}

std::vector<double> jump_pmf(const ProgressRow& row, const DegreeDistribution& deg) {
  std::vector<double> pmf;
  fill_jump_pmf(row.alpha, deg.entries(), pmf);
  return pmf;
}

ExpectedTimeTable expected_times(std::uint32_t n, const DegreeDistribution& deg,
                                 const DistanceDistribution& dist) {
  require_ring(n, dist);
  ExpectedTimeTable table;
  table.n = n;
  table.degree = deg.origin();
  table.distance = dist.describe();
  table.T.assign(n, 0.0);
  table.tau.assign(n, 0.0);

  std::vector<double> alpha;
  std::vector<double> pmf;
  const auto cdf = dist.cdf_table();
  const auto entries = deg.entries();
  for (Distance r = 1; r < n; ++r) {
    fill_alpha(cdf, r, alpha);
    fill_jump_pmf(alpha, entries, pmf);
    double t = 1.0;
    for (Distance s = 1; s <= r; ++s) t += pmf[s] * table.T[r - s];
    table.T[r] = t;
    table.tau[r] = t - table.T[r - 1];
  }

  CompensatedSum sum;
  for (const double t : table.T) sum.add(t);
  table.avg = sum.value() / n;
  return table;
}

double first_step_time_real_degree(const ExpectedTimeTable& table, const ProgressRow& row,
                                   double d) {
  if (!std::isfinite(d) || d < 0.0) {
    throw InputError(fmt::format("real degree must be finite and >= 0, got {}", d));
  }
  if (row.r < 1 || row.r > table.n - 1 || row.alpha.size() != row.r + 1U) {
    throw InputError(fmt::format("progress row r={} does not fit a table with n={}", row.r, table.n));
  }
  double t = 1.0;
  double prev = 0.0;
  for (Distance s = 1; s <= row.r; ++s) {
    const double cur = real_pow(row.alpha[s], d);
    t += (cur - prev) * table.T[row.r - s];
    prev = cur;
  }
  return t;
}

ConvexityReport convexity_check(const ExpectedTimeTable& table, const ProgressRow& row,
                                std::span<const double> d_grid) {
  if (d_grid.size() < 3) throw InputError("convexity grid needs at least 3 points");
  for (std::size_t i = 1; i < d_grid.size(); ++i) {
    if (!(d_grid[i] > d_grid[i - 1])) throw InputError("convexity grid must be strictly increasing");
  }

  ConvexityReport report;
  report.r = row.r;
  for (const double d : d_grid) report.values.push_back(first_step_time_real_degree(table, row, d));
  if (row.r == 1) {
    report.degenerate = true;
    return report;
  }

  const auto& f = report.values;
  double decrease = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    decrease = std::min(decrease, -(f[i + 1] - f[i]) / (d_grid[i + 1] - d_grid[i]));
  }
  // Three-point second difference; reduces to (f+ - 2f + f-)/h^2 on a uniform grid.
  double convex = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    const double h1 = d_grid[i] - d_grid[i - 1];
    const double h2 = d_grid[i + 1] - d_grid[i];
    const double second =
        2.0 * (f[i - 1] / (h1 * (h1 + h2)) - f[i] / (h1 * h2) + f[i + 1] / (h2 * (h1 + h2)));
    convex = std::min(convex, second);
  }
  report.decrease_margin = decrease;
  report.convex_margin = convex;
  report.decreasing = decrease > 0.0;
  report.convex = convex > 0.0;
  return report;
}

PerNodeTimes per_node_expected_times(std::uint32_t n, std::span<const Degree> degrees,
                                     const DistanceDistribution& dist, bool want_matrix,
                                     std::uint32_t cap) {
  require_ring(n, dist);
  if (degrees.size() != n) {
    throw InputError(fmt::format("{} per-node degrees given for a ring of {}", degrees.size(), n));
  }
  if (n > cap) throw ResourceError(fmt::format("per-node solver limited to n <= {}, got {}", cap, n));

  // by_dest[v * n + r] = expected time to v from the node at distance r.
  std::vector<double> by_dest(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> alpha;
  std::map<Degree, std::vector<double>> pmf_by_degree;
  for (const Degree d : degrees) pmf_by_degree.try_emplace(d);

  const auto cdf = dist.cdf_table();
  for (Distance r = 1; r < n; ++r) {
    fill_alpha(cdf, r, alpha);
    for (auto& [d, pmf] : pmf_by_degree) {
      const DegreeEntry point{d, 1.0};
      fill_jump_pmf(alpha, std::span(&point, 1), pmf);
    }
    for (Node v = 0; v < n; ++v) {
      const Node u = (v + n - r) % n;
      const auto& pmf = pmf_by_degree.at(degrees[u]);
      double* row = by_dest.data() + static_cast<std::size_t>(v) * n;
      double t = 1.0;
      for (Distance s = 1; s <= r; ++s) t += pmf[s] * row[r - s];
      row[r] = t;
    }
  }

  PerNodeTimes out;
  CompensatedSum sum;
  for (const double t : by_dest) sum.add(t);
  out.avg = sum.value() / (static_cast<double>(n) * n);
  if (want_matrix) {
    std::vector<double> matrix(static_cast<std::size_t>(n) * n, 0.0);
    for (Node u = 0; u < n; ++u) {
      for (Node v = 0; v < n; ++v) {
        matrix[static_cast<std::size_t>(u) * n + v] =
            by_dest[static_cast<std::size_t>(v) * n + ring_distance(n, u, v)];
      }
    }
    out.matrix = std::move(matrix);
  }
  return out;
}

double halving_probability(const DistanceDistribution& dist, Distance r) {
  require_distance(dist, r);
  // delta(w, v) <= r/2 over integers means an advance of at least ceil(r/2).
  return dist.interval_mass((r + 1) / 2, r);
}

HalvingBounds lemma1_bounds(std::uint32_t n) {
  if (n < 2) throw InputError(fmt::format("ring size must be at least 2, got {}", n));
  const double h = harmonic_number(n - 1);
  return {std::log(2.0) / h, (2.0 + std::log(4.0)) / h};
}

BoundReport theorem2_upper_bound(std::uint32_t n, const DegreeDistribution& deg,
                                 const DistanceDistribution& dist, double exact_avg) {
  require_ring(n, dist);
  BoundReport rep;
  rep.n = n;
  rep.exact_avg = exact_avg;
  rep.p_half_min = 1.0;
  for (Distance r = 1; r < n; ++r) rep.p_half_min = std::min(rep.p_half_min, halving_probability(dist, r));

  CompensatedSum miss;
  for (const auto& e : deg.entries()) miss.add(e.prob * int_pow(1.0 - rep.p_half_min, e.degree));
  rep.miss_factor = miss.value();
  if (rep.miss_factor >= 1.0) {
    rep.infinite = true;
    rep.lambda = std::numeric_limits<double>::infinity();
    rep.bound = std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.lambda = 1.0 / (1.0 - rep.miss_factor);
  rep.bound = rep.lambda * std::log2(static_cast<double>(n));
  return rep;
}

BoundReport theorem2_upper_bound(std::uint32_t n, const DegreeDistribution& deg,
                                 const DistanceDistribution& dist) {
  return theorem2_upper_bound(n, deg, dist, expected_times(n, deg, dist).avg);
}

void write_table_csv(std::ostream& out, const ExpectedTimeTable& table) {
  out << "r,T_r,tau_r\n";
  for (std::size_t r = 0; r < table.T.size(); ++r) {
    out << fmt::format("{},{:.12g},{:.12g}\n", r, table.T[r], table.tau[r]);
  }
  out << fmt::format("# avg={:.12g}\n", table.avg);
}

}  // namespace hring
