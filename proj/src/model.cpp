#include "hring/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

namespace hring {

Distance ring_distance(std::uint32_t n, Node u, Node v) {
  if (u >= n || v >= n) {
    throw InputError(fmt::format("node id out of range: u={}, v={}, n={}", u, v, n));
  }
  return v >= u ? v - u : n - (u - v);
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    carry_ += (sum_ - t) + x;
  } else {
    carry_ += (x - t) + sum_;
  }
  sum_ = t;
}

double harmonic_number(std::uint32_t m) {
  CompensatedSum sum;
  for (std::uint32_t i = 1; i <= m; ++i) sum.add(1.0 / i);
  return sum.value();
}

namespace {

double power_weight(Distance r, double beta) {
  if (beta == 1.0) return 1.0 / r;
  if (beta == 0.0) return 1.0;
  return std::pow(static_cast<double>(r), -beta);
}

}  // namespace

DistanceDistribution DistanceDistribution::make(std::uint32_t n, double beta) {
  if (n < 2) throw InputError(fmt::format("ring size must be at least 2, got {}", n));
  if (!std::isfinite(beta) || beta < 0.0) {
    throw InputError(fmt::format("distance exponent must be finite and >= 0, got {}", beta));
  }
  DistanceDistribution dist;
  dist.n_ = n;
  dist.beta_ = beta;
  dist.weight_.assign(n, 0.0);
  dist.cdf_.assign(n, 0.0);

  std::vector<double> prefix(n, 0.0);
  CompensatedSum total;
  for (Distance r = 1; r < n; ++r) {
    total.add(power_weight(r, beta));
    prefix[r] = total.value();
  }
  const double z = total.value();
  for (Distance r = 1; r < n; ++r) {
    dist.weight_[r] = power_weight(r, beta) / z;
    dist.cdf_[r] = prefix[r] / z;
  }
  dist.cdf_[n - 1] = 1.0;
  return dist;
}

double DistanceDistribution::interval_mass(Distance a, Distance b) const {
  if (a > b) return 0.0;
  if (a < 1 || b > n_ - 1) {
    throw InputError(fmt::format("distance interval [{}, {}] outside [1, {}]", a, b, n_ - 1));
  }
  return cdf_[b] - cdf_[a - 1];
}

Distance DistanceDistribution::sample(RandomStream& stream) const {
  const double u = stream.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  // cdf_[0] = 0 <= u < 1 = cdf_[n-1], so the hit lies in [1, n-1].
  return static_cast<Distance>(it - cdf_.begin());
}

std::string DistanceDistribution::describe() const {
  if (beta_ == 1.0) return "harmonic";
  return fmt::format("powerlaw:{}", beta_);
}

// ---------------------------------------------------------------------------

Degree default_degree_cap(std::uint32_t n) {
  if (n < 2) return 1;
  return static_cast<Degree>(std::ceil(8.0 * std::log(static_cast<double>(n))));
}

DegreeDistribution DegreeDistribution::build(std::vector<DegreeEntry> entries,
                                             std::string origin) {
  std::erase_if(entries, [](const DegreeEntry& e) { return e.prob == 0.0; });
  if (entries.empty()) throw InputError("degree distribution has no positive mass");
  std::sort(entries.begin(), entries.end(),
            [](const DegreeEntry& a, const DegreeEntry& b) { return a.degree < b.degree; });

  DegreeDistribution out;
  CompensatedSum total;
  for (const auto& e : entries) total.add(e.prob);
  const double z = total.value();

  CompensatedSum mean;
  CompensatedSum running;
  for (auto& e : entries) {
    e.prob /= z;
    mean.add(e.degree * e.prob);
    running.add(e.prob);
    out.cdf_.push_back(running.value());
  }
  out.cdf_.back() = 1.0;
  out.mean_ = mean.value();
  out.cap_ = entries.back().degree;
  out.entries_ = std::move(entries);
  out.origin_ = std::move(origin);
  return out;
}

DegreeDistribution DegreeDistribution::fixed(Degree count) {
  return build({{count, 1.0}}, fmt::format("fixed:{}", count));
}

DegreeDistribution DegreeDistribution::two_point(double mean) {
  if (!std::isfinite(mean) || mean < 0.0) {
    throw InputError(fmt::format("two-point mean must be finite and >= 0, got {}", mean));
  }
  const double lo = std::floor(mean);
  const double hi = std::ceil(mean);
  std::string origin = fmt::format("twopoint:{:.12g}", mean);
  if (lo == hi) return build({{static_cast<Degree>(lo), 1.0}}, std::move(origin));
  return build({{static_cast<Degree>(lo), hi - mean}, {static_cast<Degree>(hi), mean - lo}},
               std::move(origin));
}

DegreeDistribution DegreeDistribution::truncated(std::vector<double> weights,
                                                 double requested_mean, std::string origin) {
  std::vector<DegreeEntry> entries;
  for (std::size_t d = 0; d < weights.size(); ++d) {
    entries.push_back({static_cast<Degree>(d), weights[d]});
  }
  DegreeDistribution out = build(std::move(entries), std::move(origin));
  out.cap_ = static_cast<Degree>(weights.size() - 1);
  out.origin_ += fmt::format(",cap={} (truncated; mean {:.12g})", out.cap_, out.mean_);
  if (std::abs(out.mean_ - requested_mean) > 0.1 * requested_mean) {
    out.warning_ = fmt::format("truncation at cap {} moved mean from {:.12g} to {:.12g}",
                               out.cap_, requested_mean, out.mean_);
  }
  return out;
}

DegreeDistribution DegreeDistribution::geometric(double mean, Degree cap) {
  if (!std::isfinite(mean) || mean <= 0.0) {
    throw InputError(fmt::format("geometric mean must be finite and > 0, got {}", mean));
  }
  // P(k) = (1 - q) q^k on {0, 1, ...} has mean q / (1 - q).
  const double q = mean / (1.0 + mean);
  std::vector<double> weights(static_cast<std::size_t>(cap) + 1);
  double term = 1.0 - q;
  for (auto& w : weights) {
    w = term;
    term *= q;
  }
  return truncated(std::move(weights), mean, fmt::format("geometric:{:.12g}", mean));
}

DegreeDistribution DegreeDistribution::poisson(double mean, Degree cap) {
  if (!std::isfinite(mean) || mean <= 0.0) {
    throw InputError(fmt::format("poisson mean must be finite and > 0, got {}", mean));
  }
  std::vector<double> weights(static_cast<std::size_t>(cap) + 1);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double kd = static_cast<double>(k);
    weights[k] = std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
  }
  return truncated(std::move(weights), mean, fmt::format("poisson:{:.12g}", mean));
}

DegreeDistribution DegreeDistribution::from_pmf(std::vector<DegreeEntry> entries) {
  if (entries.empty()) throw InputError("pmf has no entries");
  CompensatedSum total;
  std::string origin = "pmf:";
  std::vector<Degree> seen;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (!std::isfinite(e.prob) || e.prob < 0.0) {
      throw InputError(fmt::format("pmf probability for degree {} is invalid: {}", e.degree, e.prob));
    }
    if (std::find(seen.begin(), seen.end(), e.degree) != seen.end()) {
      throw InputError(fmt::format("pmf lists degree {} twice", e.degree));
    }
    seen.push_back(e.degree);
    total.add(e.prob);
    origin += fmt::format("{}{}={:.12g}", i == 0 ? "" : ",", e.degree, e.prob);
  }
  if (std::abs(total.value() - 1.0) > 1e-9) {
    throw InputError(fmt::format("pmf sums to {:.12g}, expected 1", total.value()));
  }
  return build(std::move(entries), std::move(origin));
}

double DegreeDistribution::prob(Degree d) const {
  for (const auto& e : entries_) {
    if (e.degree == d) return e.prob;
  }
  return 0.0;
}

Degree DegreeDistribution::sample(RandomStream& stream) const {
  if (entries_.size() == 1) return entries_.front().degree;
  const double u = stream.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return entries_[static_cast<std::size_t>(it - cdf_.begin())].degree;
}

// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void bad_token(std::string_view spec, std::string_view token, std::string_view why) {
  throw InputError(fmt::format("invalid spec '{}': token '{}' {}", spec, token, why));
}

double parse_real(std::string_view spec, std::string_view token) {
  const auto slash = token.find('/');
  if (slash != std::string_view::npos) {
    const double num = parse_real(spec, token.substr(0, slash));
    const double den = parse_real(spec, token.substr(slash + 1));
    if (den == 0.0) bad_token(spec, token, "divides by zero");
    return num / den;
  }
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || token.empty()) bad_token(spec, token, "is not a number");
  return value;
}

Degree parse_count(std::string_view spec, std::string_view token) {
  unsigned long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty() ||
      value > 1'000'000) {
    bad_token(spec, token, "is not a nonnegative integer count");
  }
  return static_cast<Degree>(value);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

DegreeDistribution parse_degree_spec(std::string_view spec, std::uint32_t n) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) bad_token(spec, spec, "lacks a ':' separator");
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view body = spec.substr(colon + 1);

  if (kind == "fixed") return DegreeDistribution::fixed(parse_count(spec, body));
  if (kind == "twopoint") return DegreeDistribution::two_point(parse_real(spec, body));
  if (kind == "geometric" || kind == "poisson") {
    const auto parts = split(body, ',');
    if (parts.size() > 2) bad_token(spec, body, "has too many fields");
    const double mean = parse_real(spec, parts[0]);
    const Degree cap = parts.size() == 2 ? parse_count(spec, parts[1]) : default_degree_cap(n);
    return kind == "geometric" ? DegreeDistribution::geometric(mean, cap)
                               : DegreeDistribution::poisson(mean, cap);
  }
  if (kind == "pmf") {
    std::vector<DegreeEntry> entries;
    for (const auto item : split(body, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) bad_token(spec, item, "is not of the form d=p");
      entries.push_back({parse_count(spec, item.substr(0, eq)), parse_real(spec, item.substr(eq + 1))});
    }
    return DegreeDistribution::from_pmf(std::move(entries));
  }
  bad_token(spec, kind, "is not a degree family (fixed, twopoint, geometric, poisson, pmf)");
}

double parse_distance_spec(std::string_view spec) {
  if (spec == "harmonic") return 1.0;
  constexpr std::string_view prefix = "powerlaw:";
  if (spec.starts_with(prefix)) {
    const double beta = parse_real(spec, spec.substr(prefix.size()));
    if (!std::isfinite(beta) || beta < 0.0) bad_token(spec, spec.substr(prefix.size()), "must be >= 0");
    return beta;
  }
  bad_token(spec, spec, "is not a distance law (harmonic, powerlaw:BETA)");
}

}  // namespace hring
