#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hring/random.hpp"

namespace hring {

using Node = std::uint32_t;
using Distance = std::uint32_t;
using Degree = std::uint32_t;

/// Invalid argument supplied to a library operation.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured resource limit (memory, outcome budget, size cap) would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Forward distance from u to v along the directed ring of n nodes.
Distance ring_distance(std::uint32_t n, Node u, Node v);

/// H_m = 1 + 1/2 + ... + 1/m, summed with Neumaier compensation.
double harmonic_number(std::uint32_t m);

/// Running sum with Neumaier compensation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Law of a single long-range contact's ring distance, P(r) proportional to
/// r^-beta on {1, ..., n-1}. beta = 1 is the harmonic law.
class DistanceDistribution {
 public:
  static DistanceDistribution make(std::uint32_t n, double beta);
  static DistanceDistribution harmonic(std::uint32_t n) { return make(n, 1.0); }

  std::uint32_t n() const { return n_; }
  double beta() const { return beta_; }
  bool strictly_decreasing() const { return beta_ > 0.0; }

  /// P(distance = r), r in [1, n-1].
  double weight(Distance r) const { return weight_[r]; }
  /// P(distance <= s), s in [0, n-1]; cdf(0) = 0 and cdf(n-1) = 1.
  double cdf(Distance s) const { return cdf_[s]; }
  std::span<const double> cdf_table() const { return cdf_; }

  /// Mass of distances in [a, b]. Empty intervals (a > b) have mass 0.
  double interval_mass(Distance a, Distance b) const;

  /// Inverse-CDF draw.
  Distance sample(RandomStream& stream) const;

  /// "harmonic" or "powerlaw:<beta>".
  std::string describe() const;

 private:
  DistanceDistribution() = default;

  std::uint32_t n_ = 0;
  double beta_ = 0.0;
  std::vector<double> weight_;  // index 0 unused
  std::vector<double> cdf_;
};

struct DegreeEntry {
  Degree degree;
  double prob;
};

/// Finite-support law of the number of long-range contacts per node.
class DegreeDistribution {
 public:
  static DegreeDistribution fixed(Degree count);
  /// Mass on floor(mean) and ceil(mean); a point mass when mean is integral.
  static DegreeDistribution two_point(double mean);
  /// Geometric on {0, 1, ...} with the requested mean, truncated at cap and renormalized.
  static DegreeDistribution geometric(double mean, Degree cap);
  /// Poisson with the requested mean, truncated at cap and renormalized.
  static DegreeDistribution poisson(double mean, Degree cap);
  /// Explicit pmf. Total must be 1 within 1e-9; it is then rescaled to sum to 1.
  static DegreeDistribution from_pmf(std::vector<DegreeEntry> entries);

  std::span<const DegreeEntry> entries() const { return entries_; }
  double mean() const { return mean_; }
  Degree cap() const { return cap_; }
  const std::string& origin() const { return origin_; }
  /// Set when truncation moved the mean by more than 10% of the request.
  const std::optional<std::string>& warning() const { return warning_; }

  bool is_point_mass() const { return entries_.size() == 1; }
  double prob(Degree d) const;

  Degree sample(RandomStream& stream) const;

 private:
  static DegreeDistribution build(std::vector<DegreeEntry> entries, std::string origin);
  static DegreeDistribution truncated(std::vector<double> weights, double requested_mean,
                                      std::string origin);

  std::vector<DegreeEntry> entries_;  // sorted by degree, positive probabilities
  std::vector<double> cdf_;
  double mean_ = 0.0;
  Degree cap_ = 0;
  std::string origin_;
  std::optional<std::string> warning_;
};

/// Default truncation cap for infinite-support degree families: ceil(8 ln n).
Degree default_degree_cap(std::uint32_t n);

/// Parses `fixed:L`, `twopoint:MEAN`, `geometric:MEAN[,CAP]`, `poisson:MEAN[,CAP]`
/// or `pmf:d1=p1,d2=p2,...`. Probabilities may be written as fractions (`2/3`).
/// `n` supplies the default cap. Throws InputError naming the offending token.
DegreeDistribution parse_degree_spec(std::string_view spec, std::uint32_t n);

/// Parses `harmonic` or `powerlaw:BETA` into the exponent.
double parse_distance_spec(std::string_view spec);

}  // namespace hring
