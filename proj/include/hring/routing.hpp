#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hring/model.hpp"
#include "hring/random.hpp"

namespace hring {

/// One sampled harmonic ring: the ring size plus each node's long-range
/// contact targets. Contacts are a multiset; duplicates are kept.
class RingRealization {
 public:
  /// Validates that every target differs from its source and lies in [0, n).
  RingRealization(std::uint32_t n, const std::vector<std::vector<Node>>& contacts);

  std::uint32_t n() const { return n_; }
  std::span<const Node> contacts(Node u) const {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }
  std::size_t total_contacts() const { return targets_.size(); }

  /// One line per node: `u: t1,t2,...`.
  void dump(std::ostream& out) const;

  /// Samples every node's contacts from `stream`, node 0 first.
  static RingRealization sample(std::uint32_t n, const DegreeDistribution& deg,
                                const DistanceDistribution& dist, RandomStream& stream,
                                double edge_limit);

 private:
  RingRealization() = default;

  std::uint32_t n_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Node> targets_;
};

inline constexpr double kDefaultEdgeLimit = 2.0e8;

/// Each node independently draws D_u from `deg`, then D_u i.i.d. distances
/// from `dist`. Throws ResourceError when n * mean degree exceeds `edge_limit`.
RingRealization sample_realization(std::uint32_t n, const DegreeDistribution& deg,
                                   const DistanceDistribution& dist, std::uint64_t seed,
                                   double edge_limit = kDefaultEdgeLimit);

/// Greedy choice among the ring successor and `contacts` of u, toward v.
Node greedy_next(std::uint32_t n, Node u, Node v, std::span<const Node> contacts);

/// Next hop from u toward v; u must differ from v.
Node greedy_step(const RingRealization& real, Node u, Node v);

struct RouteTrace {
  std::vector<Node> nodes;
  std::size_t hops() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

RouteTrace greedy_route(const RingRealization& real, Node u, Node v);

enum class McMode { lazy, full };

struct McOptions {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  std::uint32_t shards = 1;
  McMode mode = McMode::lazy;
  double edge_limit = kDefaultEdgeLimit;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  // Config echo.
  std::uint32_t n = 0;
  std::string degree;
  std::string distance;
  std::uint64_t seed = 0;
  std::uint32_t shards = 0;
  McMode mode = McMode::lazy;
};

/// Welford accumulator with exact pairwise merge.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double sample_variance() const;
  double std_error() const;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Monte Carlo estimate of the all-pairs average routing time. Each trial
/// draws an ordered pair uniformly (u = v included) and routes on a fresh
/// environment. Trials are split across shards, shard i using child stream i
/// of the master seed; results are bit-identical for equal (seed, shards).
McEstimate mc_estimate_average(std::uint32_t n, const DegreeDistribution& deg,
                               const DistanceDistribution& dist, const McOptions& options);

/// Monte Carlo estimate of T_r: source drawn uniformly, destination r ahead.
McEstimate mc_estimate_time_at(std::uint32_t n, const DegreeDistribution& deg,
                                const DistanceDistribution& dist, Distance r,
                                const McOptions& options);

std::string to_string(McMode mode);

}  // namespace hring
