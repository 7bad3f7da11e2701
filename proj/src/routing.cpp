#include "hring/routing.hpp"

#include <cassert>
#include <cmath>
#include <ostream>
#include <thread>

#include <fmt/format.h>

namespace hring {

RingRealization::RingRealization(std::uint32_t n, const std::vector<std::vector<Node>>& contacts)
    : n_(n) {
  if (n < 2) throw InputError(fmt::format("ring size must be at least 2, got {}", n));
  if (contacts.size() != n) {
    throw InputError(fmt::format("contact lists for {} nodes, ring has {}", contacts.size(), n));
  }
  offsets_.reserve(n + 1);
  offsets_.push_back(0);
  for (Node u = 0; u < n; ++u) {
    for (const Node t : contacts[u]) {
      if (t >= n || t == u) {
        throw InputError(fmt::format("node {} has invalid contact {}", u, t));
      }
      targets_.push_back(t);
    }
    offsets_.push_back(targets_.size());
  }
}

void RingRealization::dump(std::ostream& out) const {
  for (Node u = 0; u < n_; ++u) {
    out << u << ':';
    const auto list = contacts(u);
    for (std::size_t i = 0; i < list.size(); ++i) out << (i == 0 ? " " : ",") << list[i];
    out << '\n';
  }
}

namespace {

void check_edge_budget(std::uint32_t n, const DegreeDistribution& deg, double edge_limit) {
  const double expected_edges = static_cast<double>(n) * deg.mean();
  if (expected_edges > edge_limit) {
    throw ResourceError(fmt::format("expected edge count {:.12g} exceeds limit {:.12g}",
                                    expected_edges, edge_limit));
  }
}

void check_compatible(std::uint32_t n, const DistanceDistribution& dist) {
  if (dist.n() != n) {
    throw InputError(fmt::format("distance law built for n={} used with n={}", dist.n(), n));
  }
}

}  // namespace

RingRealization RingRealization::sample(std::uint32_t n, const DegreeDistribution& deg,
                                        const DistanceDistribution& dist, RandomStream& stream,
                                        double edge_limit) {
  check_compatible(n, dist);
  check_edge_budget(n, deg, edge_limit);
  RingRealization real;
  real.n_ = n;
  real.offsets_.reserve(n + 1);
  real.targets_.reserve(static_cast<std::size_t>(std::ceil(n * deg.mean())));
  real.offsets_.push_back(0);
  for (Node u = 0; u < n; ++u) {
    const Degree d = deg.sample(stream);
    for (Degree j = 0; j < d; ++j) {
      real.targets_.push_back(static_cast<Node>((u + static_cast<std::uint64_t>(dist.sample(stream))) % n));
    }
    real.offsets_.push_back(real.targets_.size());
  }
  return real;
}

RingRealization sample_realization(std::uint32_t n, const DegreeDistribution& deg,
                                   const DistanceDistribution& dist, std::uint64_t seed,
                                   double edge_limit) {
  RandomStream stream(seed);
  return RingRealization::sample(n, deg, dist, stream, edge_limit);
}

Node greedy_next(std::uint32_t n, Node u, Node v, std::span<const Node> contacts) {
  Node best = (u + 1) % n;
  Distance best_dist = ring_distance(n, best, v);
  for (const Node t : contacts) {
    const Distance d = ring_distance(n, t, v);
    if (d < best_dist) {
      best = t;
      best_dist = d;
    }
  }
  return best;
}

Node greedy_step(const RingRealization& real, Node u, Node v) {
  if (u >= real.n() || v >= real.n()) {
    throw InputError(fmt::format("node id out of range: u={}, v={}, n={}", u, v, real.n()));
  }
  if (u == v) throw InputError(fmt::format("greedy step requested at the destination {}", v));
  return greedy_next(real.n(), u, v, real.contacts(u));
}

RouteTrace greedy_route(const RingRealization& real, Node u, Node v) {
  RouteTrace trace;
  trace.nodes.push_back(u);
  Node cur = u;
  while (cur != v) {
    const Node next = greedy_step(real, cur, v);
    assert(ring_distance(real.n(), next, v) < ring_distance(real.n(), cur, v));
    trace.nodes.push_back(next);
    cur = next;
  }
  return trace;
}

// ---------------------------------------------------------------------------

void RunningStats::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double total = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / total;
  m2_ += other.m2_ + delta * delta * na * nb / total;
  count_ += other.count_;
}

double RunningStats::sample_variance() const {
  return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double RunningStats::std_error() const {
  return count_ == 0 ? 0.0 : std::sqrt(sample_variance() / static_cast<double>(count_));
}

std::string to_string(McMode mode) { return mode == McMode::lazy ? "lazy" : "full"; }

namespace {

// Routes u -> v sampling each visited node's contacts on arrival. A greedy
// route never revisits a node, so this has the law of routing on a fully
// sampled realization.
std::uint64_t lazy_route_hops(std::uint32_t n, const DegreeDistribution& deg,
                              const DistanceDistribution& dist, Node u, Node v,
                              RandomStream& stream, std::vector<Node>& scratch) {
  std::uint64_t hops = 0;
  Node cur = u;
  while (cur != v) {
    const Degree d = deg.sample(stream);
    scratch.clear();
    for (Degree j = 0; j < d; ++j) {
      scratch.push_back(static_cast<Node>((cur + static_cast<std::uint64_t>(dist.sample(stream))) % n));
    }
    const Node next = greedy_next(n, cur, v, scratch);
    assert(ring_distance(n, next, v) < ring_distance(n, cur, v));
    cur = next;
    ++hops;
  }
  return hops;
}

template <typename PairFn>
McEstimate run_sharded(std::uint32_t n, const DegreeDistribution& deg,
                       const DistanceDistribution& dist, const McOptions& options,
                       PairFn draw_pair) {
  if (options.trials == 0) throw InputError("Monte Carlo needs at least one trial");
  if (options.shards == 0) throw InputError("Monte Carlo needs at least one shard");
  check_compatible(n, dist);
  if (options.mode == McMode::full) check_edge_budget(n, deg, options.edge_limit);

  const RandomStream master(options.seed);
  std::vector<RunningStats> partial(options.shards);
  const std::uint64_t base = options.trials / options.shards;
  const std::uint64_t extra = options.trials % options.shards;

  auto run_shard = [&](std::uint32_t shard) {
    RandomStream stream = master.child(shard);
    const std::uint64_t count = base + (shard < extra ? 1 : 0);
    RunningStats& stats = partial[shard];
    std::vector<Node> scratch;
    for (std::uint64_t t = 0; t < count; ++t) {
      const auto [u, v] = draw_pair(stream);
      std::uint64_t hops = 0;
      if (options.mode == McMode::lazy) {
        hops = lazy_route_hops(n, deg, dist, u, v, stream, scratch);
      } else {
        const auto real = RingRealization::sample(n, deg, dist, stream, options.edge_limit);
        hops = greedy_route(real, u, v).hops();
      }
      stats.add(static_cast<double>(hops));
    }
  };

  if (options.shards == 1) {
    run_shard(0);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(options.shards);
    for (std::uint32_t s = 0; s < options.shards; ++s) workers.emplace_back(run_shard, s);
  }

  RunningStats total;
  for (const auto& p : partial) total.merge(p);

  McEstimate est;
  est.mean = total.mean();
  est.std_error = total.std_error();
  est.trials = total.count();
  est.n = n;
  est.degree = deg.origin();
  est.distance = dist.describe();
  est.seed = options.seed;
  est.shards = options.shards;
  est.mode = options.mode;
  return est;
}

}  // namespace

McEstimate mc_estimate_average(std::uint32_t n, const DegreeDistribution& deg,
                               const DistanceDistribution& dist, const McOptions& options) {
  return run_sharded(n, deg, dist, options, [n](RandomStream& s) {
    const auto u = static_cast<Node>(s.below(n));
    const auto v = static_cast<Node>(s.below(n));
    return std::pair{u, v};
  });
}

McEstimate mc_estimate_time_at(std::uint32_t n, const DegreeDistribution& deg,
                               const DistanceDistribution& dist, Distance r,
                               const McOptions& options) {
  if (r >= n) throw InputError(fmt::format("distance {} outside [0, {}]", r, n - 1));
  return run_sharded(n, deg, dist, options, [n, r](RandomStream& s) {
    const auto u = static_cast<Node>(s.below(n));
    return std::pair{u, static_cast<Node>((u + static_cast<std::uint64_t>(r)) % n)};
  });
}

}  // namespace hring
