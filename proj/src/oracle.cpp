// Brute-force ground truth for the dynamic programs in analysis.cpp. It shares
// nothing with them beyond the routing primitives: contact-distance weights are
// recomputed from the exponent and every pair is routed on a concrete graph.

#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "hring/analysis.hpp"
#include "hring/routing.hpp"

namespace hring {

namespace {

struct DegreeChoice {
  Degree degree;
  double prob;
};

std::vector<std::vector<DegreeChoice>> degree_choices(std::uint32_t n,
                                                      const DegreeAssignment& degrees) {
  std::vector<std::vector<DegreeChoice>> choices(n);
  if (const auto* fixed = std::get_if<std::vector<Degree>>(&degrees)) {
    if (fixed->size() != n) {
      throw InputError(fmt::format("{} per-node degrees given for a ring of {}", fixed->size(), n));
    }
    for (Node u = 0; u < n; ++u) choices[u].push_back({(*fixed)[u], 1.0});
  } else {
    const auto& deg = std::get<DegreeDistribution>(degrees);
    for (Node u = 0; u < n; ++u) {
      for (const auto& e : deg.entries()) choices[u].push_back({e.degree, e.prob});
    }
  }
  return choices;
}

std::vector<double> raw_weights(std::uint32_t n, double beta) {
  std::vector<double> w(n, 0.0);
  CompensatedSum z;
  for (Distance r = 1; r < n; ++r) {
    w[r] = beta == 1.0 ? 1.0 / r : std::pow(static_cast<double>(r), -beta);
    z.add(w[r]);
  }
  for (Distance r = 1; r < n; ++r) w[r] /= z.value();
  return w;
}

double all_pairs_average_hops(const RingRealization& real) {
  const std::uint32_t n = real.n();
  std::uint64_t total = 0;
  for (Node u = 0; u < n; ++u) {
    for (Node v = 0; v < n; ++v) total += greedy_route(real, u, v).hops();
  }
  return static_cast<double>(total) / (static_cast<double>(n) * n);
}

}  // namespace

double oracle_outcome_count(std::uint32_t n, const DegreeAssignment& degrees) {
  const auto choices = degree_choices(n, degrees);
  double count = 1.0;
  for (const auto& node : choices) {
    double per_node = 0.0;
    for (const auto& c : node) per_node += std::pow(static_cast<double>(n - 1), c.degree);
    count *= per_node;
  }
  return count;
}

double oracle_average_time(std::uint32_t n, const DistanceDistribution& dist,
                           const DegreeAssignment& degrees, double limit) {
  if (n < 2) throw InputError(fmt::format("ring size must be at least 2, got {}", n));
  if (dist.n() != n) {
    throw InputError(fmt::format("distance law built for n={} used with n={}", dist.n(), n));
  }
  const double count = oracle_outcome_count(n, degrees);
  if (!(count <= limit)) {
    throw ResourceError(
        fmt::format("oracle needs {:.12g} realizations, budget is {:.12g}", count, limit));
  }

  const auto choices = degree_choices(n, degrees);
  const auto weight = raw_weights(n, dist.beta());
  std::vector<std::vector<Node>> contacts(n);
  CompensatedSum expectation;

  // Depth-first over nodes; each node picks a degree, then an ordered tuple of
  // contact distances in {1, ..., n-1}^degree.
  std::function<void(Node, double)> visit = [&](Node u, double prob) {
    if (u == n) {
      expectation.add(prob * all_pairs_average_hops(RingRealization(n, contacts)));
      return;
    }
    for (const auto& choice : choices[u]) {
      std::vector<Distance> tuple(choice.degree, 1);
      while (true) {
        double p = prob * choice.prob;
        contacts[u].clear();
        for (const Distance r : tuple) {
          p *= weight[r];
          contacts[u].push_back((u + r) % n);
        }
        visit(u + 1, p);

        std::size_t pos = 0;
        while (pos < tuple.size() && tuple[pos] == n - 1) tuple[pos++] = 1;
        if (pos == tuple.size()) break;
        ++tuple[pos];
      }
    }
  };
  visit(0, 1.0);
  return expectation.value();
}

}  // namespace hring
