#include "semimatch/generators.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>
#include <vector>

namespace semimatch {

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  while (true) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

bool bernoulli(Rng& rng, double p) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return u < p;
}

namespace {

void check_sizes(int num_jobs, int num_machines, Weight max_weight) {
  if (num_jobs <= 0 || num_machines <= 0) throw std::invalid_argument("job and machine counts must be positive");
  if (max_weight < 1 || max_weight >= kWeightLimit) {
    throw std::invalid_argument("max_weight must lie in [1, 2^31)");
  }
}

Weight draw_weight(Rng& rng, Weight max_weight) {
  return 1 + static_cast<Weight>(uniform_below(rng, static_cast<std::uint64_t>(max_weight)));
}

}  // namespace

BipartiteInstance gen_random(int num_jobs, int num_machines, double edge_prob, Weight max_weight,
                             std::uint64_t seed) {
  check_sizes(num_jobs, num_machines, max_weight);
  if (!(edge_prob > 0.0 && edge_prob <= 1.0)) throw std::invalid_argument("edge_prob must lie in (0, 1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (int u = 0; u < num_jobs; ++u) {
    const std::size_t before = edges.size();
    for (int v = 0; v < num_machines; ++v) {
      if (bernoulli(rng, edge_prob)) edges.push_back(Edge{u, v, draw_weight(rng, max_weight)});
    }
    if (edges.size() == before) {
      const int v = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(num_machines)));
      edges.push_back(Edge{u, v, draw_weight(rng, max_weight)});
    }
  }
  return BipartiteInstance(num_jobs, num_machines, std::move(edges));
}

BipartiteInstance gen_random_edges(int num_jobs, int num_machines, std::int64_t num_edges,
                                   Weight max_weight, std::uint64_t seed) {
  check_sizes(num_jobs, num_machines, max_weight);
  const std::int64_t total = static_cast<std::int64_t>(num_jobs) * num_machines;
  if (num_edges < num_jobs || num_edges > total) {
    throw std::invalid_argument("num_edges must lie in [num_jobs, num_jobs * num_machines]");
  }
  Rng rng(seed);
  std::vector<std::int64_t> keys;
  std::unordered_set<std::int64_t> chosen;
  for (int u = 0; u < num_jobs; ++u) {
    const auto v = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(num_machines)));
    chosen.insert(static_cast<std::int64_t>(u) * num_machines + v);
  }
  if (num_edges - num_jobs <= (total - num_jobs) / 2) {
    while (static_cast<std::int64_t>(chosen.size()) < num_edges) {
      chosen.insert(static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(total))));
    }
    keys.assign(chosen.begin(), chosen.end());
  } else {
    // Dense: pick the pairs to leave out instead.
    std::unordered_set<std::int64_t> excluded;
    while (static_cast<std::int64_t>(excluded.size()) < total - num_edges) {
      const auto k = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(total)));
      if (!chosen.contains(k)) excluded.insert(k);
    }
    for (std::int64_t k = 0; k < total; ++k) {
      if (!excluded.contains(k)) keys.push_back(k);
    }
  }
  std::sort(keys.begin(), keys.end());
  std::vector<Edge> edges;
  edges.reserve(keys.size());
  for (std::int64_t k : keys) {
    edges.push_back(Edge{static_cast<int>(k / num_machines), static_cast<int>(k % num_machines),
                         draw_weight(rng, max_weight)});
  }
  return BipartiteInstance(num_jobs, num_machines, std::move(edges));
}

SimpleGraph gen_random_graph(int num_vertices, double edge_prob, std::uint64_t seed, bool connected) {
  if (num_vertices <= 0) throw std::invalid_argument("vertex count must be positive");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw std::invalid_argument("edge_prob must lie in [0, 1]");
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(num_vertices);
  std::vector<char> adjacent(n * n, 0);
  std::vector<std::pair<int, int>> edges;
  auto add = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    if (adjacent[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)]) return;
    adjacent[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] = 1;
    edges.emplace_back(a, b);
  };
  if (connected) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);
    for (std::size_t i = 1; i < n; ++i) add(order[i], order[uniform_below(rng, i)]);
  }
  for (int a = 0; a < num_vertices; ++a) {
    for (int b = a + 1; b < num_vertices; ++b) {
      if (bernoulli(rng, edge_prob)) add(a, b);
    }
  }
  std::sort(edges.begin(), edges.end());
  return SimpleGraph(num_vertices, std::move(edges));
}

}  // namespace semimatch
