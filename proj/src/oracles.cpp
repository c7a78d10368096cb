#include "semimatch/oracles.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace semimatch {

std::int64_t enumeration_size(const BipartiteInstance& instance) {
  std::int64_t size = 1;
  for (int u = 0; u < instance.num_jobs(); ++u) {
    size *= instance.job_degree(u);
    if (size > kEnumerationLimit) return kEnumerationLimit + 1;
  }
  return size;
}

namespace {

// Visits every assignment in odometer order; `score` sees the current
// choice of edge id per job and returns its cost.
OracleSemiMatching enumerate(const BipartiteInstance& instance,
                             const std::function<Cost(std::span<const int>)>& score) {
  if (enumeration_size(instance) > kEnumerationLimit) {
    throw OracleTooLarge("instance has more than " + std::to_string(kEnumerationLimit) + " assignments");
  }
  const int n = instance.num_jobs();
  std::vector<int> digit(static_cast<std::size_t>(n), 0);
  std::vector<int> choice(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) choice[static_cast<std::size_t>(u)] = instance.job_edges(u)[0];

  OracleSemiMatching best;
  best.cost = std::numeric_limits<Cost>::max();
  std::vector<int> best_choice;
  while (true) {
    const Cost c = score(choice);
    if (c < best.cost) {
      best.cost = c;
      best_choice = choice;
    }
    int u = 0;
    for (; u < n; ++u) {
      auto& d = digit[static_cast<std::size_t>(u)];
      if (++d < instance.job_degree(u)) {
        choice[static_cast<std::size_t>(u)] = instance.job_edges(u)[static_cast<std::size_t>(d)];
        break;
      }
      d = 0;
      choice[static_cast<std::size_t>(u)] = instance.job_edges(u)[0];
    }
    if (u == n) break;
  }
  best.matching = SemiMatching(n);
  for (int u = 0; u < n; ++u) {
    best.matching.assign(u, instance.edge(best_choice[static_cast<std::size_t>(u)]).machine);
  }
  return best;
}

}  // namespace

OracleSemiMatching brute_force_semi_matching(const BipartiteInstance& instance) {
  std::vector<std::vector<Weight>> loads(static_cast<std::size_t>(instance.num_machines()));
  return enumerate(instance, [&](std::span<const int> choice) {
    for (auto& l : loads) l.clear();
    for (int id : choice) loads[static_cast<std::size_t>(instance.edge(id).machine)].push_back(instance.edge(id).weight);
    // Completion times: the k-th shortest job waits for the k-1 before it.
    Cost total = 0;
    for (auto& l : loads) {
      std::sort(l.begin(), l.end());
      Cost finish = 0;
      for (Weight w : l) {
        finish += w;
        total += finish;
      }
    }
    return total;
  });
}

OracleSemiMatching brute_force_convex(const BipartiteInstance& instance,
                                      std::span<const ConvexMachineCost> costs) {
  if (static_cast<int>(costs.size()) != instance.num_machines()) {
    throw std::invalid_argument("one cost function per machine required");
  }
  std::vector<int> load(static_cast<std::size_t>(instance.num_machines()));
  return enumerate(instance, [&](std::span<const int> choice) {
    std::fill(load.begin(), load.end(), 0);
    for (int id : choice) ++load[static_cast<std::size_t>(instance.edge(id).machine)];
    Cost total = 0;
    for (std::size_t v = 0; v < load.size(); ++v) total += costs[v](load[v]);
    return total;
  });
}

OracleCover brute_force_balanced_cover(const SimpleGraph& graph) {
  const int n = graph.num_vertices();
  const int m = graph.num_edges();
  if (m > kCoverEdgeLimit) throw OracleTooLarge("more than " + std::to_string(kCoverEdgeLimit) + " edges");
  std::vector<std::uint32_t> incident(static_cast<std::size_t>(n), 0);
  for (int id = 0; id < m; ++id) {
    incident[static_cast<std::size_t>(graph.edge(id).first)] |= 1u << id;
    incident[static_cast<std::size_t>(graph.edge(id).second)] |= 1u << id;
  }
  for (int v = 0; v < n; ++v) {
    if (incident[static_cast<std::size_t>(v)] == 0) throw InfeasibleCover("vertex " + std::to_string(v) + " is isolated");
  }
  Cost best = std::numeric_limits<Cost>::max();
  std::uint32_t best_mask = 0;
  const std::uint32_t end = m == 32 ? 0 : (1u << m);
  for (std::uint32_t mask = 0; mask < end; ++mask) {
    Cost total = 0;
    bool covers = true;
    for (int v = 0; v < n && covers; ++v) {
      const int k = std::popcount(mask & incident[static_cast<std::size_t>(v)]);
      covers = k > 0;
      total += static_cast<Cost>(k) * (k + 1) / 2;
    }
    if (covers && total < best) {
      best = total;
      best_mask = mask;
    }
  }
  std::vector<int> ids;
  for (int id = 0; id < m; ++id) {
    if (best_mask >> id & 1u) ids.push_back(id);
  }
  if (n == 0) best = 0;
  return OracleCover{best, make_cover(graph, std::move(ids))};
}

}  // namespace semimatch
