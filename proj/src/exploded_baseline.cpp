#include "semimatch/exploded_baseline.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace semimatch {

std::vector<ExplodedEdge> pruned_exploded_edges(const BipartiteInstance& instance) {
  const int n = instance.num_jobs();
  std::vector<ExplodedEdge> out;
  using Item = std::tuple<Cost, int, int>;  // cost, machine, slot
  for (int u = 0; u < n; ++u) {
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (int id : instance.job_edges(u)) {
      const Edge& e = instance.edge(id);
      heap.emplace(e.weight, e.machine, 1);
    }
    for (int taken = 0; taken < n && !heap.empty(); ++taken) {
      const auto [cost, v, slot] = heap.top();
      heap.pop();
      out.push_back(ExplodedEdge{u, v, slot, cost});
      if (slot < instance.machine_degree(v)) {
        const Weight w = instance.edge(*instance.find_edge(u, v)).weight;
        heap.emplace(checked_mul(slot + 1, w), v, slot + 1);
      }
    }
  }
  return out;
}

SemiMatching solve_exploded_baseline(const BipartiteInstance& instance) {
  const int n = instance.num_jobs();
  const auto edges = pruned_exploded_edges(instance);

  std::map<std::pair<int, int>, int> slot_index;
  std::vector<std::pair<int, int>> slots;
  for (const auto& e : edges) {
    if (slot_index.emplace(std::make_pair(e.machine, e.slot), static_cast<int>(slots.size())).second) {
      slots.emplace_back(e.machine, e.slot);
    }
  }
  const int s_count = static_cast<int>(slots.size());

  // Flow network: source, jobs, slots, sink; unit capacities.
  const int source = 0;
  const int sink = 1 + n + s_count;
  const int nodes = sink + 1;
  struct Arc {
    int to;
    int cap;
    Cost cost;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out(static_cast<std::size_t>(nodes));
  auto add = [&](int a, int b, Cost cost) {
    out[static_cast<std::size_t>(a)].push_back(static_cast<int>(arcs.size()));
    arcs.push_back(Arc{b, 1, cost});
    out[static_cast<std::size_t>(b)].push_back(static_cast<int>(arcs.size()));
    arcs.push_back(Arc{a, 0, -cost});
  };
  for (int u = 0; u < n; ++u) add(source, 1 + u, 0);
  std::vector<int> edge_arc;
  for (const auto& e : edges) {
    edge_arc.push_back(static_cast<int>(arcs.size()));
    add(1 + e.job, 1 + n + slot_index.at({e.machine, e.slot}), e.cost);
  }
  for (int s = 0; s < s_count; ++s) add(1 + n + s, sink, 0);

  constexpr Cost kInf = std::numeric_limits<Cost>::max();
  std::vector<Cost> potential(static_cast<std::size_t>(nodes), 0);
  std::vector<Cost> dist(static_cast<std::size_t>(nodes));
  std::vector<int> parent_arc(static_cast<std::size_t>(nodes));
  for (int round = 0; round < n; ++round) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    using Item = std::pair<Cost, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0;
    heap.emplace(0, source);
    while (!heap.empty()) {
      const auto [d, x] = heap.top();
      heap.pop();
      if (d != dist[static_cast<std::size_t>(x)]) continue;
      for (int a : out[static_cast<std::size_t>(x)]) {
        const Arc& arc = arcs[static_cast<std::size_t>(a)];
        if (arc.cap == 0) continue;
        const Cost reduced = arc.cost + potential[static_cast<std::size_t>(x)] - potential[static_cast<std::size_t>(arc.to)];
        if (reduced < 0) throw std::logic_error("negative reduced cost in baseline");
        if (d + reduced < dist[static_cast<std::size_t>(arc.to)]) {
          dist[static_cast<std::size_t>(arc.to)] = d + reduced;
          parent_arc[static_cast<std::size_t>(arc.to)] = a;
          heap.emplace(d + reduced, arc.to);
        }
      }
    }
    if (dist[sink] == kInf) throw std::logic_error("pruned exploded graph admits no assignment");
    const Cost limit = dist[sink];
    for (int x = 0; x < nodes; ++x) potential[static_cast<std::size_t>(x)] += std::min(dist[static_cast<std::size_t>(x)], limit);
    for (int x = sink; x != source;) {
      const int a = parent_arc[static_cast<std::size_t>(x)];
      --arcs[static_cast<std::size_t>(a)].cap;
      ++arcs[static_cast<std::size_t>(a ^ 1)].cap;
      x = arcs[static_cast<std::size_t>(a ^ 1)].to;
    }
  }

  SemiMatching matching(n);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (arcs[static_cast<std::size_t>(edge_arc[k])].cap == 0) matching.assign(edges[k].job, edges[k].machine);
  }
  return matching;
}

}  // namespace semimatch
