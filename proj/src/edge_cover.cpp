#include "semimatch/edge_cover.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "semimatch/cost_center_network.hpp"

namespace semimatch {

SimpleGraph::SimpleGraph(int num_vertices, std::vector<std::pair<int, int>> edges)
    : n_(num_vertices), edges_(std::move(edges)) {
  if (n_ < 0) throw GraphError("negative vertex count");
  std::set<std::pair<int, int>> seen;
  for (const auto& [a, b] : edges_) {
    if (a < 0 || a >= n_ || b < 0 || b >= n_) {
      throw GraphError("vertex id out of range in edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    }
    if (a == b) throw GraphError("self loop at vertex " + std::to_string(a));
    if (!seen.emplace(std::min(a, b), std::max(a, b)).second) {
      throw GraphError("duplicate edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    }
  }
  offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (const auto& [a, b] : edges_) {
    ++offsets_[static_cast<std::size_t>(a) + 1];
    ++offsets_[static_cast<std::size_t>(b) + 1];
  }
  for (int v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
  incident_.resize(edges_.size() * 2);
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (int id = 0; id < num_edges(); ++id) {
    incident_[fill[edges_[id].first]++] = id;
    incident_[fill[edges_[id].second]++] = id;
  }
}

std::span<const int> SimpleGraph::incident(int v) const {
  const auto b = static_cast<std::size_t>(offsets_[v]);
  const auto e = static_cast<std::size_t>(offsets_[v + 1]);
  return std::span<const int>(incident_).subspan(b, e - b);
}

bool SimpleGraph::has_isolated_vertex() const {
  for (int v = 0; v < n_; ++v) {
    if (degree(v) == 0) return true;
  }
  return false;
}

// Edmonds' algorithm: grow alternating trees from each free vertex,
// shrinking odd cycles into their base.
GeneralMatching maximum_matching_general(const SimpleGraph& graph) {
  const int n = graph.num_vertices();
  std::vector<int> mate(static_cast<std::size_t>(n), -1);
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::vector<int> base(static_cast<std::size_t>(n));
  std::vector<char> in_queue(static_cast<std::size_t>(n));
  std::vector<char> in_blossom(static_cast<std::size_t>(n));
  std::vector<int> queue;

  auto lca = [&](int a, int b) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    while (true) {
      a = base[a];
      seen[a] = 1;
      if (mate[a] < 0) break;
      a = parent[mate[a]];
    }
    while (true) {
      b = base[b];
      if (seen[b]) return b;
      b = parent[mate[b]];
    }
  };
  auto mark_path = [&](int v, int b, int child) {
    while (base[v] != b) {
      in_blossom[base[v]] = in_blossom[base[mate[v]]] = 1;
      parent[v] = child;
      child = mate[v];
      v = parent[mate[v]];
    }
  };
  auto find_path = [&](int root) -> int {
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(in_queue.begin(), in_queue.end(), 0);
    for (int v = 0; v < n; ++v) base[v] = v;
    queue.assign(1, root);
    in_queue[root] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      for (int id : graph.incident(v)) {
        const int to = graph.other(id, v);
        if (base[v] == base[to] || mate[v] == to) continue;
        if (to == root || (mate[to] >= 0 && parent[mate[to]] >= 0)) {
          const int b = lca(v, to);
          std::fill(in_blossom.begin(), in_blossom.end(), 0);
          mark_path(v, b, to);
          mark_path(to, b, v);
          for (int x = 0; x < n; ++x) {
            if (in_blossom[base[x]]) {
              base[x] = b;
              if (!in_queue[x]) {
                in_queue[x] = 1;
                queue.push_back(x);
              }
            }
          }
        } else if (parent[to] < 0) {
          parent[to] = v;
          if (mate[to] < 0) return to;
          in_queue[mate[to]] = 1;
          queue.push_back(mate[to]);
        }
      }
    }
    return -1;
  };

  GeneralMatching result;
  for (int root = 0; root < n; ++root) {
    if (mate[root] >= 0) continue;
    int v = find_path(root);
    if (v < 0) continue;
    ++result.size;
    while (v >= 0) {
      const int pv = parent[v];
      const int next = mate[pv];
      mate[v] = pv;
      mate[pv] = v;
      v = next;
    }
  }
  result.mate = std::move(mate);
  return result;
}

EdgeCover make_cover(const SimpleGraph& graph, std::vector<int> edge_ids) {
  std::sort(edge_ids.begin(), edge_ids.end());
  EdgeCover cover;
  cover.degree.assign(static_cast<std::size_t>(graph.num_vertices()), 0);
  for (int id : edge_ids) {
    ++cover.degree[static_cast<std::size_t>(graph.edge(id).first)];
    ++cover.degree[static_cast<std::size_t>(graph.edge(id).second)];
  }
  cover.edges = std::move(edge_ids);
  return cover;
}

bool is_edge_cover(const SimpleGraph& graph, const EdgeCover& cover) {
  if (static_cast<int>(cover.degree.size()) != graph.num_vertices()) return false;
  return std::all_of(cover.degree.begin(), cover.degree.end(), [](int d) { return d >= 1; });
}

Cost balanced_cover_cost(const EdgeCover& cover) {
  Cost total = 0;
  for (int d : cover.degree) total = checked_add(total, triangular(d));
  return total;
}

EdgeCover minimum_edge_cover(const SimpleGraph& graph, int* matching_size) {
  for (int v = 0; v < graph.num_vertices(); ++v) {
    if (graph.degree(v) == 0) throw InfeasibleCover("vertex " + std::to_string(v) + " has no incident edge");
  }
  const GeneralMatching matching = maximum_matching_general(graph);
  std::vector<int> ids;
  for (int v = 0; v < graph.num_vertices(); ++v) {
    const int m = matching.mate[static_cast<std::size_t>(v)];
    if (m > v) {
      for (int id : graph.incident(v)) {
        if (graph.other(id, v) == m) ids.push_back(id);
      }
    } else if (m < 0) {
      ids.push_back(graph.incident(v).front());
    }
  }
  if (matching_size) *matching_size = matching.size;
  return make_cover(graph, std::move(ids));
}

Levelling levelling(const SimpleGraph& graph, const EdgeCover& cover) {
  const int n = graph.num_vertices();
  std::vector<char> in_cover(static_cast<std::size_t>(graph.num_edges()), 0);
  for (int id : cover.edges) in_cover[static_cast<std::size_t>(id)] = 1;
  Levelling out;
  out.level.assign(static_cast<std::size_t>(n), 0);
  std::vector<int> current;
  for (int v = 0; v < n; ++v) {
    if (cover.degree[static_cast<std::size_t>(v)] > 1) {
      out.level[static_cast<std::size_t>(v)] = 1;
      current.push_back(v);
    }
  }
  for (int i = 1; !current.empty(); ++i) {
    out.max_level = i;
    std::vector<int> next;
    const bool odd = i % 2 == 1;
    for (int x : current) {
      for (int id : graph.incident(x)) {
        if (static_cast<bool>(in_cover[static_cast<std::size_t>(id)]) != odd) continue;
        const int v = graph.other(id, x);
        if (out.level[static_cast<std::size_t>(v)] != 0) continue;
        if (!odd) {
          bool partner_on_next = false;
          for (int f : graph.incident(v)) {
            if (in_cover[static_cast<std::size_t>(f)] &&
                out.level[static_cast<std::size_t>(graph.other(f, v))] == i + 1) {
              partner_on_next = true;
            }
          }
          if (partner_on_next) continue;
        }
        out.level[static_cast<std::size_t>(v)] = i + 1;
        next.push_back(v);
      }
    }
    current = std::move(next);
  }
  return out;
}

BalancedCover find_center(const SimpleGraph& graph) {
  BalancedCover out;
  out.minimum_cover = minimum_edge_cover(graph, &out.matching_size);
  out.levels = levelling(graph, out.minimum_cover);
  const auto& level = out.levels.level;

  // Jobs are even-level vertices, machines odd-level ones.
  const int n = graph.num_vertices();
  std::vector<int> local(static_cast<std::size_t>(n), -1);
  std::vector<int> jobs;
  std::vector<int> machines;
  for (int v = 0; v < n; ++v) {
    const int l = level[static_cast<std::size_t>(v)];
    if (l == 0) continue;
    auto& side = l % 2 == 0 ? jobs : machines;
    local[static_cast<std::size_t>(v)] = static_cast<int>(side.size());
    side.push_back(v);
  }
  std::vector<Edge> edges;
  std::vector<int> edge_of;
  for (int id = 0; id < graph.num_edges(); ++id) {
    auto [a, b] = graph.edge(id);
    const int la = level[static_cast<std::size_t>(a)];
    const int lb = level[static_cast<std::size_t>(b)];
    if (la == 0 || lb == 0 || (la + lb) % 2 == 0) continue;
    if (la % 2 == 1) std::swap(a, b);
    edges.push_back(Edge{local[static_cast<std::size_t>(a)], local[static_cast<std::size_t>(b)], 1});
    edge_of.push_back(id);
  }
  const BipartiteInstance instance(static_cast<int>(jobs.size()), static_cast<int>(machines.size()), edges);
  const SemiMatching m = solve_unweighted(instance);

  std::vector<int> chosen;
  for (int u = 0; u < instance.num_jobs(); ++u) {
    chosen.push_back(edge_of[static_cast<std::size_t>(*instance.find_edge(u, m.machine_of(u)))]);
  }
  out.semi_matching_edges = chosen;
  for (int id : out.minimum_cover.edges) {
    const auto [a, b] = graph.edge(id);
    if (level[static_cast<std::size_t>(a)] == 0 && level[static_cast<std::size_t>(b)] == 0) chosen.push_back(id);
  }
  out.cover = make_cover(graph, std::move(chosen));
  return out;
}

}  // namespace semimatch
