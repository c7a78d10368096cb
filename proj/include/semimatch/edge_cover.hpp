#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "semimatch/instance.hpp"

namespace semimatch {

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A vertex without edges cannot be covered.
class InfeasibleCover : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected simple graph on vertices 0..n-1.
class SimpleGraph {
 public:
  /// Rejects self loops, duplicate edges and out-of-range ids.
  SimpleGraph(int num_vertices, std::vector<std::pair<int, int>> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::pair<int, int>& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  std::span<const int> incident(int v) const;
  int degree(int v) const { return offsets_[v + 1] - offsets_[v]; }
  int other(int id, int v) const {
    const auto& e = edge(id);
    return e.first == v ? e.second : e.first;
  }
  bool has_isolated_vertex() const;

 private:
  int n_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> offsets_;
  std::vector<int> incident_;
};

/// mate[v] is v's partner or -1.
struct GeneralMatching {
  std::vector<int> mate;
  int size = 0;
};

/// Maximum cardinality matching by Edmonds' blossom algorithm.
GeneralMatching maximum_matching_general(const SimpleGraph& graph);

struct EdgeCover {
  std::vector<int> edges;  // edge ids, ascending
  std::vector<int> degree;
};

EdgeCover make_cover(const SimpleGraph& graph, std::vector<int> edge_ids);
bool is_edge_cover(const SimpleGraph& graph, const EdgeCover& cover);
/// Sum over vertices of f(deg_F(v)) with f(k) = k(k+1)/2.
Cost balanced_cover_cost(const EdgeCover& cover);

/// Maximum matching plus one arbitrary edge per unmatched vertex. Throws
/// InfeasibleCover on isolated vertices. `matching_size`, if given,
/// receives the size of the underlying maximum matching.
EdgeCover minimum_edge_cover(const SimpleGraph& graph, int* matching_size = nullptr);

/// level[v] >= 1, or 0 for vertices left without a level.
struct Levelling {
  std::vector<int> level;
  int max_level = 0;
};

/// Level 1 holds the vertices of cover degree > 1. From an odd level the
/// next level takes unassigned cover partners; from an even level it takes
/// unassigned vertices joined by a non-cover edge, unless their cover
/// partner already sits on the level being built.
Levelling levelling(const SimpleGraph& graph, const EdgeCover& cover);

struct BalancedCover {
  EdgeCover cover;
  EdgeCover minimum_cover;
  int matching_size = 0;
  Levelling levels;
  /// Edge ids chosen by the semi-matching (even level -> odd level).
  std::vector<int> semi_matching_edges;
};

/// Optimal balanced edge cover: an optimal unweighted semi-matching from
/// even-level to odd-level vertices plus the minimum cover's edges among
/// unleveled vertices.
BalancedCover find_center(const SimpleGraph& graph);

}  // namespace semimatch
