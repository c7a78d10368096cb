#pragma once

#include <vector>

#include "semimatch/instance.hpp"
#include "semimatch/matching.hpp"

namespace semimatch {

/// One explicit edge of the pruned exploded graph: job -> slot `slot` of
/// `machine`, costing slot * weight.
struct ExplodedEdge {
  int job;
  int machine;
  int slot;
  Cost cost;
};

/// Keeps, for every job, only its |U| cheapest exploded edges (a per-job
/// heap over slot costs i * w_uv, with i <= deg(v)).
std::vector<ExplodedEdge> pruned_exploded_edges(const BipartiteInstance& instance);

/// Min-cost perfect assignment of jobs to slots on the explicit pruned graph,
/// by successive shortest paths with Dijkstra. Independent of the envelope
/// machinery; used as a cross-check.
SemiMatching solve_exploded_baseline(const BipartiteInstance& instance);

}  // namespace semimatch
