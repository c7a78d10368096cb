#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "semimatch/instance.hpp"
#include "semimatch/matching.hpp"

namespace semimatch {

/// Observability for CancelAll: one entry per Cancel call.
struct CancelCounters {
  /// Blocking-flow rounds of each Cancel call, counting the final round
  /// that finds no source-sink path.
  std::vector<int> rounds_per_cancel;
  /// Super-source to super-sink distance of every successful round.
  std::vector<std::vector<int>> layer_distances;
  int max_depth = 0;
  std::int64_t arcs_scanned = 0;
  std::int64_t augmentations = 0;

  int max_rounds() const;
  /// True when every Cancel call saw strictly increasing layer distances.
  bool distances_increasing() const;
};

/// Min-cost-flow reduction of a semi-matching instance. Every machine v is
/// linked to the cost centers of its marginal costs; center c has cost
/// center_cost(c) and the centers are sorted by cost. Node layout: jobs,
/// machines, centers, then source and sink.
class CostCenterNetwork {
 public:
  /// Unit-weight network: centers c_1..c_Delta, edge v -> c_i has cost i.
  static CostCenterNetwork build(const BipartiteInstance& instance);
  /// Convex network: edge costs are the marginals f_v(i) - f_v(i-1); equal
  /// marginals of one machine share a capacitated edge.
  static CostCenterNetwork build(const BipartiteInstance& instance,
                                 std::span<const ConvexMachineCost> costs);

  int num_jobs() const { return num_jobs_; }
  int num_machines() const { return num_machines_; }
  int num_centers() const { return static_cast<int>(center_cost_.size()); }
  int num_nodes() const { return num_jobs_ + num_machines_ + num_centers() + 2; }
  int num_arcs() const { return static_cast<int>(head_.size()); }

  int job_node(int u) const { return u; }
  int machine_node(int v) const { return num_jobs_ + v; }
  int center_node(int c) const { return num_jobs_ + num_machines_ + c; }
  int source() const { return num_nodes() - 2; }
  int sink() const { return num_nodes() - 1; }
  bool is_center_node(int x) const { return x >= center_node(0) && x < source(); }
  int center_of_node(int x) const { return x - center_node(0); }

  Cost center_cost(int c) const { return center_cost_[static_cast<std::size_t>(c)]; }

  /// Center index of each center edge of the machine, ascending.
  std::vector<int> machine_centers(int v) const;
  /// Per-unit costs of the machine's center edges, capacity expanded.
  std::vector<Cost> center_edge_costs(int v) const;

  // Arc storage: arc a and a ^ 1 form a forward/reverse pair.
  int head(int arc) const { return head_[static_cast<std::size_t>(arc)]; }
  int capacity(int arc) const { return cap_[static_cast<std::size_t>(arc)]; }
  Cost cost(int arc) const { return cost_[static_cast<std::size_t>(arc)]; }
  std::span<const int> out_arcs(int node) const;
  std::span<const int> machine_center_arcs(int v) const;
  int center_sink_arc(int c) const { return center_sink_arc_[static_cast<std::size_t>(c)]; }
  int source_arc(int u) const { return source_arc_[static_cast<std::size_t>(u)]; }
  std::span<const int> job_arcs(int u) const;
  /// Position of a forward machine->center arc in its machine's list, else -1.
  int center_arc_position(int arc) const { return center_pos_[static_cast<std::size_t>(arc)]; }

 private:
  CostCenterNetwork() = default;
  int add_arc(int from, int to, int cap, Cost cost);
  void finalize();

  int num_jobs_ = 0;
  int num_machines_ = 0;
  std::vector<Cost> center_cost_;
  std::vector<int> tail_;
  std::vector<int> head_;
  std::vector<int> cap_;
  std::vector<Cost> cost_;
  std::vector<int> center_pos_;
  std::vector<int> node_offsets_;
  std::vector<int> node_arcs_;
  std::vector<int> machine_arc_offsets_;
  std::vector<int> machine_arcs_;
  std::vector<int> job_arc_offsets_;
  std::vector<int> job_arcs_list_;
  std::vector<int> center_sink_arc_;
  std::vector<int> source_arc_;
};

/// Flow on a CostCenterNetwork, stored as residual capacities. first_open
/// tracks, per machine, the first center edge that is not full; the used
/// center edges always form a prefix ending at first_open.
struct NetworkFlow {
  std::vector<int> residual;
  std::vector<int> first_open;

  int flow(const CostCenterNetwork& net, int arc) const {
    return net.capacity(arc) - residual[static_cast<std::size_t>(arc)];
  }
};

NetworkFlow seed_flow(const CostCenterNetwork& net, const SemiMatching& matching);

Cost flow_cost(const CostCenterNetwork& net, const NetworkFlow& flow);
int flow_value(const CostCenterNetwork& net, const NetworkFlow& flow);
/// Conservation at internal nodes and 0 <= flow <= capacity on every arc.
bool flow_is_feasible(const CostCenterNetwork& net, const NetworkFlow& flow);

/// Pushes a maximum flow from `sources` to `sinks` (center indices) through
/// the residual graph by repeated shortest-layer blocking flows. Every source
/// index must exceed every sink index.
void cancel(const CostCenterNetwork& net, NetworkFlow& flow, std::span<const int> sources,
            std::span<const int> sinks, CancelCounters* counters = nullptr);

/// Membership flags (indexed by node) of everything reachable from the seed
/// centers in the residual graph. Source and sink are never included.
std::vector<char> reachable_partition(const CostCenterNetwork& net, const NetworkFlow& flow,
                                      std::span<const int> seed);

/// Divide-and-conquer cancellation of every cost-reducing path.
void cancel_all(const CostCenterNetwork& net, NetworkFlow& flow, CancelCounters* counters = nullptr);

SemiMatching extract_semi_matching(const CostCenterNetwork& net, const NetworkFlow& flow);

/// Least-loaded greedy assignment; the starting point of the solvers.
SemiMatching greedy_semi_matching(const BipartiteInstance& instance);

/// Requires unit weights.
SemiMatching solve_unweighted(const BipartiteInstance& instance, CancelCounters* counters = nullptr);
/// Minimizes sum_v f_v(deg_M(v)); edge weights are ignored.
SemiMatching solve_convex(const BipartiteInstance& instance, std::span<const ConvexMachineCost> costs,
                          CancelCounters* counters = nullptr);

}  // namespace semimatch
