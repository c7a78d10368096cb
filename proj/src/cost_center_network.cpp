#include "semimatch/cost_center_network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace semimatch {

int CancelCounters::max_rounds() const {
  int best = 0;
  for (int r : rounds_per_cancel) best = std::max(best, r);
  return best;
}

bool CancelCounters::distances_increasing() const {
  for (const auto& ds : layer_distances) {
    for (std::size_t i = 1; i < ds.size(); ++i) {
      if (ds[i] <= ds[i - 1]) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Construction

int CostCenterNetwork::add_arc(int from, int to, int cap, Cost cost) {
  const int id = static_cast<int>(head_.size());
  tail_.push_back(from);
  head_.push_back(to);
  cap_.push_back(cap);
  cost_.push_back(cost);
  center_pos_.push_back(-1);
  tail_.push_back(to);
  head_.push_back(from);
  cap_.push_back(0);
  cost_.push_back(-cost);
  center_pos_.push_back(-1);
  return id;
}

void CostCenterNetwork::finalize() {
  const int nodes = num_nodes();
  node_offsets_.assign(static_cast<std::size_t>(nodes) + 1, 0);
  for (int t : tail_) ++node_offsets_[static_cast<std::size_t>(t) + 1];
  for (int x = 0; x < nodes; ++x) node_offsets_[x + 1] += node_offsets_[x];
  node_arcs_.resize(head_.size());
  std::vector<int> fill(node_offsets_.begin(), node_offsets_.end() - 1);
  // Arcs were created in an order that leaves each machine's center arcs
  // ascending by center index.
  for (int a = 0; a < num_arcs(); ++a) node_arcs_[fill[tail_[a]]++] = a;
}

CostCenterNetwork CostCenterNetwork::build(const BipartiteInstance& instance) {
  const int delta = instance.max_machine_degree();
  std::vector<ConvexMachineCost> unit;
  unit.reserve(static_cast<std::size_t>(instance.num_machines()));
  for (int v = 0; v < instance.num_machines(); ++v) {
    unit.push_back(ConvexMachineCost::from_function(triangular, instance.machine_degree(v)));
  }
  CostCenterNetwork net = build(instance, unit);
  if (net.num_centers() != delta) throw std::logic_error("unit network must have Delta centers");
  return net;
}

CostCenterNetwork CostCenterNetwork::build(const BipartiteInstance& instance,
                                           std::span<const ConvexMachineCost> costs) {
  if (static_cast<int>(costs.size()) != instance.num_machines()) {
    throw std::invalid_argument("expected one convex cost per machine");
  }
  CostCenterNetwork net;
  net.num_jobs_ = instance.num_jobs();
  net.num_machines_ = instance.num_machines();

  // Runs of equal marginals per machine: (marginal, multiplicity).
  std::vector<std::vector<std::pair<Cost, int>>> runs(static_cast<std::size_t>(instance.num_machines()));
  std::vector<Cost> values;
  for (int v = 0; v < instance.num_machines(); ++v) {
    const auto& f = costs[static_cast<std::size_t>(v)];
    const int deg = instance.machine_degree(v);
    if (f.max_degree() < deg) {
      throw std::invalid_argument("convex cost of machine " + std::to_string(v) +
                                  " is not tabulated up to its degree");
    }
    auto& r = runs[static_cast<std::size_t>(v)];
    for (int k = 1; k <= deg; ++k) {
      const Cost m = f.marginal(k);
      if (!r.empty() && r.back().first == m) {
        ++r.back().second;
      } else {
        r.emplace_back(m, 1);
        values.push_back(m);
      }
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  net.center_cost_ = values;

  const int n = net.num_jobs_;
  net.source_arc_.resize(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) net.source_arc_[u] = net.add_arc(net.source(), net.job_node(u), 1, 0);

  net.job_arc_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int u = 0; u < n; ++u) net.job_arc_offsets_[u + 1] = net.job_arc_offsets_[u] + instance.job_degree(u);
  net.job_arcs_list_.resize(static_cast<std::size_t>(instance.num_edges()));
  for (int u = 0; u < n; ++u) {
    int pos = net.job_arc_offsets_[u];
    for (int id : instance.job_edges(u)) {
      net.job_arcs_list_[pos++] =
          net.add_arc(net.job_node(u), net.machine_node(instance.edge(id).machine), 1, 0);
    }
  }

  net.machine_arc_offsets_.assign(static_cast<std::size_t>(net.num_machines_) + 1, 0);
  for (int v = 0; v < net.num_machines_; ++v) {
    const auto& r = runs[static_cast<std::size_t>(v)];
    net.machine_arc_offsets_[v + 1] = net.machine_arc_offsets_[v] + static_cast<int>(r.size());
    int position = 0;
    for (const auto& [marginal, mult] : r) {
      const int c = static_cast<int>(std::lower_bound(values.begin(), values.end(), marginal) - values.begin());
      const int a = net.add_arc(net.machine_node(v), net.center_node(c), mult, marginal);
      net.center_pos_[a] = position++;
      net.machine_arcs_.push_back(a);
    }
  }

  net.center_sink_arc_.resize(values.size());
  for (int c = 0; c < net.num_centers(); ++c) {
    net.center_sink_arc_[c] = net.add_arc(net.center_node(c), net.sink(), std::max(n, 1), 0);
  }
  net.finalize();
  return net;
}

std::span<const int> CostCenterNetwork::out_arcs(int node) const {
  const auto b = static_cast<std::size_t>(node_offsets_[node]);
  const auto e = static_cast<std::size_t>(node_offsets_[node + 1]);
  return std::span<const int>(node_arcs_).subspan(b, e - b);
}

std::span<const int> CostCenterNetwork::machine_center_arcs(int v) const {
  const auto b = static_cast<std::size_t>(machine_arc_offsets_[v]);
  const auto e = static_cast<std::size_t>(machine_arc_offsets_[v + 1]);
  return std::span<const int>(machine_arcs_).subspan(b, e - b);
}

std::span<const int> CostCenterNetwork::job_arcs(int u) const {
  const auto b = static_cast<std::size_t>(job_arc_offsets_[u]);
  const auto e = static_cast<std::size_t>(job_arc_offsets_[u + 1]);
  return std::span<const int>(job_arcs_list_).subspan(b, e - b);
}

std::vector<int> CostCenterNetwork::machine_centers(int v) const {
  std::vector<int> out;
  for (int a : machine_center_arcs(v)) out.push_back(center_of_node(head(a)));
  return out;
}

std::vector<Cost> CostCenterNetwork::center_edge_costs(int v) const {
  std::vector<Cost> out;
  for (int a : machine_center_arcs(v)) out.insert(out.end(), static_cast<std::size_t>(capacity(a)), cost(a));
  return out;
}

// ---------------------------------------------------------------------------
// Flow bookkeeping

namespace {

void push_unit(NetworkFlow& flow, int arc) {
  --flow.residual[static_cast<std::size_t>(arc)];
  ++flow.residual[static_cast<std::size_t>(arc ^ 1)];
}

// Moves one unit across a machine->center arc (forward) or back (reverse),
// enforcing that center usage stays a prefix of the machine's edges.
void shift_center_unit(const CostCenterNetwork& net, NetworkFlow& flow, int machine, int arc) {
  const int forward = arc & ~1;
  const int pos = net.center_arc_position(forward);
  auto& open = flow.first_open[static_cast<std::size_t>(machine)];
  const auto arcs = net.machine_center_arcs(machine);
  if (arc == forward) {
    if (pos != open) throw std::logic_error("augmentation skipped a cheaper center edge");
    push_unit(flow, arc);
    if (flow.residual[static_cast<std::size_t>(arc)] == 0) ++open;
  } else {
    const bool partial = open < static_cast<int>(arcs.size()) && flow.flow(net, arcs[open]) > 0;
    const int last_used = partial ? open : open - 1;
    if (pos != last_used) throw std::logic_error("augmentation released a non-top center edge");
    push_unit(flow, arc);
    open = pos;
  }
}

}  // namespace

NetworkFlow seed_flow(const CostCenterNetwork& net, const SemiMatching& matching) {
  if (matching.num_jobs() != net.num_jobs()) throw InvalidMatching("matching size does not match network");
  NetworkFlow flow;
  flow.residual.resize(static_cast<std::size_t>(net.num_arcs()));
  for (int a = 0; a < net.num_arcs(); ++a) flow.residual[a] = net.capacity(a);
  flow.first_open.assign(static_cast<std::size_t>(net.num_machines()), 0);
  for (int u = 0; u < net.num_jobs(); ++u) {
    const int target = net.machine_node(matching.machine_of(u));
    int job_arc = -1;
    for (int a : net.job_arcs(u)) {
      if (net.head(a) == target) job_arc = a;
    }
    if (job_arc < 0) throw InvalidMatching("job " + std::to_string(u) + " assigned along a non-edge");
    const int v = matching.machine_of(u);
    const auto arcs = net.machine_center_arcs(v);
    const int open = flow.first_open[static_cast<std::size_t>(v)];
    if (open >= static_cast<int>(arcs.size())) throw std::logic_error("machine over capacity");
    const int center_arc = arcs[open];
    push_unit(flow, net.source_arc(u));
    push_unit(flow, job_arc);
    shift_center_unit(net, flow, v, center_arc);
    push_unit(flow, net.center_sink_arc(net.center_of_node(net.head(center_arc))));
  }
  return flow;
}

Cost flow_cost(const CostCenterNetwork& net, const NetworkFlow& flow) {
  Cost total = 0;
  for (int v = 0; v < net.num_machines(); ++v) {
    for (int a : net.machine_center_arcs(v)) {
      total = checked_add(total, checked_mul(flow.flow(net, a), net.cost(a)));
    }
  }
  return total;
}

int flow_value(const CostCenterNetwork& net, const NetworkFlow& flow) {
  int value = 0;
  for (int u = 0; u < net.num_jobs(); ++u) value += flow.flow(net, net.source_arc(u));
  return value;
}

bool flow_is_feasible(const CostCenterNetwork& net, const NetworkFlow& flow) {
  std::vector<long long> balance(static_cast<std::size_t>(net.num_nodes()), 0);
  for (int a = 0; a < net.num_arcs(); a += 2) {
    const int f = flow.flow(net, a);
    if (f < 0 || f > net.capacity(a)) return false;
    if (flow.residual[static_cast<std::size_t>(a ^ 1)] != f) return false;
    balance[static_cast<std::size_t>(net.head(a ^ 1))] -= f;
    balance[static_cast<std::size_t>(net.head(a))] += f;
  }
  for (int x = 0; x < net.num_nodes(); ++x) {
    if (x == net.source() || x == net.sink()) continue;
    if (balance[static_cast<std::size_t>(x)] != 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Cancel and CancelAll

namespace {

/// Blocking-flow machinery restricted to one region of nodes. Region ids
/// implement the subproblem masks of CancelAll without copying the graph.
class Canceller {
 public:
  Canceller(const CostCenterNetwork& net, NetworkFlow& flow, CancelCounters* counters)
      : net_(net),
        flow_(flow),
        counters_(counters),
        region_(static_cast<std::size_t>(net.num_nodes()), 0),
        level_(static_cast<std::size_t>(net.num_nodes()), -1),
        current_(static_cast<std::size_t>(net.num_nodes()), 0),
        sink_flag_(static_cast<std::size_t>(net.num_nodes()), 0) {
    region_[static_cast<std::size_t>(net.source())] = -1;
    region_[static_cast<std::size_t>(net.sink())] = -1;
  }

  void assign_region(std::span<const int> nodes, int id) {
    for (int x : nodes) region_[static_cast<std::size_t>(x)] = id;
  }

  /// Max flow from source centers to sink centers inside `region`.
  void cancel(int region, std::span<const int> nodes, std::vector<int> sources, std::span<const int> sinks) {
    std::sort(sources.begin(), sources.end(), std::greater<>());
    for (int c : sinks) sink_flag_[static_cast<std::size_t>(net_.center_node(c))] = 1;
    int rounds = 0;
    std::vector<int> distances;
    while (true) {
      ++rounds;
      const int sink_level = build_levels(region, nodes, sources);
      if (sink_level < 0) break;
      distances.push_back(sink_level + 1);
      blocking_flow(region, nodes, sources, sink_level);
    }
    for (int c : sinks) sink_flag_[static_cast<std::size_t>(net_.center_node(c))] = 0;
    if (counters_) {
      counters_->rounds_per_cancel.push_back(rounds);
      counters_->layer_distances.push_back(std::move(distances));
    }
  }

  std::vector<char> reachable(int region, std::span<const int> seed_nodes) {
    std::vector<char> mark(static_cast<std::size_t>(net_.num_nodes()), 0);
    std::vector<int> queue;
    for (int x : seed_nodes) {
      if (region_[static_cast<std::size_t>(x)] == region && !mark[static_cast<std::size_t>(x)]) {
        mark[static_cast<std::size_t>(x)] = 1;
        queue.push_back(x);
      }
    }
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (int a : net_.out_arcs(queue[i])) {
        scanned();
        const int y = net_.head(a);
        if (flow_.residual[static_cast<std::size_t>(a)] > 0 && region_[static_cast<std::size_t>(y)] == region &&
            !mark[static_cast<std::size_t>(y)]) {
          mark[static_cast<std::size_t>(y)] = 1;
          queue.push_back(y);
        }
      }
    }
    return mark;
  }

  void cancel_all(std::vector<int> nodes, int region, int lo, int hi, int depth) {
    if (counters_) counters_->max_depth = std::max(counters_->max_depth, depth);
    const int k = hi - lo + 1;
    if (k <= 1) return;
    const int mid = lo + (k + 1) / 2 - 1;
    std::vector<int> sources;
    std::vector<int> sinks;
    for (int c = lo; c <= mid; ++c) sinks.push_back(c);
    for (int c = mid + 1; c <= hi; ++c) sources.push_back(c);
    cancel(region, nodes, sources, sinks);

    std::vector<int> seed_nodes;
    for (int c : sources) seed_nodes.push_back(net_.center_node(c));
    const auto in_upper = reachable(region, seed_nodes);
    std::vector<int> lower_nodes;
    std::vector<int> upper_nodes;
    for (int x : nodes) (in_upper[static_cast<std::size_t>(x)] ? upper_nodes : lower_nodes).push_back(x);
    const int lower_id = ++next_region_;
    const int upper_id = ++next_region_;
    assign_region(lower_nodes, lower_id);
    assign_region(upper_nodes, upper_id);
    cancel_all(std::move(lower_nodes), lower_id, lo, mid, depth + 1);
    cancel_all(std::move(upper_nodes), upper_id, mid + 1, hi, depth + 1);
  }

 private:
  void scanned() {
    if (counters_) ++counters_->arcs_scanned;
  }

  bool is_sink(int x) const { return sink_flag_[static_cast<std::size_t>(x)] != 0; }

  bool usable(int region, int arc) const {
    const int y = net_.head(arc);
    return flow_.residual[static_cast<std::size_t>(arc)] > 0 && region_[static_cast<std::size_t>(y)] == region;
  }

  // BFS layering from the sources (level 1, the super-source being level 0).
  // Returns the level of the nearest sink center, or -1.
  int build_levels(int region, std::span<const int> nodes, std::span<const int> sources) {
    for (int x : nodes) level_[static_cast<std::size_t>(x)] = -1;
    std::vector<int> queue;
    for (int c : sources) {
      const int x = net_.center_node(c);
      if (region_[static_cast<std::size_t>(x)] != region) continue;
      level_[static_cast<std::size_t>(x)] = 1;
      queue.push_back(x);
    }
    int sink_level = -1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const int x = queue[i];
      const int lx = level_[static_cast<std::size_t>(x)];
      if (sink_level >= 0 && lx >= sink_level) break;
      for (int a : net_.out_arcs(x)) {
        scanned();
        if (!usable(region, a)) continue;
        const int y = net_.head(a);
        if (level_[static_cast<std::size_t>(y)] != -1) continue;
        level_[static_cast<std::size_t>(y)] = lx + 1;
        if (is_sink(y)) {
          if (sink_level < 0) sink_level = lx + 1;
        } else {
          queue.push_back(y);
        }
      }
    }
    return sink_level;
  }

  // Depth-first advance/retreat over the layer graph. Sources are drained in
  // decreasing center order and machine arcs are scanned in increasing
  // center order, which keeps every machine's center usage a prefix.
  void blocking_flow(int region, std::span<const int> nodes, std::span<const int> sources, int sink_level) {
    for (int x : nodes) current_[static_cast<std::size_t>(x)] = 0;
    std::vector<int> path_nodes;
    std::vector<int> path_arcs;
    for (int c : sources) {
      const int src = net_.center_node(c);
      if (region_[static_cast<std::size_t>(src)] != region) continue;
      while (level_[static_cast<std::size_t>(src)] == 1) {
        path_nodes.assign(1, src);
        path_arcs.clear();
        bool reached = false;
        while (!path_nodes.empty()) {
          const int x = path_nodes.back();
          if (is_sink(x)) {
            reached = true;
            break;
          }
          const auto arcs = net_.out_arcs(x);
          auto& cur = current_[static_cast<std::size_t>(x)];
          bool advanced = false;
          for (; cur < static_cast<int>(arcs.size()); ++cur) {
            const int a = arcs[cur];
            scanned();
            if (!usable(region, a)) continue;
            const int y = net_.head(a);
            const int ly = level_[static_cast<std::size_t>(y)];
            if (ly != level_[static_cast<std::size_t>(x)] + 1) continue;
            if (ly >= sink_level && !is_sink(y)) continue;
            path_nodes.push_back(y);
            path_arcs.push_back(a);
            advanced = true;
            break;
          }
          if (!advanced) {
            level_[static_cast<std::size_t>(x)] = -2;  // dead
            path_nodes.pop_back();
            if (!path_arcs.empty()) path_arcs.pop_back();
          }
        }
        if (!reached) break;
        augment(path_nodes, path_arcs);
      }
    }
  }

  void augment(std::span<const int> path_nodes, std::span<const int> path_arcs) {
    for (std::size_t i = 0; i < path_arcs.size(); ++i) {
      const int a = path_arcs[i];
      const int from = path_nodes[i];
      const int to = path_nodes[i + 1];
      if (net_.is_center_node(to)) {
        shift_center_unit(net_, flow_, from - net_.num_jobs(), a);
      } else if (net_.is_center_node(from)) {
        shift_center_unit(net_, flow_, to - net_.num_jobs(), a);
      } else {
        push_unit(flow_, a);
      }
    }
    // The unit leaving the first center and entering the last one is
    // rerouted through the sink, so the s-t flow value is unchanged.
    push_unit(flow_, net_.center_sink_arc(net_.center_of_node(path_nodes.front())) ^ 1);
    push_unit(flow_, net_.center_sink_arc(net_.center_of_node(path_nodes.back())));
    if (counters_) ++counters_->augmentations;
  }

  const CostCenterNetwork& net_;
  NetworkFlow& flow_;
  CancelCounters* counters_;
  std::vector<int> region_;
  std::vector<int> level_;
  std::vector<int> current_;
  std::vector<char> sink_flag_;
  int next_region_ = 0;
};

std::vector<int> internal_nodes(const CostCenterNetwork& net) {
  std::vector<int> nodes(static_cast<std::size_t>(net.source()));
  for (int x = 0; x < net.source(); ++x) nodes[static_cast<std::size_t>(x)] = x;
  return nodes;
}

void check_centers(const CostCenterNetwork& net, std::span<const int> centers) {
  for (int c : centers) {
    if (c < 0 || c >= net.num_centers()) throw std::invalid_argument("center index out of range");
  }
}

}  // namespace

void cancel(const CostCenterNetwork& net, NetworkFlow& flow, std::span<const int> sources,
            std::span<const int> sinks, CancelCounters* counters) {
  check_centers(net, sources);
  check_centers(net, sinks);
  if (!sources.empty() && !sinks.empty()) {
    const int min_source = *std::min_element(sources.begin(), sources.end());
    const int max_sink = *std::max_element(sinks.begin(), sinks.end());
    if (min_source <= max_sink) {
      throw std::invalid_argument("cancel requires every source center above every sink center");
    }
  }
  if (sources.empty() || sinks.empty()) return;
  Canceller canceller(net, flow, counters);
  const auto nodes = internal_nodes(net);
  canceller.cancel(0, nodes, std::vector<int>(sources.begin(), sources.end()), sinks);
}

std::vector<char> reachable_partition(const CostCenterNetwork& net, const NetworkFlow& flow,
                                      std::span<const int> seed) {
  check_centers(net, seed);
  Canceller canceller(net, const_cast<NetworkFlow&>(flow), nullptr);
  std::vector<int> seed_nodes;
  for (int c : seed) seed_nodes.push_back(net.center_node(c));
  return canceller.reachable(0, seed_nodes);
}

void cancel_all(const CostCenterNetwork& net, NetworkFlow& flow, CancelCounters* counters) {
  Canceller canceller(net, flow, counters);
  canceller.cancel_all(internal_nodes(net), 0, 0, net.num_centers() - 1, 1);
}

SemiMatching extract_semi_matching(const CostCenterNetwork& net, const NetworkFlow& flow) {
  SemiMatching matching(net.num_jobs());
  for (int u = 0; u < net.num_jobs(); ++u) {
    for (int a : net.job_arcs(u)) {
      if (flow.flow(net, a) == 1) matching.assign(u, net.head(a) - net.num_jobs());
    }
    if (matching.machine_of(u) == SemiMatching::kUnassigned) {
      throw std::invalid_argument("flow does not saturate job " + std::to_string(u));
    }
  }
  return matching;
}

SemiMatching greedy_semi_matching(const BipartiteInstance& instance) {
  SemiMatching matching(instance.num_jobs());
  std::vector<int> load(static_cast<std::size_t>(instance.num_machines()), 0);
  for (int u = 0; u < instance.num_jobs(); ++u) {
    int best = -1;
    for (int id : instance.job_edges(u)) {
      const int v = instance.edge(id).machine;
      if (best < 0 || load[static_cast<std::size_t>(v)] < load[static_cast<std::size_t>(best)]) best = v;
    }
    matching.assign(u, best);
    ++load[static_cast<std::size_t>(best)];
  }
  return matching;
}

SemiMatching solve_unweighted(const BipartiteInstance& instance, CancelCounters* counters) {
  if (!instance.unit_weights()) throw std::invalid_argument("unweighted solver requires unit weights");
  const auto net = CostCenterNetwork::build(instance);
  auto flow = seed_flow(net, greedy_semi_matching(instance));
  cancel_all(net, flow, counters);
  return extract_semi_matching(net, flow);
}

SemiMatching solve_convex(const BipartiteInstance& instance, std::span<const ConvexMachineCost> costs,
                          CancelCounters* counters) {
  const auto net = CostCenterNetwork::build(instance, costs);
  auto flow = seed_flow(net, greedy_semi_matching(instance));
  cancel_all(net, flow, counters);
  return extract_semi_matching(net, flow);
}

}  // namespace semimatch
