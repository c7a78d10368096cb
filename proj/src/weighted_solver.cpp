#include "semimatch/weighted_solver.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace semimatch {

std::int64_t WeightedCounters::max_group_relaxations() const {
  std::int64_t best = 0;
  for (auto r : group_relaxations) best = std::max(best, r);
  return best;
}

std::int64_t WeightedCounters::total_heap_ops() const {
  return std::accumulate(heap_ops.begin(), heap_ops.end(), std::int64_t{0});
}

std::vector<int> compute_gammas_for_machine(std::span<const Cost> slot_potentials, int degree,
                                            std::span<const Weight> weights_desc) {
  const int alpha = static_cast<int>(slot_potentials.size());
  const int limit = std::max(1, std::min(alpha + 1, degree));
  auto p = [&](int i) -> Cost { return i <= alpha ? slot_potentials[static_cast<std::size_t>(i) - 1] : 0; };
  std::vector<int> out;
  out.reserve(weights_desc.size());
  int i = 1;
  for (std::size_t k = 0; k < weights_desc.size(); ++k) {
    if (k > 0 && weights_desc[k] > weights_desc[k - 1]) {
      throw std::invalid_argument("weights must be non-increasing");
    }
    while (i < limit && p(i + 1) - p(i) > weights_desc[k]) ++i;
    out.push_back(i);
  }
  return out;
}

EktSolver::EktSolver(const BipartiteInstance& instance, EktOptions options)
    : instance_(instance), options_(options) {
  const auto n = static_cast<std::size_t>(instance.num_jobs());
  const auto machines = static_cast<std::size_t>(instance.num_machines());
  slot_jobs_.resize(machines);
  slot_potential_.resize(machines);
  job_potential_.assign(n, 0);
  job_machine_.assign(n, -1);
  job_slot_.assign(n, 0);
  job_edge_.assign(n, -1);
  heaps_.resize(machines);
  heap_jobs_.resize(machines);
  heap_stamp_.assign(machines, -1);

  // One-time presort of every machine's adjacency by decreasing weight.
  sorted_offsets_.assign(machines + 1, 0);
  sorted_edges_.reserve(static_cast<std::size_t>(instance.num_edges()));
  for (int v = 0; v < instance.num_machines(); ++v) {
    const auto adj = instance.machine_edges(v);
    const auto begin = sorted_edges_.size();
    sorted_edges_.insert(sorted_edges_.end(), adj.begin(), adj.end());
    std::stable_sort(sorted_edges_.begin() + static_cast<std::ptrdiff_t>(begin), sorted_edges_.end(),
                     [&](int a, int b) { return instance.edge(a).weight > instance.edge(b).weight; });
    sorted_offsets_[static_cast<std::size_t>(v) + 1] = static_cast<int>(sorted_edges_.size());
  }
  sorted_weights_.reserve(sorted_edges_.size());
  for (int id : sorted_edges_) sorted_weights_.push_back(instance.edge(id).weight);
}

std::span<const int> EktSolver::sorted_adjacency(int v) const {
  const auto b = static_cast<std::size_t>(sorted_offsets_[v]);
  const auto e = static_cast<std::size_t>(sorted_offsets_[v + 1]);
  return std::span<const int>(sorted_edges_).subspan(b, e - b);
}

Cost EktSolver::slot_potential(int v, int i) const {
  const auto& pots = slot_potential_[static_cast<std::size_t>(v)];
  return i >= 1 && i <= static_cast<int>(pots.size()) ? pots[static_cast<std::size_t>(i) - 1] : 0;
}

Cost EktSolver::reduced_cost(int edge, int slot) const {
  const Edge& e = instance_.edge(edge);
  return slot * e.weight + job_potential(e.job) - slot_potential(e.machine, slot);
}

std::vector<int> EktSolver::compute_gammas() const {
  std::vector<int> gamma(static_cast<std::size_t>(instance_.num_edges()), 1);
  for (int v = 0; v < instance_.num_machines(); ++v) {
    const auto b = static_cast<std::size_t>(sorted_offsets_[v]);
    const auto e = static_cast<std::size_t>(sorted_offsets_[v + 1]);
    const auto g = compute_gammas_for_machine(slot_potential_[static_cast<std::size_t>(v)],
                                              instance_.machine_degree(v),
                                              std::span<const Weight>(sorted_weights_).subspan(b, e - b));
    for (std::size_t k = 0; k < g.size(); ++k) gamma[static_cast<std::size_t>(sorted_edges_[b + k])] = g[k];
  }
  return gamma;
}

void EktSolver::prepare_heap(int v, int iteration) {
  auto& stamp = heap_stamp_[static_cast<std::size_t>(v)];
  if (stamp == iteration) return;
  stamp = iteration;
  const int domain = std::min(alpha(v) + 1, instance_.machine_degree(v));
  auto& offsets = offset_scratch_;
  offsets.assign(static_cast<std::size_t>(domain), 0);
  const auto& pots = slot_potential_[static_cast<std::size_t>(v)];
  std::copy_n(pots.begin(), std::min<std::size_t>(pots.size(), offsets.size()), offsets.begin());
  auto& heap = heaps_[static_cast<std::size_t>(v)];
  heap.record_traces(options_.traces);
  heap.reset(domain, offsets);
  heap_jobs_[static_cast<std::size_t>(v)].clear();
}

SearchResult EktSolver::search() {
  const int n = instance_.num_jobs();
  const int iteration = counters_.iterations++;
  SearchResult r;
  r.job_distance.assign(static_cast<std::size_t>(n), kUnreached);
  r.slot_distance.resize(static_cast<std::size_t>(instance_.num_machines()));
  std::vector<std::vector<int>> slot_parent(static_cast<std::size_t>(instance_.num_machines()));
  for (int v = 0; v < instance_.num_machines(); ++v) {
    r.slot_distance[v].assign(static_cast<std::size_t>(alpha(v)), kUnreached);
    slot_parent[v].assign(static_cast<std::size_t>(alpha(v)), -1);
  }
  const auto gamma = compute_gammas();

  struct Entry {
    Cost distance;
    int machine;
    std::uint32_t version;
    bool operator>(const Entry& o) const {
      return distance != o.distance ? distance > o.distance : machine > o.machine;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  std::vector<std::uint32_t> version(static_cast<std::size_t>(instance_.num_machines()), 0);
  // Value of each machine's live queue entry; kUnreached when it has none.
  std::vector<Cost> announced(static_cast<std::size_t>(instance_.num_machines()), kUnreached);
  std::vector<int> touched;
  std::vector<int> dirty;
  std::vector<char> is_dirty(static_cast<std::size_t>(instance_.num_machines()), 0);

  auto heap_min = [&](int v) -> std::optional<EnvelopeHeap::Minimum> {
    auto& heap = heaps_[static_cast<std::size_t>(v)];
    auto m = heap.try_access_min();
    if (options_.verify_heaps || options_.check_invariants) {
      const auto naive = naive_envelope_min(heap);
      if (bool(naive) != bool(m) || (m && m->value != naive->value)) {
        throw std::logic_error("envelope heap minimum disagrees with direct scan on machine " +
                               std::to_string(v));
      }
    }
    return m;
  };
  // Inserts only lower a heap's minimum, so a machine is re-queued only when
  // its minimum dropped below its live entry.
  auto announce = [&](int v) {
    if (auto m = heap_min(v); m && m->value < announced[static_cast<std::size_t>(v)]) {
      announced[static_cast<std::size_t>(v)] = m->value;
      queue.push(Entry{m->value, v, ++version[static_cast<std::size_t>(v)]});
    }
  };
  auto flush = [&] {
    for (int v : dirty) {
      is_dirty[static_cast<std::size_t>(v)] = 0;
      announce(v);
    }
    dirty.clear();
  };
  auto finalize_job = [&](int u, Cost d) {
    if (r.job_distance[static_cast<std::size_t>(u)] != kUnreached) {
      throw std::logic_error("job finalized twice");
    }
    r.job_distance[static_cast<std::size_t>(u)] = d;
    const Cost base = d + job_potential(u);
    for (int id : instance_.job_edges(u)) {
      const Edge& e = instance_.edge(id);
      const int v = e.machine;
      if (heap_stamp_[static_cast<std::size_t>(v)] != iteration) touched.push_back(v);
      prepare_heap(v, iteration);
      heaps_[static_cast<std::size_t>(v)].insert(e.weight, base, gamma[static_cast<std::size_t>(id)]);
      heap_jobs_[static_cast<std::size_t>(v)].push_back(u);
      ++r.group_relaxations;
      ++r.heap_ops;
      if (!is_dirty[static_cast<std::size_t>(v)]) {
        is_dirty[static_cast<std::size_t>(v)] = 1;
        dirty.push_back(v);
      }
    }
  };

  for (int u = 0; u < n; ++u) {
    if (job_machine_[static_cast<std::size_t>(u)] < 0) finalize_job(u, 0);
  }
  flush();

  int target_machine = -1;
  int target_parent = -1;
  while (!queue.empty()) {
    const Entry top = queue.top();
    queue.pop();
    const int v = top.machine;
    if (top.version != version[static_cast<std::size_t>(v)]) continue;
    auto& heap = heaps_[static_cast<std::size_t>(v)];
    const auto m = heap.delete_min();
    ++r.heap_ops;
    ++r.slots_deleted;
    const int job = heap_jobs_[static_cast<std::size_t>(v)][static_cast<std::size_t>(m.function)];
    if (m.index == alpha(v) + 1) {
      target_machine = v;
      target_parent = job;
      r.target_distance = m.value;
      break;
    }
    r.slot_distance[v][static_cast<std::size_t>(m.index) - 1] = m.value;
    slot_parent[v][static_cast<std::size_t>(m.index) - 1] = job;
    announced[static_cast<std::size_t>(v)] = kUnreached;
    finalize_job(slot_jobs_[v][static_cast<std::size_t>(m.index) - 1], m.value);
    if (heap.live_count() > 0 && !is_dirty[static_cast<std::size_t>(v)]) {
      is_dirty[static_cast<std::size_t>(v)] = 1;
      dirty.push_back(v);
    }
    flush();
  }
  if (target_machine < 0) throw std::logic_error("no augmenting path on a feasible instance");

  r.path.push_back(PathStep{target_parent, target_machine, alpha(target_machine) + 1});
  for (int u = target_parent; job_machine_[static_cast<std::size_t>(u)] >= 0;) {
    const int v = job_machine_[static_cast<std::size_t>(u)];
    const int slot = job_slot_[static_cast<std::size_t>(u)];
    const int prev = slot_parent[v][static_cast<std::size_t>(slot) - 1];
    r.path.push_back(PathStep{prev, v, slot});
    u = prev;
  }
  std::reverse(r.path.begin(), r.path.end());

  if (options_.check_invariants) {
    if (auto error = check_envelopes(touched)) throw std::logic_error(*error);
  }
  counters_.group_relaxations.push_back(r.group_relaxations);
  counters_.heap_ops.push_back(r.heap_ops);
  counters_.slots_deleted.push_back(r.slots_deleted);
  return r;
}

void EktSolver::update_potentials(const SearchResult& r) {
  const Cost limit = r.target_distance;
  for (std::size_t u = 0; u < job_potential_.size(); ++u) {
    job_potential_[u] += std::min(r.job_distance[u], limit);
  }
  for (std::size_t v = 0; v < slot_potential_.size(); ++v) {
    auto& pots = slot_potential_[v];
    for (std::size_t i = 0; i < pots.size(); ++i) pots[i] += std::min(r.slot_distance[v][i], limit);
  }
}

void EktSolver::augment(std::span<const PathStep> path, Cost target_potential) {
  auto malformed = [](const std::string& why) { throw std::invalid_argument("malformed path: " + why); };
  if (path.empty()) malformed("empty");
  if (job_machine_[static_cast<std::size_t>(path.front().job)] >= 0) malformed("starts at a matched job");
  std::vector<int> edges;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const PathStep& s = path[k];
    if (s.job < 0 || s.job >= instance_.num_jobs() || s.machine < 0 || s.machine >= instance_.num_machines()) {
      malformed("vertex out of range");
    }
    const auto edge = instance_.find_edge(s.job, s.machine);
    if (!edge) malformed("non-edge");
    edges.push_back(*edge);
    const bool last = k + 1 == path.size();
    const int top = alpha(s.machine) + (last ? 1 : 0);
    if (s.slot < 1 || s.slot > top || (last && s.slot != top) || s.slot > instance_.machine_degree(s.machine)) {
      malformed("bad slot");
    }
    if (k > 0) {
      const PathStep& before = path[k - 1];
      if (job_machine_[static_cast<std::size_t>(s.job)] != before.machine ||
          job_slot_[static_cast<std::size_t>(s.job)] != before.slot) {
        malformed("not alternating");
      }
    }
  }
  for (std::size_t k = 0; k < path.size(); ++k) {
    const PathStep& s = path[k];
    auto& slots = slot_jobs_[static_cast<std::size_t>(s.machine)];
    if (k + 1 == path.size()) {
      slots.push_back(s.job);
      slot_potential_[static_cast<std::size_t>(s.machine)].push_back(target_potential);
    } else {
      slots[static_cast<std::size_t>(s.slot) - 1] = s.job;
    }
    job_machine_[static_cast<std::size_t>(s.job)] = s.machine;
    job_slot_[static_cast<std::size_t>(s.job)] = s.slot;
    job_edge_[static_cast<std::size_t>(s.job)] = edges[k];
  }
  ++matched_;
}

void EktSolver::step() {
  if (done()) throw std::logic_error("every job is already matched");
  if (options_.check_invariants) {
    if (auto error = check_invariants()) throw std::logic_error(*error);
  }
  const SearchResult r = search();
  update_potentials(r);
  augment(r.path, r.target_distance);
}

SemiMatching EktSolver::solve() {
  while (!done()) step();
  if (options_.check_invariants) {
    if (auto error = check_invariants()) throw std::logic_error(*error);
  }
  return matching();
}

Cost EktSolver::exploded_cost() const {
  Cost total = 0;
  for (int u = 0; u < instance_.num_jobs(); ++u) {
    if (job_machine_[static_cast<std::size_t>(u)] < 0) continue;
    total = checked_add(total, checked_mul(job_slot_[static_cast<std::size_t>(u)],
                                           instance_.edge(job_edge_[static_cast<std::size_t>(u)]).weight));
  }
  return total;
}

SemiMatching EktSolver::matching() const { return SemiMatching(job_machine_); }

std::optional<std::string> EktSolver::check_invariants() const {
  auto fail = [](std::string s) { return std::optional<std::string>(std::move(s)); };
  const auto gamma = compute_gammas();
  for (int v = 0; v < instance_.num_machines(); ++v) {
    const auto& slots = slot_jobs_[static_cast<std::size_t>(v)];
    const int a = alpha(v);
    if (a > instance_.machine_degree(v)) return fail("alpha exceeds degree on machine " + std::to_string(v));
    if (static_cast<int>(slot_potential_[static_cast<std::size_t>(v)].size()) != a) {
      return fail("slot potentials out of sync on machine " + std::to_string(v));
    }
    for (int i = 1; i <= a; ++i) {
      const int u = slots[static_cast<std::size_t>(i) - 1];
      if (job_machine_[static_cast<std::size_t>(u)] != v || job_slot_[static_cast<std::size_t>(u)] != i) {
        return fail("slot bookkeeping broken at machine " + std::to_string(v) + " slot " + std::to_string(i));
      }
      if (slot_potential(v, i) < 0) return fail("negative slot potential");
      if (i > 1) {
        const Weight heavier = instance_.edge(job_edge_[static_cast<std::size_t>(slots[i - 2])]).weight;
        const Weight lighter = instance_.edge(job_edge_[static_cast<std::size_t>(u)]).weight;
        if (heavier < lighter) return fail("slot weights increase on machine " + std::to_string(v));
      }
      if (i < a) {
        const Cost diff = slot_potential(v, i + 1) - slot_potential(v, i);
        const Weight here = instance_.edge(job_edge_[static_cast<std::size_t>(u)]).weight;
        const Weight next = instance_.edge(job_edge_[static_cast<std::size_t>(slots[i])]).weight;
        if (diff > here || diff < next) {
          return fail("price sandwich fails at machine " + std::to_string(v) + " slot " + std::to_string(i));
        }
      }
    }
    // gamma: monotone along the sorted adjacency and equal to a direct scan.
    const int limit = std::max(1, std::min(a + 1, instance_.machine_degree(v)));
    int previous = 1;
    for (int id : sorted_adjacency(v)) {
      const int g = gamma[static_cast<std::size_t>(id)];
      if (g < previous) return fail("gamma not monotone on machine " + std::to_string(v));
      previous = g;
      const Weight w = instance_.edge(id).weight;
      int direct = limit;
      for (int i = 1; i < limit; ++i) {
        if (slot_potential(v, i + 1) - slot_potential(v, i) <= w) {
          direct = i;
          break;
        }
      }
      if (direct != g) return fail("gamma sweep disagrees with scan on edge " + std::to_string(id));
    }
  }
  int matched = 0;
  for (int u = 0; u < instance_.num_jobs(); ++u) {
    if (job_potential(u) < 0) return fail("negative job potential");
    if (job_machine_[static_cast<std::size_t>(u)] >= 0) ++matched;
  }
  if (matched != matched_) return fail("matched count out of sync");

  for (int id = 0; id < instance_.num_edges(); ++id) {
    const Edge& e = instance_.edge(id);
    const int domain = std::min(alpha(e.machine) + 1, instance_.machine_degree(e.machine));
    for (int i = 1; i <= domain; ++i) {
      const Cost rc = reduced_cost(id, i);
      if (rc < 0) {
        return fail("negative reduced cost " + std::to_string(rc) + " on edge " + std::to_string(id) + " slot " +
                    std::to_string(i));
      }
      const bool matching_edge =
          job_machine_[static_cast<std::size_t>(e.job)] == e.machine && job_slot_[static_cast<std::size_t>(e.job)] == i;
      if (matching_edge && rc != 0) return fail("matching edge not tight on edge " + std::to_string(id));
    }
    // f_uv(i) = i * w + p(u) - p(v^i) up to the constant d(u).
    const int g = gamma[static_cast<std::size_t>(id)];
    for (int i = 1; i < domain; ++i) {
      const Cost here = reduced_cost(id, i);
      const Cost next = reduced_cost(id, i + 1);
      if ((i < g && here < next) || (i >= g && here > next)) {
        return fail("f not unimodal around gamma on edge " + std::to_string(id));
      }
    }
  }
  return std::nullopt;
}

// Every index of each touched heap: the envelope owner attains the minimum
// line value, and the minimizing sets of lines and functions coincide.
std::optional<std::string> EktSolver::check_envelopes(std::span<const int> touched) const {
  for (int v : touched) {
    const auto& heap = heaps_[static_cast<std::size_t>(v)];
    const auto segments = heap.segments();
    for (int x = 1; x <= heap.domain(); ++x) {
      Cost min_g = kUnreached;
      Cost min_f = kUnreached;
      for (int i = 0; i < heap.num_functions(); ++i) {
        min_g = std::min(min_g, heap.line_value(i, x));
        min_f = std::min(min_f, heap.value(i, x));
      }
      for (int i = 0; i < heap.num_functions(); ++i) {
        if ((heap.line_value(i, x) == min_g) != (heap.value(i, x) == min_f)) {
          return "argmin of f and g differ on machine " + std::to_string(v) + " at " + std::to_string(x);
        }
      }
      int owner = -1;
      for (const auto& s : segments) {
        if (s.lo <= x && x <= s.hi) owner = s.function;
      }
      if (owner < 0 || heap.line_value(owner, x) != min_g) {
        return "envelope owner misses the lower envelope on machine " + std::to_string(v) + " at " +
               std::to_string(x);
      }
    }
  }
  return std::nullopt;
}

SemiMatching solve_weighted(const BipartiteInstance& instance, WeightedCounters* counters, EktOptions options) {
  EktSolver solver(instance, options);
  SemiMatching result = solver.solve();
  if (counters) *counters = solver.counters();
  return result;
}

}  // namespace semimatch
