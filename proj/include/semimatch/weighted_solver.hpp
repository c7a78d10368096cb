#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semimatch/envelope_heap.hpp"
#include "semimatch/instance.hpp"
#include "semimatch/matching.hpp"

namespace semimatch {

inline constexpr Cost kUnreached = std::numeric_limits<Cost>::max();

struct WeightedCounters {
  int iterations = 0;
  /// Relax calls (one per scanned job-machine edge) of each search.
  std::vector<std::int64_t> group_relaxations;
  /// Envelope-heap inserts plus delete-mins of each search.
  std::vector<std::int64_t> heap_ops;
  /// Slots finalized (deleted from their heap) in each search.
  std::vector<std::int64_t> slots_deleted;

  std::int64_t max_group_relaxations() const;
  std::int64_t total_heap_ops() const;
};

/// One non-matching edge of an augmenting path: `job` moves to slot `slot`
/// (1-based) of `machine`.
struct PathStep {
  int job;
  int machine;
  int slot;
};

struct SearchResult {
  /// Reduced-cost distance of each job, kUnreached if not finalized.
  std::vector<Cost> job_distance;
  /// Per machine, distance of each matched slot, kUnreached if not finalized.
  std::vector<std::vector<Cost>> slot_distance;
  /// Distance of the first unmatched slot reached.
  Cost target_distance = 0;
  std::vector<PathStep> path;
  std::int64_t group_relaxations = 0;
  std::int64_t heap_ops = 0;
  std::int64_t slots_deleted = 0;
};

struct EktOptions {
  /// Run check_invariants() before every search and the envelope checks
  /// during it; any failure throws std::logic_error.
  bool check_invariants = false;
  /// Compare every heap minimum with a direct scan of the heap's functions.
  bool verify_heaps = false;
  /// Receives one trace per machine heap per search.
  std::vector<EnvelopeTrace>* traces = nullptr;
};

/// gamma for each weight of one machine: the smallest i in [1, limit] with
/// p(i + 1) - p(i) <= w, where p(i) = slot_potentials[i - 1] for i <= alpha
/// and 0 beyond; limit = min(alpha + 1, degree). `weights_desc` must be
/// non-increasing; one two-pointer sweep covers all of them.
std::vector<int> compute_gammas_for_machine(std::span<const Cost> slot_potentials, int degree,
                                            std::span<const Weight> weights_desc);

/// Successive shortest paths over the implicit exploded graph, where slot i
/// of machine v costs i * w_uv. All edges of one job into one machine are
/// relaxed at once through that machine's envelope heap.
class EktSolver {
 public:
  explicit EktSolver(const BipartiteInstance& instance, EktOptions options = {});

  const BipartiteInstance& instance() const { return instance_; }
  bool done() const { return matched_ == instance_.num_jobs(); }
  int matched_jobs() const { return matched_; }

  /// One full iteration: search, update_potentials, augment.
  void step();
  SemiMatching solve();

  SearchResult search();
  void update_potentials(const SearchResult& result);
  /// Applies M = M xor P. Throws std::invalid_argument on a malformed path.
  void augment(std::span<const PathStep> path, Cost target_potential);

  /// gamma of every edge, indexed by edge id.
  std::vector<int> compute_gammas() const;

  int alpha(int v) const { return static_cast<int>(slot_jobs_[static_cast<std::size_t>(v)].size()); }
  std::span<const int> slot_jobs(int v) const { return slot_jobs_[static_cast<std::size_t>(v)]; }
  /// p(v^i) for 1 <= i; 0 for every unmatched slot.
  Cost slot_potential(int v, int i) const;
  Cost job_potential(int u) const { return job_potential_[static_cast<std::size_t>(u)]; }
  /// Machine of job u, or -1; slot_of is 1-based.
  int machine_of(int u) const { return job_machine_[static_cast<std::size_t>(u)]; }
  int slot_of(int u) const { return job_slot_[static_cast<std::size_t>(u)]; }
  /// Edge ids of machine v by non-increasing weight.
  std::span<const int> sorted_adjacency(int v) const;
  /// Sum over matched slots of i * w; the objective on complete matchings.
  Cost exploded_cost() const;
  SemiMatching matching() const;
  const WeightedCounters& counters() const { return counters_; }

  /// First violated structural invariant, if any: non-negative reduced
  /// costs with tight matching edges, slot prefix bookkeeping, slot weights
  /// non-increasing, price sandwich between consecutive slots, unimodality
  /// of every f_uv on [1, alpha_v] around gamma_uv, gamma monotone along
  /// the sorted adjacency and equal to a direct scan.
  std::optional<std::string> check_invariants() const;

 private:
  Cost reduced_cost(int edge, int slot) const;
  void prepare_heap(int v, int iteration);
  std::optional<std::string> check_envelopes(std::span<const int> touched) const;

  const BipartiteInstance& instance_;
  EktOptions options_;
  int matched_ = 0;
  std::vector<std::vector<int>> slot_jobs_;
  std::vector<std::vector<Cost>> slot_potential_;
  std::vector<Cost> job_potential_;
  std::vector<int> job_machine_;
  std::vector<int> job_slot_;
  std::vector<int> job_edge_;
  std::vector<int> sorted_offsets_;
  std::vector<int> sorted_edges_;
  std::vector<Weight> sorted_weights_;
  std::vector<EnvelopeHeap> heaps_;
  std::vector<std::vector<int>> heap_jobs_;
  std::vector<int> heap_stamp_;
  std::vector<Cost> offset_scratch_;
  WeightedCounters counters_;
};

SemiMatching solve_weighted(const BipartiteInstance& instance, WeightedCounters* counters = nullptr,
                            EktOptions options = {});

}  // namespace semimatch
