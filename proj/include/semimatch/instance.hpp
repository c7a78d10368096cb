#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace semimatch {

using Weight = std::int64_t;
using Cost = std::int64_t;

/// Exclusive upper bound on edge weights.
inline constexpr Weight kWeightLimit = Weight{1} << 31;

struct Edge {
  int job = 0;
  int machine = 0;
  Weight weight = 1;
};

class InstanceError : public std::runtime_error {
 public:
  enum class Kind { kIdOutOfRange, kDuplicateEdge, kWeightOutOfRange, kIsolatedJob, kBadCounts };

  InstanceError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }
  /// An isolated job has no admissible machine, so no semi-matching exists.
  bool infeasible() const { return kind_ == Kind::kIsolatedJob; }

 private:
  Kind kind_;
};

/// Bipartite job/machine graph with non-negative integer weights.
///
/// Ids are dense and 0-based. Edges are addressed by their position in
/// edges(); the per-job and per-machine adjacency lists hold edge ids in
/// input order. Instances are immutable once constructed.
class BipartiteInstance {
 public:
  BipartiteInstance() = default;

  /// Validates ids, weights and duplicates; throws InstanceError. Every job
  /// must have at least one edge.
  BipartiteInstance(int num_jobs, int num_machines, std::vector<Edge> edges);

  int num_jobs() const { return num_jobs_; }
  int num_machines() const { return num_machines_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }

  std::span<const int> job_edges(int job) const;
  std::span<const int> machine_edges(int machine) const;

  int job_degree(int job) const { return static_cast<int>(job_edges(job).size()); }
  int machine_degree(int machine) const { return static_cast<int>(machine_edges(machine).size()); }
  int max_machine_degree() const;

  bool unit_weights() const { return unit_weights_; }
  std::optional<int> find_edge(int job, int machine) const;

 private:
  int num_jobs_ = 0;
  int num_machines_ = 0;
  bool unit_weights_ = true;
  std::vector<Edge> edges_;
  std::vector<int> job_offsets_{0};
  std::vector<int> job_adj_;
  std::vector<int> machine_offsets_{0};
  std::vector<int> machine_adj_;
};

}  // namespace semimatch
