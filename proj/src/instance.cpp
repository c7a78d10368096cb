#include "semimatch/instance.hpp"

#include <algorithm>
#include <unordered_set>

namespace semimatch {

namespace {

std::vector<int> build_csr(int groups, const std::vector<Edge>& edges, bool by_job,
                           std::vector<int>& offsets) {
  offsets.assign(static_cast<std::size_t>(groups) + 1, 0);
  for (const Edge& e : edges) ++offsets[static_cast<std::size_t>(by_job ? e.job : e.machine) + 1];
  for (int g = 0; g < groups; ++g) offsets[g + 1] += offsets[g];
  std::vector<int> adj(edges.size());
  std::vector<int> fill(offsets.begin(), offsets.end() - 1);
  for (int id = 0; id < static_cast<int>(edges.size()); ++id) {
    const Edge& e = edges[id];
    adj[fill[by_job ? e.job : e.machine]++] = id;
  }
  return adj;
}

}  // namespace

BipartiteInstance::BipartiteInstance(int num_jobs, int num_machines, std::vector<Edge> edges)
    : num_jobs_(num_jobs), num_machines_(num_machines), edges_(std::move(edges)) {
  if (num_jobs < 0 || num_machines < 0) {
    throw InstanceError(InstanceError::Kind::kBadCounts, "negative job or machine count");
  }
  std::unordered_set<std::int64_t> seen;
  seen.reserve(edges_.size() * 2);
  for (const Edge& e : edges_) {
    if (e.job < 0 || e.job >= num_jobs) {
      throw InstanceError(InstanceError::Kind::kIdOutOfRange,
                          "job id " + std::to_string(e.job) + " out of range");
    }
    if (e.machine < 0 || e.machine >= num_machines) {
      throw InstanceError(InstanceError::Kind::kIdOutOfRange,
                          "machine id " + std::to_string(e.machine) + " out of range");
    }
    if (e.weight < 0 || e.weight >= kWeightLimit) {
      throw InstanceError(InstanceError::Kind::kWeightOutOfRange,
                          "weight " + std::to_string(e.weight) + " outside [0, 2^31)");
    }
    const std::int64_t key = static_cast<std::int64_t>(e.job) * num_machines + e.machine;
    if (!seen.insert(key).second) {
      throw InstanceError(InstanceError::Kind::kDuplicateEdge,
                          "duplicate edge (" + std::to_string(e.job) + ", " +
                              std::to_string(e.machine) + ")");
    }
    if (e.weight != 1) unit_weights_ = false;
  }
  job_adj_ = build_csr(num_jobs_, edges_, true, job_offsets_);
  machine_adj_ = build_csr(num_machines_, edges_, false, machine_offsets_);
  for (int u = 0; u < num_jobs_; ++u) {
    if (job_degree(u) == 0) {
      throw InstanceError(InstanceError::Kind::kIsolatedJob,
                          "job " + std::to_string(u) + " has no admissible machine");
    }
  }
}

std::span<const int> BipartiteInstance::job_edges(int job) const {
  const auto b = static_cast<std::size_t>(job_offsets_[job]);
  const auto e = static_cast<std::size_t>(job_offsets_[job + 1]);
  return std::span<const int>(job_adj_).subspan(b, e - b);
}

std::span<const int> BipartiteInstance::machine_edges(int machine) const {
  const auto b = static_cast<std::size_t>(machine_offsets_[machine]);
  const auto e = static_cast<std::size_t>(machine_offsets_[machine + 1]);
  return std::span<const int>(machine_adj_).subspan(b, e - b);
}

int BipartiteInstance::max_machine_degree() const {
  int best = 0;
  for (int v = 0; v < num_machines_; ++v) best = std::max(best, machine_degree(v));
  return best;
}

std::optional<int> BipartiteInstance::find_edge(int job, int machine) const {
  if (job < 0 || job >= num_jobs_) return std::nullopt;
  for (int id : job_edges(job)) {
    if (edges_[id].machine == machine) return id;
  }
  return std::nullopt;
}

}  // namespace semimatch
