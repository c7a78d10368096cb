#include "semimatch/matching.hpp"

#include <algorithm>

namespace semimatch {

Cost checked_add(Cost a, Cost b) {
  Cost out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw CostOverflow("cost accumulator overflow");
  return out;
}

Cost checked_mul(Cost a, Cost b) {
  Cost out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw CostOverflow("cost accumulator overflow");
  return out;
}

std::vector<int> SemiMatching::machine_loads(int num_machines) const {
  std::vector<int> loads(static_cast<std::size_t>(num_machines), 0);
  for (int v : machine_of_) {
    if (v >= 0 && v < num_machines) ++loads[static_cast<std::size_t>(v)];
  }
  return loads;
}

Cost machine_cost(std::span<const Weight> weights) {
  std::vector<Weight> sorted(weights.begin(), weights.end());
  std::sort(sorted.begin(), sorted.end());
  const auto d = static_cast<Cost>(sorted.size());
  Cost total = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    total = checked_add(total, checked_mul(d - static_cast<Cost>(i), sorted[i]));
  }
  return total;
}

std::optional<Violation> validate_semi_matching(const BipartiteInstance& instance,
                                                const SemiMatching& matching) {
  if (matching.num_jobs() != instance.num_jobs()) {
    return Violation{Violation::Kind::kSizeMismatch, -1,
                     "matching covers " + std::to_string(matching.num_jobs()) + " jobs, instance has " +
                         std::to_string(instance.num_jobs())};
  }
  for (int u = 0; u < instance.num_jobs(); ++u) {
    const int v = matching.machine_of(u);
    if (v == SemiMatching::kUnassigned) {
      return Violation{Violation::Kind::kUnassignedJob, u, "unassigned job " + std::to_string(u)};
    }
    if (v < 0 || v >= instance.num_machines()) {
      return Violation{Violation::Kind::kMachineOutOfRange, u,
                       "job " + std::to_string(u) + " assigned to unknown machine " + std::to_string(v)};
    }
    if (!instance.find_edge(u, v)) {
      return Violation{Violation::Kind::kNonAdjacent, u,
                       "non-adjacent assignment " + std::to_string(u) + " -> " + std::to_string(v)};
    }
  }
  return std::nullopt;
}

Cost cost_of_semi_matching(const BipartiteInstance& instance, const SemiMatching& matching) {
  if (auto violation = validate_semi_matching(instance, matching)) {
    throw InvalidMatching(violation->message);
  }
  std::vector<std::vector<Weight>> per_machine(static_cast<std::size_t>(instance.num_machines()));
  for (int u = 0; u < instance.num_jobs(); ++u) {
    const int v = matching.machine_of(u);
    per_machine[static_cast<std::size_t>(v)].push_back(instance.edge(*instance.find_edge(u, v)).weight);
  }
  Cost total = 0;
  for (const auto& weights : per_machine) total = checked_add(total, machine_cost(weights));
  return total;
}

ConvexMachineCost ConvexMachineCost::from_values(std::vector<Cost> values) {
  if (values.empty() || values[0] != 0) {
    throw std::invalid_argument("convex cost must satisfy f(0) = 0");
  }
  for (std::size_t k = 2; k < values.size(); ++k) {
    const Cost prev = checked_add(values[k - 1], -values[k - 2]);
    const Cost next = checked_add(values[k], -values[k - 1]);
    if (next < prev) {
      throw std::invalid_argument("non-convex cost: marginal " + std::to_string(k) + " is " +
                                  std::to_string(next) + " < " + std::to_string(prev));
    }
  }
  return ConvexMachineCost(std::move(values));
}

ConvexMachineCost ConvexMachineCost::from_function(const std::function<Cost(std::int64_t)>& f,
                                                   int max_degree) {
  std::vector<Cost> values(static_cast<std::size_t>(max_degree) + 1);
  for (int k = 0; k <= max_degree; ++k) values[static_cast<std::size_t>(k)] = f(k);
  return from_values(std::move(values));
}

Cost ConvexMachineCost::operator()(int degree) const {
  if (degree < 0 || degree > max_degree()) {
    throw std::out_of_range("degree " + std::to_string(degree) + " beyond tabulated cost");
  }
  return values_[static_cast<std::size_t>(degree)];
}

Cost ConvexMachineCost::marginal(int k) const {
  if (k < 1 || k > max_degree()) throw std::out_of_range("marginal index out of range");
  return values_[static_cast<std::size_t>(k)] - values_[static_cast<std::size_t>(k) - 1];
}

std::vector<ConvexMachineCost> uniform_convex_cost(const BipartiteInstance& instance,
                                                   const std::function<Cost(std::int64_t)>& f) {
  std::vector<ConvexMachineCost> costs;
  costs.reserve(static_cast<std::size_t>(instance.num_machines()));
  for (int v = 0; v < instance.num_machines(); ++v) {
    costs.push_back(ConvexMachineCost::from_function(f, instance.machine_degree(v)));
  }
  return costs;
}

Cost triangular(std::int64_t k) { return checked_mul(k, k + 1) / 2; }

Cost convex_cost(const BipartiteInstance& instance, const SemiMatching& matching,
                 std::span<const ConvexMachineCost> costs) {
  if (auto violation = validate_semi_matching(instance, matching)) {
    throw InvalidMatching(violation->message);
  }
  if (static_cast<int>(costs.size()) != instance.num_machines()) {
    throw std::invalid_argument("expected one convex cost per machine");
  }
  const auto loads = matching.machine_loads(instance.num_machines());
  Cost total = 0;
  for (int v = 0; v < instance.num_machines(); ++v) {
    total = checked_add(total, costs[static_cast<std::size_t>(v)](loads[static_cast<std::size_t>(v)]));
  }
  return total;
}

}  // namespace semimatch
