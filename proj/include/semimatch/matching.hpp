#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "semimatch/instance.hpp"

namespace semimatch {

class CostOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

class InvalidMatching : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Cost checked_add(Cost a, Cost b);
Cost checked_mul(Cost a, Cost b);

/// Assignment of every job to one machine.
class SemiMatching {
 public:
  static constexpr int kUnassigned = -1;

  SemiMatching() = default;
  explicit SemiMatching(int num_jobs) : machine_of_(static_cast<std::size_t>(num_jobs), kUnassigned) {}
  explicit SemiMatching(std::vector<int> machine_of_job) : machine_of_(std::move(machine_of_job)) {}

  int num_jobs() const { return static_cast<int>(machine_of_.size()); }
  int machine_of(int job) const { return machine_of_[static_cast<std::size_t>(job)]; }
  void assign(int job, int machine) { machine_of_[static_cast<std::size_t>(job)] = machine; }
  std::span<const int> assignment() const { return machine_of_; }

  /// deg_M(v) for every machine.
  std::vector<int> machine_loads(int num_machines) const;

  friend bool operator==(const SemiMatching&, const SemiMatching&) = default;

 private:
  std::vector<int> machine_of_;
};

struct Violation {
  enum class Kind { kSizeMismatch, kUnassignedJob, kMachineOutOfRange, kNonAdjacent };
  Kind kind;
  int job = -1;
  std::string message;
};

/// Total completion time of one machine: sum of (d - i + 1) * w_i over the
/// weights sorted increasingly. Throws CostOverflow.
Cost machine_cost(std::span<const Weight> weights);

/// First violation found, or nullopt when the matching is valid.
std::optional<Violation> validate_semi_matching(const BipartiteInstance& instance,
                                                const SemiMatching& matching);

/// Sum of machine_cost over all machines. Throws InvalidMatching.
Cost cost_of_semi_matching(const BipartiteInstance& instance, const SemiMatching& matching);

/// Convex per-machine cost f with f(0) = 0, tabulated on 0..max_degree.
class ConvexMachineCost {
 public:
  /// values[k] = f(k). Rejects f(0) != 0 and decreasing marginals.
  static ConvexMachineCost from_values(std::vector<Cost> values);
  static ConvexMachineCost from_function(const std::function<Cost(std::int64_t)>& f,
                                         int max_degree);

  int max_degree() const { return static_cast<int>(values_.size()) - 1; }
  Cost operator()(int degree) const;
  /// f(k) - f(k-1) for 1 <= k <= max_degree.
  Cost marginal(int k) const;

 private:
  explicit ConvexMachineCost(std::vector<Cost> values) : values_(std::move(values)) {}
  std::vector<Cost> values_;
};

/// One cost per machine, tabulated up to that machine's degree.
std::vector<ConvexMachineCost> uniform_convex_cost(const BipartiteInstance& instance,
                                                   const std::function<Cost(std::int64_t)>& f);

/// f(k) = k(k+1)/2, the unit-weight completion time.
Cost triangular(std::int64_t k);

/// Sum over machines of f_v(deg_M(v)).
Cost convex_cost(const BipartiteInstance& instance, const SemiMatching& matching,
                 std::span<const ConvexMachineCost> costs);

}  // namespace semimatch
