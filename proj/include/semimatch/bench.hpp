#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "semimatch/instance.hpp"

namespace semimatch {

/// Parameters of one gen_random_edges call.
struct BenchCase {
  int n_jobs = 0;
  int n_machines = 0;
  std::int64_t num_edges = 0;
  Weight max_weight = 1;
  std::uint64_t seed = 0;
};

/// Every solver runs on every case. Solver names: unweighted, weighted,
/// baseline.
struct BenchPlan {
  std::vector<BenchCase> cases;
  std::vector<std::string> solvers;
};

struct BenchRecord {
  BenchCase params;
  std::string solver;
  double wall_ms = 0;
  Cost cost = 0;
  // Unweighted solver only.
  std::optional<int> cancel_rounds_max;
  std::optional<int> recursion_depth;
  // Weighted solver only: largest per-search relaxation count, total heap ops.
  std::optional<std::int64_t> group_relaxations;
  std::optional<std::int64_t> heap_ops;
};

class BenchDisagreement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kBenchThreadsEnv = "SEMIMATCH_BENCH_THREADS";
inline constexpr const char* kBenchCsvHeader =
    "n_jobs,n_machines,m,max_weight,seed,solver,wall_ms,cost,cancel_rounds_max,recursion_depth,"
    "group_relaxations,heap_ops";

/// SEMIMATCH_BENCH_THREADS when set to a positive integer, else 1.
int default_bench_threads();

/// Records in plan order (case-major, then solver). Throws
/// std::invalid_argument for unknown solvers or for the unweighted solver on
/// a case with max_weight != 1, and BenchDisagreement when solvers report
/// different costs on one case.
std::vector<BenchRecord> run_bench(const BenchPlan& plan, int threads);

std::string bench_csv(const std::vector<BenchRecord>& records);

}  // namespace semimatch
