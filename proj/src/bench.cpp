#include "semimatch/bench.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string_view>
#include <thread>

#include "semimatch/cost_center_network.hpp"
#include "semimatch/exploded_baseline.hpp"
#include "semimatch/generators.hpp"
#include "semimatch/matching.hpp"
#include "semimatch/weighted_solver.hpp"

namespace semimatch {

int default_bench_threads() {
  const char* raw = std::getenv(kBenchThreadsEnv);
  if (raw == nullptr) return 1;
  const std::string_view text(raw);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 1) return 1;
  return value;
}

namespace {

BenchRecord run_one(const BipartiteInstance& instance, const BenchCase& params, const std::string& solver) {
  BenchRecord record;
  record.params = params;
  record.solver = solver;
  const auto start = std::chrono::steady_clock::now();
  SemiMatching matching;
  if (solver == "unweighted") {
    CancelCounters counters;
    matching = solve_unweighted(instance, &counters);
    record.cancel_rounds_max = counters.max_rounds();
    record.recursion_depth = counters.max_depth;
  } else if (solver == "weighted") {
    WeightedCounters counters;
    matching = solve_weighted(instance, &counters);
    record.group_relaxations = counters.max_group_relaxations();
    record.heap_ops = counters.total_heap_ops();
  } else {
    matching = solve_exploded_baseline(instance);
  }
  const auto stop = std::chrono::steady_clock::now();
  record.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  record.cost = cost_of_semi_matching(instance, matching);
  return record;
}

}  // namespace

std::vector<BenchRecord> run_bench(const BenchPlan& plan, int threads) {
  for (const auto& solver : plan.solvers) {
    if (solver != "unweighted" && solver != "weighted" && solver != "baseline") {
      throw std::invalid_argument("unknown solver '" + solver + "'");
    }
    if (solver == "unweighted") {
      for (const auto& c : plan.cases) {
        if (c.max_weight != 1) throw std::invalid_argument("the unweighted solver needs max_weight = 1");
      }
    }
  }
  const std::size_t k = plan.solvers.size();
  std::vector<BenchRecord> records(plan.cases.size() * k);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= plan.cases.size()) return;
      try {
        const BenchCase& c = plan.cases[i];
        const auto instance = gen_random_edges(c.n_jobs, c.n_machines, c.num_edges, c.max_weight, c.seed);
        for (std::size_t s = 0; s < k; ++s) {
          records[i * k + s] = run_one(instance, c, plan.solvers[s]);
          if (records[i * k + s].cost != records[i * k].cost) {
            throw BenchDisagreement("seed " + std::to_string(c.seed) + ": " + plan.solvers[0] + " cost " +
                                    std::to_string(records[i * k].cost) + " but " + plan.solvers[s] + " cost " +
                                    std::to_string(records[i * k + s].cost));
          }
        }
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(plan.cases.size());
        return;
      }
    }
  };

  const int count = std::max(1, std::min<int>(threads, static_cast<int>(plan.cases.size())));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::string out = std::string(kBenchCsvHeader) + "\n";
  auto opt = [](const auto& v) { return v ? std::to_string(*v) : std::string(); };
  for (const auto& r : records) {
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
    out += std::to_string(r.params.n_jobs) + "," + std::to_string(r.params.n_machines) + "," +
           std::to_string(r.params.num_edges) + "," + std::to_string(r.params.max_weight) + "," +
           std::to_string(r.params.seed) + "," + r.solver + "," + wall + "," + std::to_string(r.cost) + "," +
           opt(r.cancel_rounds_max) + "," + opt(r.recursion_depth) + "," + opt(r.group_relaxations) + "," +
           opt(r.heap_ops) + "\n";
  }
  return out;
}

}  // namespace semimatch
