#include <doctest.h>

#include <functional>
#include <random>

#include "semimatch/cost_center_network.hpp"
#include "semimatch/generators.hpp"
#include "semimatch/weighted_solver.hpp"
#include "test_support.hpp"

using namespace semimatch;

namespace {

// best[k]: cheapest set of k jobs on distinct exploded slots, slot i of v
// costing i * w.
std::vector<Cost> extreme_costs(const BipartiteInstance& in) {
  const int n = in.num_jobs();
  std::vector<Cost> best(static_cast<std::size_t>(n) + 1, std::numeric_limits<Cost>::max());
  std::vector<std::vector<char>> used(static_cast<std::size_t>(in.num_machines()));
  for (int v = 0; v < in.num_machines(); ++v) used[static_cast<std::size_t>(v)].assign(static_cast<std::size_t>(in.machine_degree(v)) + 1, 0);
  std::function<void(int, int, Cost)> rec = [&](int u, int k, Cost cost) {
    if (u == n) {
      best[static_cast<std::size_t>(k)] = std::min(best[static_cast<std::size_t>(k)], cost);
      return;
    }
    rec(u + 1, k, cost);
    for (int id : in.job_edges(u)) {
      const Edge& e = in.edge(id);
      auto& slots = used[static_cast<std::size_t>(e.machine)];
      for (int i = 1; i < static_cast<int>(slots.size()); ++i) {
        if (slots[static_cast<std::size_t>(i)]) continue;
        slots[static_cast<std::size_t>(i)] = 1;
        rec(u + 1, k + 1, cost + i * e.weight);
        slots[static_cast<std::size_t>(i)] = 0;
      }
    }
  };
  rec(0, 0, 0);
  return best;
}

}  // namespace

TEST_CASE("gamma from slot potentials") {
  const std::vector<Cost> p{0, 5, 7};
  CHECK(compute_gammas_for_machine(p, 4, std::vector<Weight>{6}) == std::vector<int>{1});
  CHECK(compute_gammas_for_machine(p, 4, std::vector<Weight>{4}) == std::vector<int>{2});
  CHECK(compute_gammas_for_machine(p, 4, std::vector<Weight>{6, 4, 1}) == std::vector<int>{1, 2, 3});
  CHECK(compute_gammas_for_machine(std::vector<Cost>{}, 3, std::vector<Weight>{5, 0}) == std::vector<int>{1, 1});
}

TEST_CASE("first iterations on one machine with weights 1 and 2") {
  const BipartiteInstance in(2, 1, {{0, 0, 1}, {1, 0, 2}});
  EktSolver solver(in);
  for (int u = 0; u < 2; ++u) CHECK(solver.job_potential(u) == 0);
  for (const int g : solver.compute_gammas()) CHECK(g == 1);

  const auto first = solver.search();
  REQUIRE(first.path.size() == 1);
  CHECK(first.path[0].job == 0);
  CHECK(first.path[0].slot == 1);
  CHECK(first.target_distance == 1);
  solver.update_potentials(first);
  solver.augment(first.path, first.target_distance);
  CHECK(solver.machine_of(0) == 0);
  CHECK(solver.slot_of(0) == 1);
  CHECK_FALSE(solver.check_invariants());

  solver.step();
  CHECK(solver.done());
  // The heavier job ends up in slot 1: 1 * 2 + 2 * 1.
  CHECK(solver.slot_of(1) == 1);
  CHECK(solver.slot_of(0) == 2);
  CHECK(solver.exploded_cost() == 4);
  CHECK(cost_of_semi_matching(in, solver.matching()) == 4);
  CHECK_FALSE(solver.check_invariants());
}

TEST_CASE("zero-weight edge is found at distance zero") {
  const BipartiteInstance in(2, 2, {{0, 0, 0}, {0, 1, 3}, {1, 1, 2}});
  EktSolver solver(in);
  const auto r = solver.search();
  CHECK(r.target_distance == 0);
  REQUIRE(r.path.size() == 1);
  CHECK(r.path[0].job == 0);
  CHECK(r.path[0].machine == 0);
}

TEST_CASE("single edge path takes slot one") {
  const BipartiteInstance in(1, 1, {{0, 0, 7}});
  EktSolver solver(in);
  solver.step();
  CHECK(solver.slot_of(0) == 1);
  CHECK(solver.alpha(0) == 1);
  CHECK(solver.exploded_cost() == 7);
}

TEST_CASE("augment rejects malformed paths") {
  const BipartiteInstance in(2, 2, {{0, 0, 1}, {1, 0, 1}, {1, 1, 1}});
  EktSolver solver(in);
  const std::vector<PathStep> empty;
  CHECK_THROWS_AS(solver.augment(empty, 0), std::invalid_argument);
  const std::vector<PathStep> gap{{0, 0, 3}};
  CHECK_THROWS_AS(solver.augment(gap, 0), std::invalid_argument);
  const std::vector<PathStep> non_edge{{0, 1, 1}};
  CHECK_THROWS_AS(solver.augment(non_edge, 0), std::invalid_argument);
}

TEST_CASE("swap between two machines keeps slot weights decreasing") {
  // a prefers x, b only fits x cheaply; the second path moves a to y.
  const BipartiteInstance in(2, 2, {{0, 0, 1}, {0, 1, 2}, {1, 0, 5}});
  EktSolver solver(in, EktOptions{.check_invariants = true});
  solver.step();
  solver.step();
  CHECK(solver.done());
  CHECK_FALSE(solver.check_invariants());
  for (int v = 0; v < 2; ++v) {
    Weight prev = std::numeric_limits<Weight>::max();
    for (int u : solver.slot_jobs(v)) {
      const Weight w = in.edge(*in.find_edge(u, v)).weight;
      CHECK(w <= prev);
      prev = w;
    }
  }
  CHECK(cost_of_semi_matching(in, solver.matching()) == testing::reference_optimum(in));
}

TEST_CASE("small weighted examples") {
  CHECK(cost_of_semi_matching(BipartiteInstance(2, 1, {{0, 0, 1}, {1, 0, 2}}),
                              solve_weighted(BipartiteInstance(2, 1, {{0, 0, 1}, {1, 0, 2}}))) == 4);
  const BipartiteInstance two(2, 2, {{0, 0, 1}, {1, 0, 1}, {0, 1, 10}, {1, 1, 10}});
  const auto m = solve_weighted(two);
  CHECK(cost_of_semi_matching(two, m) == 3);
  CHECK(m.machine_of(0) == 0);
  CHECK(m.machine_of(1) == 0);
  CHECK(testing::reference_optimum(two) == 3);
  const auto example = testing::worked_example();
  CHECK(cost_of_semi_matching(example, solve_weighted(example)) == 6);
}

TEST_CASE("every prefix of the run is an extreme matching") {
  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 300) {
    const auto in = gen_random(1 + static_cast<int>(rng() % 4), 1 + static_cast<int>(rng() % 3), 0.6, 6, rng());
    int slots = 0;
    for (int v = 0; v < in.num_machines(); ++v) slots += in.machine_degree(v);
    if (slots > 6) continue;
    ++checked;
    const auto best = extreme_costs(in);
    EktSolver solver(in, EktOptions{.check_invariants = true, .verify_heaps = true});
    while (!solver.done()) {
      solver.step();
      CHECK(solver.exploded_cost() == best[static_cast<std::size_t>(solver.matched_jobs())]);
    }
  }
}

TEST_CASE("random instances match the reference with invariants on") {
  std::mt19937_64 rng(8);
  for (int it = 0; it < 400; ++it) {
    const auto in = gen_random(1 + static_cast<int>(rng() % 7), 1 + static_cast<int>(rng() % 4), 0.5, 12, rng());
    WeightedCounters counters;
    const auto m = solve_weighted(in, &counters, EktOptions{.check_invariants = true, .verify_heaps = true});
    CHECK(cost_of_semi_matching(in, m) == testing::reference_optimum(in));
    CHECK(counters.iterations == in.num_jobs());
    CHECK(counters.max_group_relaxations() <= in.num_edges());
  }
}

TEST_CASE("heavy weights near the limit") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 100; ++it) {
    const auto in = gen_random(6, 3, 0.6, kWeightLimit - 1, rng());
    CHECK(cost_of_semi_matching(in, solve_weighted(in, nullptr, EktOptions{.check_invariants = true})) ==
          testing::reference_optimum(in));
  }
}

TEST_CASE("unit weights agree with the unweighted solver") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto in = gen_random_edges(80, 15, 300, 1, seed);
    CHECK(cost_of_semi_matching(in, solve_weighted(in)) == cost_of_semi_matching(in, solve_unweighted(in)));
  }
}

TEST_CASE("exploded cost equals the completion-time objective") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto in = gen_random_edges(60, 12, 240, 50, seed);
    EktSolver solver(in);
    const auto m = solver.solve();
    CHECK(solver.exploded_cost() == cost_of_semi_matching(in, m));
    CHECK_FALSE(validate_semi_matching(in, m));
  }
}
