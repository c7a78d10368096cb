#include <doctest.h>

#include <random>

#include "semimatch/generators.hpp"
#include "semimatch/matching.hpp"
#include "test_support.hpp"

using namespace semimatch;

TEST_CASE("machine_cost on small weight lists") {
  CHECK(machine_cost(std::vector<Weight>{}) == 0);
  CHECK(machine_cost(std::vector<Weight>{3, 1, 2}) == 10);
  CHECK(machine_cost(std::vector<Weight>{1, 1, 1}) == 6);
  CHECK(machine_cost(std::vector<Weight>{7}) == 7);
}

TEST_CASE("machine_cost agrees with completion times and ignores order") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 500; ++it) {
    std::vector<Weight> w(rng() % 9);
    for (auto& x : w) x = static_cast<Weight>(rng() % 50);
    const Cost expected = testing::completion_time(w);
    CHECK(machine_cost(w) == expected);
    std::shuffle(w.begin(), w.end(), rng);
    CHECK(machine_cost(w) == expected);
  }
}

TEST_CASE("cost of the worked example assignments") {
  const auto in = testing::worked_example();
  CHECK(cost_of_semi_matching(in, SemiMatching(std::vector<int>{0, 1, 1, 1})) == 7);
  CHECK(cost_of_semi_matching(in, SemiMatching(std::vector<int>{0, 0, 1, 1})) == 6);
  const BipartiteInstance single(1, 1, {{0, 0, 7}});
  CHECK(cost_of_semi_matching(single, SemiMatching(std::vector<int>{0})) == 7);
}

TEST_CASE("validate_semi_matching reports each violation kind") {
  const auto in = testing::worked_example();
  CHECK_FALSE(validate_semi_matching(in, SemiMatching(std::vector<int>{0, 0, 1, 1})));

  auto v = validate_semi_matching(in, SemiMatching(std::vector<int>{0, -1, 1, 1}));
  REQUIRE(v);
  CHECK(v->kind == Violation::Kind::kUnassignedJob);
  CHECK(v->job == 1);

  v = validate_semi_matching(in, SemiMatching(std::vector<int>{1, 0, 1, 1}));
  REQUIRE(v);
  CHECK(v->kind == Violation::Kind::kNonAdjacent);
  CHECK(v->job == 0);

  v = validate_semi_matching(in, SemiMatching(std::vector<int>{0, 0, 5, 1}));
  REQUIRE(v);
  CHECK(v->kind == Violation::Kind::kMachineOutOfRange);

  v = validate_semi_matching(in, SemiMatching(std::vector<int>{0, 0}));
  REQUIRE(v);
  CHECK(v->kind == Violation::Kind::kSizeMismatch);

  CHECK_THROWS_AS(cost_of_semi_matching(in, SemiMatching(std::vector<int>{1, 0, 1, 1})), InvalidMatching);
}

TEST_CASE("instance construction rejects bad input") {
  auto kind_of = [](auto&& build) {
    try {
      build();
    } catch (const InstanceError& e) {
      return e.kind();
    }
    FAIL("no InstanceError");
    return InstanceError::Kind::kBadCounts;
  };
  CHECK(kind_of([] { BipartiteInstance(1, 1, {{0, 1, 1}}); }) == InstanceError::Kind::kIdOutOfRange);
  CHECK(kind_of([] { BipartiteInstance(1, 1, {{0, 0, 1}, {0, 0, 2}}); }) == InstanceError::Kind::kDuplicateEdge);
  CHECK(kind_of([] { BipartiteInstance(1, 1, {{0, 0, -1}}); }) == InstanceError::Kind::kWeightOutOfRange);
  CHECK(kind_of([] { BipartiteInstance(1, 1, {{0, 0, kWeightLimit}}); }) == InstanceError::Kind::kWeightOutOfRange);
  CHECK(kind_of([] { BipartiteInstance(2, 1, {{0, 0, 1}}); }) == InstanceError::Kind::kIsolatedJob);
  CHECK(kind_of([] { BipartiteInstance(-1, 1, {}); }) == InstanceError::Kind::kBadCounts);
  CHECK_NOTHROW(BipartiteInstance(1, 1, {{0, 0, kWeightLimit - 1}}));
}

TEST_CASE("adjacency and unit weight detection") {
  const auto in = testing::worked_example();
  CHECK(in.unit_weights());
  CHECK(in.job_degree(1) == 2);
  CHECK(in.machine_degree(1) == 3);
  CHECK(in.max_machine_degree() == 3);
  CHECK(in.find_edge(1, 1) == 2);
  CHECK_FALSE(in.find_edge(0, 1));
  CHECK_FALSE(BipartiteInstance(1, 1, {{0, 0, 2}}).unit_weights());
}

TEST_CASE("checked arithmetic throws on overflow") {
  const Cost big = std::numeric_limits<Cost>::max();
  CHECK_THROWS_AS(checked_add(big, 1), CostOverflow);
  CHECK_THROWS_AS(checked_mul(big / 2 + 1, 2), CostOverflow);
  CHECK(checked_add(2, 3) == 5);
  std::vector<Weight> huge(20, kWeightLimit - 1);
  CHECK(machine_cost(huge) == (kWeightLimit - 1) * 210);
}

TEST_CASE("convex machine costs") {
  const auto in = testing::worked_example();
  const SemiMatching optimum(std::vector<int>{0, 0, 1, 1});

  const auto linear = uniform_convex_cost(in, [](std::int64_t k) { return k; });
  CHECK(convex_cost(in, optimum, linear) == in.num_jobs());
  CHECK(convex_cost(in, SemiMatching(std::vector<int>{0, 1, 1, 1}), linear) == in.num_jobs());

  const auto square = uniform_convex_cost(in, [](std::int64_t k) { return k * k; });
  CHECK(convex_cost(in, optimum, square) == 8);
  CHECK(convex_cost(in, SemiMatching(std::vector<int>{0, 1, 1, 1}), square) == 10);
  CHECK(testing::reference_convex_optimum(in, [](int k) { return Cost{k} * k; }) == 8);

  const auto f = ConvexMachineCost::from_values({0, 1, 4, 7});
  CHECK(f.max_degree() == 3);
  CHECK(f.marginal(1) == 1);
  CHECK(f.marginal(3) == 3);
  CHECK(f(2) == 4);
  CHECK_THROWS_AS(ConvexMachineCost::from_values({1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(ConvexMachineCost::from_values({0, 3, 4}), std::invalid_argument);
  CHECK_THROWS_AS(f(4), std::out_of_range);
}

TEST_CASE("triangular cost equals unit-weight completion time") {
  for (int d = 0; d < 30; ++d) CHECK(triangular(d) == testing::completion_time(std::vector<Weight>(d, 1)));
}

TEST_CASE("machine loads") {
  const auto loads = SemiMatching(std::vector<int>{0, 1, 1, 1}).machine_loads(3);
  CHECK(loads == std::vector<int>{1, 3, 0});
}

TEST_CASE("generated instances price like the reference") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto in = gen_random(5, 3, 0.5, 20, seed);
    std::mt19937_64 rng(seed);
    std::vector<int> m(static_cast<std::size_t>(in.num_jobs()));
    for (int u = 0; u < in.num_jobs(); ++u) {
      m[static_cast<std::size_t>(u)] = in.edge(in.job_edges(u)[rng() % in.job_edges(u).size()]).machine;
    }
    CHECK(cost_of_semi_matching(in, SemiMatching(m)) == testing::assignment_cost(in, m));
  }
}
