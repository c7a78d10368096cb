#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sys/wait.h>
#include <unistd.h>

#include "semimatch/bench.hpp"
#include "semimatch/generators.hpp"
#include "semimatch/io.hpp"
#include "semimatch/oracles.hpp"
#include "semimatch/weighted_solver.hpp"
#include "test_support.hpp"

using namespace semimatch;

namespace {

ParseError::Kind parse_kind(const std::string& text, int* line = nullptr) {
  try {
    parse_file(text);
  } catch (const ParseError& e) {
    if (line) *line = e.line();
    return e.kind();
  }
  FAIL("parsed without error: " << text);
  return ParseError::Kind::kBadRecord;
}

std::string strip_comments(const std::string& text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = text.find('\n', pos);
    const std::string line = text.substr(pos, end - pos);
    if (!line.starts_with("c")) out += line + "\n";
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  return out;
}

}  // namespace

TEST_CASE("parse a two-job instance") {
  const auto in = parse_instance("p semimatch 2 1 2\ne 1 1 1\ne 2 1 2\n");
  CHECK(in.num_jobs() == 2);
  CHECK(in.num_machines() == 1);
  REQUIRE(in.num_edges() == 2);
  CHECK(in.edge(0).job == 0);
  CHECK(in.edge(1).job == 1);
  CHECK(in.edge(0).weight == 1);
  CHECK(in.edge(1).weight == 2);
}

TEST_CASE("comments, blank lines and CRLF are accepted") {
  const auto in = parse_instance("c hello\r\n\r\np semimatch 1 1 1\r\nc mid\r\n  e 1 1 5  \r\n");
  CHECK(in.edge(0).weight == 5);
  const auto g = parse_graph("c x\np cover 3 2\ne 1 2\ne 2 3");
  CHECK(g.num_edges() == 2);
  CHECK(std::holds_alternative<SimpleGraph>(parse_file(emit_graph(g))));
}

TEST_CASE("parse errors carry kind and line") {
  int line = -1;
  CHECK(parse_kind("p semimatch 1 1 1\ne 1 2 1\n", &line) == ParseError::Kind::kIdOutOfRange);
  CHECK(line == 2);
  CHECK(parse_kind("") == ParseError::Kind::kMissingHeader);
  CHECK(parse_kind("e 1 1 1\n") == ParseError::Kind::kMissingHeader);
  CHECK(parse_kind("p semimatch 1 1\n") == ParseError::Kind::kMalformedHeader);
  CHECK(parse_kind("p matching 1 1 1\n") == ParseError::Kind::kMalformedHeader);
  CHECK(parse_kind("p semimatch -1 1 0\n") == ParseError::Kind::kMalformedHeader);
  CHECK(parse_kind("p semimatch 1 1 x\n") == ParseError::Kind::kMalformedHeader);
  CHECK(parse_kind("p semimatch 1 1 1\np semimatch 1 1 1\ne 1 1 1\n") == ParseError::Kind::kMalformedHeader);
  CHECK(parse_kind("p semimatch 1 1 2\ne 1 1 1\n", &line) == ParseError::Kind::kCountMismatch);
  CHECK(parse_kind("p semimatch 1 2 1\ne 1 1 1\ne 1 2 1\n", &line) == ParseError::Kind::kCountMismatch);
  CHECK(line == 3);
  CHECK(parse_kind("p semimatch 1 1 1\ne 1 1 -4\n") == ParseError::Kind::kNegativeWeight);
  CHECK(parse_kind("p semimatch 1 1 1\ne 1 1 2147483648\n") == ParseError::Kind::kWeightOutOfRange);
  CHECK(parse_kind("p semimatch 1 1 1\ne 1 1 99999999999999999999\n") == ParseError::Kind::kBadRecord);
  CHECK(parse_kind("p semimatch 1 1 1\ne 1 1\n") == ParseError::Kind::kBadRecord);
  CHECK(parse_kind("p semimatch 1 1 1\nx 1 1 1\n") == ParseError::Kind::kBadRecord);
  CHECK(parse_kind("p semimatch 1 1 2\ne 1 1 1\ne 1 1 3\n", &line) == ParseError::Kind::kDuplicateEdge);
  CHECK(line == 3);
  CHECK(parse_kind("p cover 2 1\ne 1 1\n") == ParseError::Kind::kSelfLoop);
  CHECK(parse_kind("p cover 2 2\ne 1 2\ne 2 1\n") == ParseError::Kind::kDuplicateEdge);
  CHECK(parse_kind("p cover 2 1\ne 1 2 5\n") == ParseError::Kind::kBadRecord);
  CHECK(parse_kind("p cover 2 1\ne 0 1\n") == ParseError::Kind::kIdOutOfRange);
}

TEST_CASE("isolated jobs surface as infeasible instances") {
  try {
    parse_file("p semimatch 2 1 1\ne 1 1 1\n");
    FAIL("expected InstanceError");
  } catch (const InstanceError& e) {
    CHECK(e.infeasible());
  }
}

TEST_CASE("emit and parse round-trip") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto in = gen_random(1 + static_cast<int>(seed % 20), 1 + static_cast<int>(seed % 7), 0.3, 1000, seed);
    const std::string text = emit_instance(in);
    const auto back = parse_instance("c generated\n" + text + "c trailer\n");
    CHECK(emit_instance(back) == text);
    CHECK(strip_comments("c x\n" + text) == text);
    const auto g = gen_random_graph(2 + static_cast<int>(seed % 9), 0.4, seed, true);
    CHECK(emit_graph(parse_graph(emit_graph(g))) == emit_graph(g));
  }
}

TEST_CASE("assignment and cover solution files round-trip") {
  const auto in = testing::worked_example();
  const SemiMatching m(std::vector<int>{0, 0, 1, 1});
  const auto parsed = parse_assignment(emit_assignment(m, 6), in.num_jobs());
  CHECK(parsed.matching == m);
  CHECK(parsed.cost == 6);
  CHECK_THROWS_AS(parse_assignment("a 1 1\na 1 2\n", 4), ParseError);
  CHECK_THROWS_AS(parse_assignment("a 5 1\n", 4), ParseError);
  CHECK(parse_assignment("a 2 1\n", 4).matching.machine_of(0) == SemiMatching::kUnassigned);

  const SimpleGraph p4(4, {{0, 1}, {1, 2}, {2, 3}});
  const auto cover = make_cover(p4, {0, 2});
  const auto back = parse_cover(emit_cover(p4, cover), p4);
  CHECK(back.edge_ids == std::vector<int>{0, 2});
  CHECK(back.cost == 4);
  CHECK_THROWS_AS(parse_cover("e 1 3\n", p4), ParseError);
}

TEST_CASE("parser is total on mutated input") {
  std::mt19937_64 rng(99);
  const std::string alphabet = "pce semimatchover0123456789-+ \n\t#x";
  int errors = 0;
  for (int it = 0; it < 5000; ++it) {
    std::string text = emit_instance(gen_random(3, 2, 0.5, 9, static_cast<std::uint64_t>(it)));
    const int edits = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < edits; ++k) {
      const std::size_t pos = rng() % (text.size() + 1);
      switch (rng() % 3) {
        case 0: text.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
        case 1: if (pos < text.size()) text.erase(pos, 1); break;
        default: if (pos < text.size()) text[pos] = alphabet[rng() % alphabet.size()]; break;
      }
    }
    try {
      parse_file(text);
    } catch (const ParseError&) {
      ++errors;
    } catch (const InstanceError&) {
      ++errors;
    } catch (const GraphError&) {
      ++errors;
    }
  }
  CHECK(errors > 0);
}

TEST_CASE("generators are deterministic and well-formed") {
  CHECK(emit_instance(gen_random(30, 8, 0.2, 50, 7)) == emit_instance(gen_random(30, 8, 0.2, 50, 7)));
  CHECK(emit_instance(gen_random(30, 8, 0.2, 50, 7)) != emit_instance(gen_random(30, 8, 0.2, 50, 8)));
  const auto full = gen_random(6, 5, 1.0, 3, 1);
  CHECK(full.num_edges() == 30);
  CHECK(gen_random(40, 6, 0.3, 1, 2).unit_weights());
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto sparse = gen_random(50, 10, 0.01, 4, seed);
    for (int u = 0; u < sparse.num_jobs(); ++u) CHECK(sparse.job_degree(u) >= 1);
    const auto exact = gen_random_edges(50, 10, 50 + static_cast<std::int64_t>(seed) * 9, 4, seed);
    CHECK(exact.num_edges() == 50 + static_cast<int>(seed) * 9);
    for (const Edge& e : exact.edges()) CHECK((e.weight >= 1 && e.weight <= 4));
    const auto g = gen_random_graph(12, 0.05, seed, true);
    CHECK(testing::connected(g.num_vertices(), g.edges()));
  }
  CHECK_THROWS_AS(gen_random(0, 1, 0.5, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(gen_random(1, 1, 0.0, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(gen_random(1, 1, 0.5, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(gen_random_edges(5, 2, 11, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(gen_random_edges(5, 2, 4, 1, 0), std::invalid_argument);
}

TEST_CASE("uniform_below stays in range and hits every value") {
  Rng rng(5);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto x = uniform_below(rng, 7);
    REQUIRE(x < 7);
    ++hits[x];
  }
  for (int h : hits) CHECK(h > 800);
  CHECK_THROWS(uniform_below(rng, 0));
}

TEST_CASE("oracle examples") {
  CHECK(brute_force_semi_matching(testing::worked_example()).cost == 6);
  CHECK(brute_force_semi_matching(BipartiteInstance(2, 2, {{0, 0, 1}, {1, 0, 1}, {0, 1, 10}, {1, 1, 10}})).cost == 3);
  CHECK(brute_force_semi_matching(BipartiteInstance(1, 1, {{0, 0, 9}})).cost == 9);
  const SimpleGraph p4(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(brute_force_balanced_cover(p4).cost == 4);
  const SimpleGraph k3(3, {{0, 1}, {1, 2}, {0, 2}});
  const auto r = brute_force_balanced_cover(k3);
  CHECK(r.cost == 5);
  CHECK(r.cover.edges.size() == 2);
  CHECK(brute_force_balanced_cover(SimpleGraph(4, {{0, 1}, {0, 2}, {0, 3}})).cost == 9);
  CHECK_THROWS_AS(brute_force_balanced_cover(SimpleGraph(3, {{0, 1}})), InfeasibleCover);
  CHECK_THROWS_AS(brute_force_semi_matching(gen_random(30, 5, 1.0, 1, 0)), OracleTooLarge);
}

TEST_CASE("oracles agree with the test references") {
  std::mt19937_64 rng(12);
  for (int it = 0; it < 200; ++it) {
    const auto in = gen_random(1 + static_cast<int>(rng() % 6), 1 + static_cast<int>(rng() % 4), 0.5, 10, rng());
    CHECK(brute_force_semi_matching(in).cost == testing::reference_optimum(in));
    const auto square = uniform_convex_cost(in, [](std::int64_t k) { return k * k; });
    const auto best = brute_force_convex(in, square);
    CHECK(best.cost == testing::reference_convex_optimum(in, [](int k) { return Cost{k} * k; }));
    CHECK(convex_cost(in, best.matching, square) == best.cost);
  }
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = gen_random_graph(6, 0.4, seed, true);
    CHECK(brute_force_balanced_cover(g).cost == testing::reference_cover_optimum(g));
  }
}

TEST_CASE("bench plans") {
  BenchPlan plan;
  plan.solvers = {"weighted", "baseline"};
  for (std::uint64_t seed = 0; seed < 20; ++seed) plan.cases.push_back(BenchCase{30, 8, 90, 20, seed});
  const auto records = run_bench(plan, 1);
  REQUIRE(records.size() == 40);
  for (std::size_t i = 0; i < records.size(); i += 2) {
    CHECK(records[i].cost == records[i + 1].cost);
    CHECK(records[i].solver == "weighted");
    CHECK(records[i].params.seed == records[i + 1].params.seed);
    CHECK(records[i].group_relaxations.has_value());
  }
  const auto threaded = run_bench(plan, 3);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(threaded[i].cost == records[i].cost);
    CHECK(threaded[i].solver == records[i].solver);
  }

  BenchPlan unit;
  unit.solvers = {"unweighted"};
  unit.cases.push_back(BenchCase{40, 8, 120, 1, 3});
  const auto u = run_bench(unit, 1);
  REQUIRE(u.size() == 1);
  CHECK(u[0].cancel_rounds_max.has_value());
  CHECK(u[0].recursion_depth.has_value());

  CHECK(bench_csv({}) == std::string(kBenchCsvHeader) + "\n");
  const std::string csv = bench_csv(u);
  const std::string row = csv.substr(csv.find('\n') + 1);
  CHECK(std::count(row.begin(), row.end(), ',') == 11);

  BenchPlan bad = unit;
  bad.cases[0].max_weight = 5;
  CHECK_THROWS_AS(run_bench(bad, 1), std::invalid_argument);
  bad.solvers = {"fastest"};
  CHECK_THROWS_AS(run_bench(bad, 1), std::invalid_argument);
}

TEST_CASE("bench thread default from the environment") {
  setenv(kBenchThreadsEnv, "4", 1);
  CHECK(default_bench_threads() == 4);
  setenv(kBenchThreadsEnv, "zero", 1);
  CHECK(default_bench_threads() == 1);
  unsetenv(kBenchThreadsEnv);
  CHECK(default_bench_threads() == 1);
}

#ifdef SEMIMATCH_CLI
namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("semimatch_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
  std::string read(const std::string& name) const {
    std::ifstream in(path / name);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }
};

int run(const std::string& args) {
  const std::string cmd = std::string(SEMIMATCH_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("cli exit codes") {
  TempDir dir;
  const auto example = dir.write("example.txt", emit_instance(testing::worked_example()));
  const auto out = (dir.path / "sol.txt").string();
  CHECK(run("solve " + example + " -o " + out) == 0);
  CHECK(parse_assignment(dir.read("sol.txt"), 4).cost == 6);
  CHECK(run("verify " + example + " " + out + " --optimal") == 0);
  CHECK(run("solve --unweighted " + example) == 0);
  CHECK(run("solve --solver baseline " + example) == 0);
  CHECK(run("solve --convex square " + example + " -o " + out) == 0);
  CHECK(parse_assignment(dir.read("sol.txt"), 4).cost == 8);
  CHECK(run("solve --convex poly:0,1 " + example) == 0);

  const auto worse = dir.write("worse.txt", "a 1 1\na 2 2\na 3 2\na 4 2\ncost 7\n");
  CHECK(run("verify " + example + " " + worse) == 0);
  CHECK(run("verify " + example + " " + worse + " --optimal") == 4);
  const auto lying = dir.write("lying.txt", "a 1 1\na 2 1\na 3 2\na 4 2\ncost 5\n");
  CHECK(run("verify " + example + " " + lying) == 4);
  const auto non_edge = dir.write("nonedge.txt", "a 1 2\na 2 1\na 3 2\na 4 2\n");
  CHECK(run("verify " + example + " " + non_edge) == 4);

  CHECK(run("solve " + dir.write("bad.txt", "p semimatch 1 1 1\ne 1 2 1\n")) == 2);
  CHECK(run("solve " + dir.write("iso.txt", "p semimatch 2 1 1\ne 1 1 1\n")) == 3);
  CHECK(run("solve " + dir.write("isov.txt", "p cover 3 1\ne 1 2\n")) == 3);
  CHECK(run("solve " + (dir.path / "missing.txt").string()) == 1);
  CHECK(run("solve") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("solve --unweighted " + dir.write("w.txt", "p semimatch 1 1 1\ne 1 1 3\n")) == 1);

  const auto graph = dir.write("p4.txt", "p cover 4 3\ne 1 2\ne 2 3\ne 3 4\n");
  CHECK(run("solve " + graph + " -o " + out) == 0);
  CHECK(dir.read("sol.txt").find("cost 4") != std::string::npos);
  CHECK(run("verify " + graph + " " + out + " --optimal") == 0);
  CHECK(run("oracle " + graph) == 0);
  CHECK(run("oracle " + example) == 0);

  CHECK(run("gen --jobs 5 --machines 3 --seed 4 -o " + out) == 0);
  CHECK(parse_instance(dir.read("sol.txt")).num_jobs() == 5);
  CHECK(run("gen --vertices 6 --connected --seed 2 -o " + out) == 0);
  CHECK(parse_graph(dir.read("sol.txt")).num_vertices() == 6);
  CHECK(run("bench --jobs 20 --machines 5 --edges 40 --seeds 2 -o " + out) == 0);
  CHECK(dir.read("sol.txt").starts_with(kBenchCsvHeader));
}
#endif
