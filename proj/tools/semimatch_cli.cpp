#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "semimatch/bench.hpp"
#include "semimatch/cost_center_network.hpp"
#include "semimatch/edge_cover.hpp"
#include "semimatch/exploded_baseline.hpp"
#include "semimatch/generators.hpp"
#include "semimatch/io.hpp"
#include "semimatch/oracles.hpp"
#include "semimatch/weighted_solver.hpp"

namespace sm = semimatch;

namespace {

enum Exit { kOk = 0, kUsage = 1, kMalformed = 2, kInfeasible = 3, kMismatch = 4 };

struct Failure {
  int code;
  std::string message;
};

std::string slurp(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kUsage, "cannot open " + path};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kUsage, "cannot write " + path};
  out << text;
}

// triangular, square, linear, or poly:c1,c2,... for f(k) = c1 k + c2 k^2 + ...
std::function<sm::Cost(std::int64_t)> convex_function(const std::string& name) {
  if (name == "triangular") return [](std::int64_t k) { return sm::triangular(k); };
  if (name == "square") return [](std::int64_t k) { return k * k; };
  if (name == "linear") return [](std::int64_t k) { return k; };
  if (name.rfind("poly:", 0) == 0) {
    std::vector<sm::Cost> coeffs;
    std::stringstream in(name.substr(5));
    std::string item;
    while (std::getline(in, item, ',')) {
      try {
        std::size_t used = 0;
        coeffs.push_back(std::stoll(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw Failure{kUsage, "bad coefficient '" + item + "' in " + name};
      }
    }
    if (coeffs.empty()) throw Failure{kUsage, "poly: needs at least one coefficient"};
    return [coeffs](std::int64_t k) {
      sm::Cost total = 0;
      sm::Cost power = 1;
      for (sm::Cost c : coeffs) {
        power = sm::checked_mul(power, k);
        total = sm::checked_add(total, sm::checked_mul(c, power));
      }
      return total;
    };
  }
  throw Failure{kUsage, "unknown convex cost '" + name + "'"};
}

struct SolveOptions {
  std::string input;
  std::string output;
  bool weighted = false;
  bool unweighted = false;
  std::string convex;
  bool cover = false;
  std::string solver = "fast";
};

int run_solve(const SolveOptions& o) {
  auto parsed = sm::parse_file(slurp(o.input));
  if (auto* graph = std::get_if<sm::SimpleGraph>(&parsed)) {
    if (o.weighted || o.unweighted || !o.convex.empty()) throw Failure{kUsage, "cover files only support --cover"};
    const auto result = sm::find_center(*graph);
    write_out(o.output, sm::emit_cover(*graph, result.cover));
    return kOk;
  }
  const auto& instance = std::get<sm::BipartiteInstance>(parsed);
  if (o.cover) throw Failure{kUsage, "--cover needs a 'p cover' file"};
  if (!o.convex.empty()) {
    const auto costs = sm::uniform_convex_cost(instance, convex_function(o.convex));
    const auto m = sm::solve_convex(instance, costs);
    write_out(o.output, sm::emit_assignment(m, sm::convex_cost(instance, m, costs)));
    return kOk;
  }
  sm::SemiMatching m;
  if (o.solver == "baseline") {
    m = sm::solve_exploded_baseline(instance);
  } else if (o.unweighted) {
    if (!instance.unit_weights()) throw Failure{kUsage, "--unweighted needs every weight to be 1"};
    m = sm::solve_unweighted(instance);
  } else {
    m = sm::solve_weighted(instance);
  }
  write_out(o.output, sm::emit_assignment(m, sm::cost_of_semi_matching(instance, m)));
  return kOk;
}

struct VerifyOptions {
  std::string input;
  std::string solution;
  std::string convex;
  bool optimal = false;
};

int run_verify(const VerifyOptions& o) {
  auto parsed = sm::parse_file(slurp(o.input));
  const std::string text = slurp(o.solution);
  if (auto* graph = std::get_if<sm::SimpleGraph>(&parsed)) {
    const auto claimed = sm::parse_cover(text, *graph);
    const auto cover = sm::make_cover(*graph, claimed.edge_ids);
    if (!sm::is_edge_cover(*graph, cover)) throw Failure{kMismatch, "not an edge cover"};
    const sm::Cost cost = sm::balanced_cover_cost(cover);
    if (claimed.cost && *claimed.cost != cost) {
      throw Failure{kMismatch, "claimed cost " + std::to_string(*claimed.cost) + ", actual " + std::to_string(cost)};
    }
    if (o.optimal) {
      const sm::Cost best = sm::balanced_cover_cost(sm::find_center(*graph).cover);
      if (best != cost) throw Failure{kMismatch, "cost " + std::to_string(cost) + " is not optimal (" + std::to_string(best) + ")"};
    }
    std::cout << "ok cost " << cost << "\n";
    return kOk;
  }
  const auto& instance = std::get<sm::BipartiteInstance>(parsed);
  const auto claimed = sm::parse_assignment(text, instance.num_jobs());
  if (const auto violation = sm::validate_semi_matching(instance, claimed.matching)) {
    throw Failure{kMismatch, violation->message};
  }
  sm::Cost cost = 0;
  sm::Cost best = 0;
  if (!o.convex.empty()) {
    const auto costs = sm::uniform_convex_cost(instance, convex_function(o.convex));
    cost = sm::convex_cost(instance, claimed.matching, costs);
    if (o.optimal) best = sm::convex_cost(instance, sm::solve_convex(instance, costs), costs);
  } else {
    cost = sm::cost_of_semi_matching(instance, claimed.matching);
    if (o.optimal) best = sm::cost_of_semi_matching(instance, sm::solve_weighted(instance));
  }
  if (claimed.cost && *claimed.cost != cost) {
    throw Failure{kMismatch, "claimed cost " + std::to_string(*claimed.cost) + ", actual " + std::to_string(cost)};
  }
  if (o.optimal && best != cost) {
    throw Failure{kMismatch, "cost " + std::to_string(cost) + " is not optimal (" + std::to_string(best) + ")"};
  }
  std::cout << "ok cost " << cost << "\n";
  return kOk;
}

struct GenOptions {
  int jobs = 10;
  int machines = 5;
  double prob = 0.3;
  std::int64_t edges = 0;
  sm::Weight max_weight = 10;
  std::uint64_t seed = 1;
  int vertices = 0;
  bool connected = false;
  std::string output;
};

int run_gen(const GenOptions& o) {
  if (o.vertices > 0) {
    write_out(o.output, sm::emit_graph(sm::gen_random_graph(o.vertices, o.prob, o.seed, o.connected)));
  } else if (o.edges > 0) {
    write_out(o.output, sm::emit_instance(sm::gen_random_edges(o.jobs, o.machines, o.edges, o.max_weight, o.seed)));
  } else {
    write_out(o.output, sm::emit_instance(sm::gen_random(o.jobs, o.machines, o.prob, o.max_weight, o.seed)));
  }
  return kOk;
}

struct BenchOptions {
  int jobs = 100;
  int machines = 20;
  std::int64_t edges = 500;
  sm::Weight max_weight = 10;
  std::uint64_t seed = 1;
  int seeds = 5;
  std::vector<std::string> solvers{"weighted", "baseline"};
  int threads = 0;
  std::string output;
};

int run_bench(const BenchOptions& o) {
  sm::BenchPlan plan;
  plan.solvers = o.solvers;
  for (int i = 0; i < o.seeds; ++i) {
    plan.cases.push_back(sm::BenchCase{o.jobs, o.machines, o.edges, o.max_weight, o.seed + static_cast<std::uint64_t>(i)});
  }
  const int threads = o.threads > 0 ? o.threads : sm::default_bench_threads();
  write_out(o.output, sm::bench_csv(sm::run_bench(plan, threads)));
  return kOk;
}

struct OracleOptions {
  std::string input;
  std::string convex;
  std::string output;
};

int run_oracle(const OracleOptions& o) {
  auto parsed = sm::parse_file(slurp(o.input));
  if (auto* graph = std::get_if<sm::SimpleGraph>(&parsed)) {
    write_out(o.output, sm::emit_cover(*graph, sm::brute_force_balanced_cover(*graph).cover));
    return kOk;
  }
  const auto& instance = std::get<sm::BipartiteInstance>(parsed);
  if (!o.convex.empty()) {
    const auto costs = sm::uniform_convex_cost(instance, convex_function(o.convex));
    const auto best = sm::brute_force_convex(instance, costs);
    write_out(o.output, sm::emit_assignment(best.matching, best.cost));
  } else {
    const auto best = sm::brute_force_semi_matching(instance);
    write_out(o.output, sm::emit_assignment(best.matching, best.cost));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal semi-matchings and balanced edge covers"};
  app.require_subcommand(1);

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance or cover graph");
  solve_cmd->add_option("input", solve.input, "Instance file, - for stdin")->required();
  solve_cmd->add_option("-o,--output", solve.output, "Output file (default stdout)");
  auto* w = solve_cmd->add_flag("--weighted", solve.weighted, "Weighted solver (default)");
  auto* u = solve_cmd->add_flag("--unweighted", solve.unweighted, "Unit-weight solver");
  auto* c = solve_cmd->add_option("--convex", solve.convex, "Convex machine cost: triangular|square|linear|poly:c1,c2,...");
  auto* cv = solve_cmd->add_flag("--cover", solve.cover, "Balanced edge cover");
  w->excludes(u, c, cv);
  u->excludes(c, cv);
  c->excludes(cv);
  solve_cmd->add_option("--solver", solve.solver, "fast or baseline")->check(CLI::IsMember({"fast", "baseline"}));

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check a solution against an instance");
  verify_cmd->add_option("input", verify.input, "Instance file")->required();
  verify_cmd->add_option("solution", verify.solution, "Solution file")->required();
  verify_cmd->add_option("--convex", verify.convex, "Score with a convex machine cost");
  verify_cmd->add_flag("--optimal", verify.optimal, "Also require an optimal cost");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--jobs", gen.jobs);
  gen_cmd->add_option("--machines", gen.machines);
  gen_cmd->add_option("--prob", gen.prob, "Edge probability");
  gen_cmd->add_option("--edges", gen.edges, "Exact edge count (overrides --prob)");
  gen_cmd->add_option("--max-weight", gen.max_weight);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--vertices", gen.vertices, "Emit a cover graph on this many vertices");
  gen_cmd->add_flag("--connected", gen.connected, "Cover graph: force connectivity");
  gen_cmd->add_option("-o,--output", gen.output);

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run solvers on generated instances, print CSV");
  bench_cmd->add_option("--jobs", bench.jobs);
  bench_cmd->add_option("--machines", bench.machines);
  bench_cmd->add_option("--edges", bench.edges);
  bench_cmd->add_option("--max-weight", bench.max_weight);
  bench_cmd->add_option("--seed", bench.seed, "First seed");
  bench_cmd->add_option("--seeds", bench.seeds, "Number of consecutive seeds");
  bench_cmd->add_option("--solvers", bench.solvers, "unweighted, weighted, baseline")->delimiter(',');
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (default from SEMIMATCH_BENCH_THREADS)");
  bench_cmd->add_option("-o,--output", bench.output);

  OracleOptions oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive optimum of a small instance");
  oracle_cmd->add_option("input", oracle.input)->required();
  oracle_cmd->add_option("--convex", oracle.convex);
  oracle_cmd->add_option("-o,--output", oracle.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve_cmd) return run_solve(solve);
    if (*verify_cmd) return run_verify(verify);
    if (*gen_cmd) return run_gen(gen);
    if (*bench_cmd) return run_bench(bench);
    if (*oracle_cmd) return run_oracle(oracle);
  } catch (const Failure& f) {
    std::cerr << "semimatch: " << f.message << "\n";
    return f.code;
  } catch (const sm::ParseError& e) {
    std::cerr << "semimatch: malformed input: " << e.what() << "\n";
    return kMalformed;
  } catch (const sm::InstanceError& e) {
    std::cerr << "semimatch: " << (e.infeasible() ? "infeasible: " : "malformed input: ") << e.what() << "\n";
    return e.infeasible() ? kInfeasible : kMalformed;
  } catch (const sm::GraphError& e) {
    std::cerr << "semimatch: malformed input: " << e.what() << "\n";
    return kMalformed;
  } catch (const sm::InfeasibleCover& e) {
    std::cerr << "semimatch: infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const sm::BenchDisagreement& e) {
    std::cerr << "semimatch: solvers disagree: " << e.what() << "\n";
    return kMismatch;
  } catch (const std::exception& e) {
    std::cerr << "semimatch: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
