#include "semimatch/io.hpp"

#include <charconv>
#include <climits>
#include <unordered_set>
#include <vector>

namespace semimatch {

namespace {

struct Line {
  int number;
  std::vector<std::string_view> tokens;
};

// Non-empty, non-comment lines split on blanks.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    pos = end + 1;
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
      const std::size_t start = i;
      while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t' && raw[i] != '\r') ++i;
      if (i > start) line.tokens.push_back(raw.substr(start, i - start));
    }
    if (line.tokens.empty() || line.tokens[0] == "c") continue;
    lines.push_back(std::move(line));
    if (end == text.size()) break;
  }
  return lines;
}

std::optional<std::int64_t> to_int(std::string_view token) {
  std::int64_t value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return value;
}

std::int64_t number(const Line& line, std::size_t k, ParseError::Kind kind, const char* what) {
  const auto v = to_int(line.tokens[k]);
  if (!v) {
    throw ParseError(kind, line.number, std::string("expected an integer ") + what + ", got '" +
                                            std::string(line.tokens[k]) + "'");
  }
  return *v;
}

int count(const Line& line, std::size_t k, const char* what) {
  const auto v = number(line, k, ParseError::Kind::kMalformedHeader, what);
  if (v < 0 || v > INT_MAX) {
    throw ParseError(ParseError::Kind::kMalformedHeader, line.number, std::string(what) + " out of range");
  }
  return static_cast<int>(v);
}

int id(const Line& line, std::size_t k, int limit, const char* what) {
  const auto v = number(line, k, ParseError::Kind::kBadRecord, what);
  if (v < 1 || v > limit) {
    throw ParseError(ParseError::Kind::kIdOutOfRange, line.number,
                     std::string(what) + " id " + std::string(line.tokens[k]) + " out of range 1.." +
                         std::to_string(limit));
  }
  return static_cast<int>(v - 1);
}

std::optional<Cost> cost_line(const Line& line) {
  if (line.tokens.size() != 2) throw ParseError(ParseError::Kind::kBadRecord, line.number, "cost line needs one value");
  return number(line, 1, ParseError::Kind::kBadRecord, "cost");
}

}  // namespace

ParsedFile parse_file(std::string_view text) {
  const auto lines = tokenize(text);
  if (lines.empty() || lines[0].tokens[0] != "p") {
    throw ParseError(ParseError::Kind::kMissingHeader, lines.empty() ? 0 : lines[0].number,
                     "expected a 'p' header line first");
  }
  const Line& header = lines[0];
  if (header.tokens.size() < 2 || (header.tokens[1] != "semimatch" && header.tokens[1] != "cover")) {
    throw ParseError(ParseError::Kind::kMalformedHeader, header.number, "unknown problem kind");
  }
  const bool weighted = header.tokens[1] == "semimatch";
  if (header.tokens.size() != (weighted ? 5u : 4u)) {
    throw ParseError(ParseError::Kind::kMalformedHeader, header.number,
                     weighted ? "expected 'p semimatch <jobs> <machines> <edges>'" : "expected 'p cover <vertices> <edges>'");
  }
  const int left = count(header, 2, weighted ? "job count" : "vertex count");
  const int right = weighted ? count(header, 3, "machine count") : left;
  const int declared = count(header, weighted ? 4 : 3, "edge count");

  std::vector<Edge> edges;
  std::vector<std::pair<int, int>> pairs;
  std::unordered_set<std::int64_t> seen;
  int last_line = header.number;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const Line& line = lines[k];
    last_line = line.number;
    if (line.tokens[0] == "p") throw ParseError(ParseError::Kind::kMalformedHeader, line.number, "second header line");
    if (line.tokens[0] != "e") {
      throw ParseError(ParseError::Kind::kBadRecord, line.number,
                       "unknown record '" + std::string(line.tokens[0]) + "'");
    }
    if (line.tokens.size() != (weighted ? 4u : 3u)) {
      throw ParseError(ParseError::Kind::kBadRecord, line.number,
                       weighted ? "expected 'e <job> <machine> <weight>'" : "expected 'e <u> <v>'");
    }
    if (static_cast<int>(edges.size() + pairs.size()) == declared) {
      throw ParseError(ParseError::Kind::kCountMismatch, line.number,
                       "more edges than the declared " + std::to_string(declared));
    }
    const int a = id(line, 1, left, weighted ? "job" : "vertex");
    const int b = id(line, 2, right, weighted ? "machine" : "vertex");
    if (weighted) {
      const auto w = number(line, 3, ParseError::Kind::kBadRecord, "weight");
      if (w < 0) throw ParseError(ParseError::Kind::kNegativeWeight, line.number, "negative weight");
      if (w >= kWeightLimit) throw ParseError(ParseError::Kind::kWeightOutOfRange, line.number, "weight >= 2^31");
      if (!seen.insert(static_cast<std::int64_t>(a) * right + b).second) {
        throw ParseError(ParseError::Kind::kDuplicateEdge, line.number, "duplicate edge");
      }
      edges.push_back(Edge{a, b, w});
    } else {
      if (a == b) throw ParseError(ParseError::Kind::kSelfLoop, line.number, "self loop");
      const std::int64_t key = static_cast<std::int64_t>(std::min(a, b)) * left + std::max(a, b);
      if (!seen.insert(key).second) throw ParseError(ParseError::Kind::kDuplicateEdge, line.number, "duplicate edge");
      pairs.emplace_back(a, b);
    }
  }
  if (static_cast<int>(edges.size() + pairs.size()) != declared) {
    throw ParseError(ParseError::Kind::kCountMismatch, last_line,
                     "declared " + std::to_string(declared) + " edges, found " +
                         std::to_string(edges.size() + pairs.size()));
  }
  if (weighted) return BipartiteInstance(left, right, std::move(edges));
  return SimpleGraph(left, std::move(pairs));
}

BipartiteInstance parse_instance(std::string_view text) {
  auto parsed = parse_file(text);
  if (auto* instance = std::get_if<BipartiteInstance>(&parsed)) return std::move(*instance);
  throw ParseError(ParseError::Kind::kMalformedHeader, 0, "expected a semimatch instance, got a cover graph");
}

SimpleGraph parse_graph(std::string_view text) {
  auto parsed = parse_file(text);
  if (auto* graph = std::get_if<SimpleGraph>(&parsed)) return std::move(*graph);
  throw ParseError(ParseError::Kind::kMalformedHeader, 0, "expected a cover graph, got a semimatch instance");
}

std::string emit_instance(const BipartiteInstance& instance) {
  std::string out = "p semimatch " + std::to_string(instance.num_jobs()) + " " +
                    std::to_string(instance.num_machines()) + " " + std::to_string(instance.num_edges()) + "\n";
  for (const Edge& e : instance.edges()) {
    out += "e " + std::to_string(e.job + 1) + " " + std::to_string(e.machine + 1) + " " + std::to_string(e.weight) + "\n";
  }
  return out;
}

std::string emit_graph(const SimpleGraph& graph) {
  std::string out = "p cover " + std::to_string(graph.num_vertices()) + " " + std::to_string(graph.num_edges()) + "\n";
  for (const auto& [a, b] : graph.edges()) out += "e " + std::to_string(a + 1) + " " + std::to_string(b + 1) + "\n";
  return out;
}

std::string emit_assignment(const SemiMatching& matching, Cost cost) {
  std::string out;
  for (int u = 0; u < matching.num_jobs(); ++u) {
    out += "a " + std::to_string(u + 1) + " " + std::to_string(matching.machine_of(u) + 1) + "\n";
  }
  out += "cost " + std::to_string(cost) + "\n";
  return out;
}

ParsedAssignment parse_assignment(std::string_view text, int num_jobs) {
  ParsedAssignment out{SemiMatching(num_jobs), std::nullopt};
  for (const Line& line : tokenize(text)) {
    if (line.tokens[0] == "cost") {
      out.cost = cost_line(line);
      continue;
    }
    if (line.tokens[0] != "a" || line.tokens.size() != 3) {
      throw ParseError(ParseError::Kind::kBadRecord, line.number, "expected 'a <job> <machine>'");
    }
    const int job = id(line, 1, num_jobs, "job");
    const int machine = id(line, 2, INT_MAX, "machine");
    if (out.matching.machine_of(job) != SemiMatching::kUnassigned) {
      throw ParseError(ParseError::Kind::kDuplicateEdge, line.number, "job assigned twice");
    }
    out.matching.assign(job, machine);
  }
  return out;
}

std::string emit_cover(const SimpleGraph& graph, const EdgeCover& cover) {
  std::string out;
  for (int e : cover.edges) {
    out += "e " + std::to_string(graph.edge(e).first + 1) + " " + std::to_string(graph.edge(e).second + 1) + "\n";
  }
  out += "cost " + std::to_string(balanced_cover_cost(cover)) + "\n";
  return out;
}

ParsedCover parse_cover(std::string_view text, const SimpleGraph& graph) {
  ParsedCover out;
  std::unordered_set<int> seen;
  for (const Line& line : tokenize(text)) {
    if (line.tokens[0] == "cost") {
      out.cost = cost_line(line);
      continue;
    }
    if (line.tokens[0] != "e" || line.tokens.size() != 3) {
      throw ParseError(ParseError::Kind::kBadRecord, line.number, "expected 'e <u> <v>'");
    }
    const int a = id(line, 1, graph.num_vertices(), "vertex");
    const int b = id(line, 2, graph.num_vertices(), "vertex");
    int found = -1;
    for (int e : graph.incident(a)) {
      if (graph.other(e, a) == b) found = e;
    }
    if (found < 0) throw ParseError(ParseError::Kind::kIdOutOfRange, line.number, "edge not in graph");
    if (!seen.insert(found).second) throw ParseError(ParseError::Kind::kDuplicateEdge, line.number, "duplicate edge");
    out.edge_ids.push_back(found);
  }
  return out;
}

}  // namespace semimatch
