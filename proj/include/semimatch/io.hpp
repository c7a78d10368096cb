#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "semimatch/edge_cover.hpp"
#include "semimatch/instance.hpp"
#include "semimatch/matching.hpp"

namespace semimatch {

/// Text format, 1-based ids on disk:
///   c <comment>
///   p semimatch <jobs> <machines> <edges>     then  e <job> <machine> <weight>
///   p cover <vertices> <edges>                then  e <u> <v>
/// Solutions: "a <job> <machine>" (or "e <u> <v>" for covers) plus "cost <value>".
class ParseError : public std::runtime_error {
 public:
  enum class Kind {
    kMissingHeader,
    kMalformedHeader,
    kBadRecord,
    kCountMismatch,
    kIdOutOfRange,
    kNegativeWeight,
    kWeightOutOfRange,
    kDuplicateEdge,
    kSelfLoop,
  };
  ParseError(Kind kind, int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}
  Kind kind() const { return kind_; }
  /// 1-based line number; 0 when the problem is the file as a whole.
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

using ParsedFile = std::variant<BipartiteInstance, SimpleGraph>;

/// Either kind of file. Isolated jobs surface as InstanceError from the
/// instance constructor, not as ParseError.
ParsedFile parse_file(std::string_view text);
BipartiteInstance parse_instance(std::string_view text);
SimpleGraph parse_graph(std::string_view text);

std::string emit_instance(const BipartiteInstance& instance);
std::string emit_graph(const SimpleGraph& graph);

std::string emit_assignment(const SemiMatching& matching, Cost cost);
struct ParsedAssignment {
  SemiMatching matching;
  std::optional<Cost> cost;
};
/// Jobs missing from the text stay unassigned.
ParsedAssignment parse_assignment(std::string_view text, int num_jobs);

std::string emit_cover(const SimpleGraph& graph, const EdgeCover& cover);
struct ParsedCover {
  std::vector<int> edge_ids;
  std::optional<Cost> cost;
};
/// Edges must exist in `graph`.
ParsedCover parse_cover(std::string_view text, const SimpleGraph& graph);

}  // namespace semimatch
