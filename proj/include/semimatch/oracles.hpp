#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "semimatch/edge_cover.hpp"
#include "semimatch/instance.hpp"
#include "semimatch/matching.hpp"

namespace semimatch {

class OracleTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::int64_t kEnumerationLimit = 1'000'000;
inline constexpr int kCoverEdgeLimit = 24;

/// Product of job degrees, saturated just above kEnumerationLimit.
std::int64_t enumeration_size(const BipartiteInstance& instance);

struct OracleSemiMatching {
  Cost cost = 0;
  SemiMatching matching;
};

/// Exhaustive search over every job's choice of machine. Throws
/// OracleTooLarge when enumeration_size exceeds kEnumerationLimit.
OracleSemiMatching brute_force_semi_matching(const BipartiteInstance& instance);
/// Same enumeration, scoring sum_v f_v(load).
OracleSemiMatching brute_force_convex(const BipartiteInstance& instance,
                                      std::span<const ConvexMachineCost> costs);

struct OracleCover {
  Cost cost = 0;
  EdgeCover cover;
};

/// Best edge cover under f(k) = k(k+1)/2 over all edge subsets. Throws
/// OracleTooLarge above kCoverEdgeLimit edges, InfeasibleCover on isolated
/// vertices.
OracleCover brute_force_balanced_cover(const SimpleGraph& graph);

}  // namespace semimatch
