#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lpdec/codes.hpp"

namespace lpdec {

inline constexpr int kMaxMergedSupport = 24;
inline constexpr std::size_t kMaxMergedCodewords = std::size_t{1} << 16;

/// A simple cycle v0, c0, v1, c1, ... of the Tanner graph (variables and constraints alternate).
///
/// The smallest variable comes first and, of the two traversal directions, the
/// lexicographically smaller sequence is kept.
struct Cycle {
    std::vector<int> vars;
    std::vector<int> checks;  ///< checks[t] joins vars[t] and vars[t + 1] (cyclically)

    int length() const noexcept { return 2 * static_cast<int>(vars.size()); }
};

struct CycleList {
    std::vector<Cycle> cycles;
};

struct MergePlan {
    std::vector<std::vector<int>> groups;
    bool keep_originals = true;
};

/// Every simple cycle of length at most `max_len` (4, 6 or 8), each reported once.
CycleList find_short_cycles(const TannerGraph& graph, int max_len);

/// One group per cycle: its constraints, sorted.
MergePlan plan_from_cycles(const CycleList& cycles);

/// The local code on the union of the group's supports whose restriction to every member
/// lies in that member's code. `support` receives the sorted union.
CodePtr merged_code(const TannerGraph& graph, std::span<const int> group, std::vector<int>& support);

/// Appends one merged constraint per distinct group result; originals kept when requested.
TannerGraph merge_constraints(const TannerGraph& graph, const MergePlan& plan);

/// Membership of c in the fundamental polytope of a plain LDPC graph (box plus odd-set rows).
bool polytope_membership(const TannerGraph& graph, std::span<const double> c, double tol);

}  // namespace lpdec
