#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lpdec/codes.hpp"
#include "lpdec/lpdecode.hpp"

namespace lpdec {

/// A decoding problem after pinning variables and removing what the local codes determine.
///
/// Pinned and locally forced variables are substituted into coset syndromes, variables that
/// every codeword of some local code keeps equal (or complementary) are merged, and variables
/// left outside every constraint are set to their best value. Every surviving local code has
/// dual distance at least 3.
struct ReducedProblem {
    struct VarMap {
        int reduced = -1;  ///< index in the reduced graph, or -1 when the value is fixed
        bool flip = false;
        int fixed = -1;    ///< 0/1 when `reduced` is -1
        int loose = -1;    ///< group of variables outside every constraint, set by the objective
    };

    TannerGraph graph;
    std::vector<double> gamma;
    double offset = 0.0;
    bool infeasible = false;
    int n_original = 0;
    std::vector<VarMap> map;
    int n_loose = 0;

    /// Lifts a point of the reduced problem back to the original variables.
    std::vector<double> expand(std::span<const double> reduced) const;

    /// The same reduction under another objective on the original variables.
    ReducedProblem with_objective(std::span<const double> gamma) const;

    void apply_objective(std::span<const double> gamma);
};

/// `pins[i]` is -1 for a free variable, otherwise the forced value.
ReducedProblem reduce_problem(const TannerGraph& graph, std::span<const double> gamma,
                              std::span<const std::int8_t> pins);

/// Bracket [lower, upper] on min gamma . c over the fundamental polytope with the pins applied.
struct PinnedSolve {
    bool infeasible = false;
    double lower = kPosInf;
    double upper = kPosInf;
    long iterations = 0;
    bool converged = true;
    std::vector<double> point;  ///< primal point on the original variables
};

PinnedSolve solve_pinned(const TannerGraph& graph, std::span<const double> gamma,
                         std::span<const std::int8_t> pins, const ScheduleParams& sched,
                         const DecodeOptions& opts = {});

}  // namespace lpdec
