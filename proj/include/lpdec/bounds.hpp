#pragma once

#include <string>
#include <vector>

#include "lpdec/codes.hpp"
#include "lpdec/lpdecode.hpp"
#include "lpdec/polytope.hpp"

namespace lpdec {

inline constexpr int kMaxOddSetDegree = 16;

/// One solved branch. `kind` is "codeword" (forced local codeword), "pair" (two forced local
/// codewords), "box" (c_i = 1) or "facet" (penalised facet of constraint r).
struct BranchRecord {
    std::string kind;
    int r = 0;
    long branch = 0;
    double lower = 0.0;
    double upper = 0.0;
    long iterations = 0;
    bool infeasible = false;
};

struct DistanceBoundReport {
    double l_min_lower = 0.0;
    double l_min_upper = 0.0;
    std::vector<BranchRecord> per_check;
    long total_iterations = 0;
    double seconds = 0.0;
};

struct FracBoundReport {
    double d_frac_box = 0.0;
    double d_frac_diag = 0.0;
    double d_frac_B = 0.0;
    double B = 0.0;
    std::vector<BranchRecord> branches;
    long total_iterations = 0;
    double seconds = 0.0;
};

struct BarReport {
    double level = 0.0;            ///< highest attainable level found
    double l_min_lower = 0.0;
    std::vector<double> tested;    ///< levels in the order they were tried
    std::vector<bool> attainable;
    long refinements = 0;          ///< pairwise-forced solves performed
};

struct BoundsOptions {
    int threads = 0;
    DecodeOptions decode;
};

/// Lower bound on d_min and upper bound on d_frac by forcing every nonzero local codeword.
/// Both bounds are in units of full Hamming weight (the forced weight is included).
DistanceBoundReport min_distance_bounds(const TannerGraph& graph, const ScheduleParams& sched,
                                        const BoundsOptions& opts = {});

/// Bisection for the highest level certified by pairwise refinement of failing branches.
BarReport bar_method(const TannerGraph& graph, const ScheduleParams& sched, double bar_lo, double bar_hi,
                     int bisect_steps, const BoundsOptions& opts = {});
/// As above, reusing branch results from min_distance_bounds on the same graph and schedule.
BarReport bar_method(const TannerGraph& graph, const DistanceBoundReport& base, const ScheduleParams& sched,
                     double bar_lo, double bar_hi, int bisect_steps, const BoundsOptions& opts = {});

/// Penalty lower bound on the fractional distance of a plain LDPC code; eps0 starts at 0.1 / B.
FracBoundReport frac_distance_lower(const TannerGraph& graph, double B, const ScheduleParams& sched,
                                    const BoundsOptions& opts = {});

/// Experimental: the same penalty scheme over arbitrary facet systems, one per constraint
/// (facets[j] describes the polytope of constraint j's local code in its column order).
/// Box facets c_i <= 1 are handled by forcing; facets through the origin are skipped.
FracBoundReport frac_distance_lower_facets(const TannerGraph& graph, const std::vector<FacetSystem>& facets,
                                           double B, const ScheduleParams& sched,
                                           const BoundsOptions& opts = {});

/// kind,r,branch,lower,upper,iterations rows followed by one summary row.
std::string branches_csv(const std::vector<BranchRecord>& rows, double summary_lower, double summary_upper,
                         long summary_iterations);

}  // namespace lpdec
