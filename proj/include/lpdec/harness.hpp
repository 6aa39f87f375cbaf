#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpdec/codes.hpp"
#include "lpdec/lpdecode.hpp"
#include "lpdec/polytope.hpp"
#include "lpdec/trellis.hpp"

namespace lpdec {

inline constexpr int kMaxOracleDimension = 20;

enum class DecoderKind { Lp, LpMerged, Bp };

std::string decoder_name(DecoderKind kind);
/// Accepts "lp", "lp-merged" and "bp".
DecoderKind parse_decoder(const std::string& name);

struct SimConfig {
    double p = 0.05;
    long trials = 100;
    long first_trial = 0;  ///< trial indices run from here, so a long run can be split into pieces
    std::uint64_t seed = 1;
    DecoderKind decoder = DecoderKind::Lp;
    int max_bp_iters = 100;
    int max_cycle_len = 6;  ///< cycles merged by lp-merged
    int threads = 0;

    void validate() const;
};

struct SimResult {
    double p = 0.0;
    std::string decoder;
    long word_errors = 0;
    long trials = 0;
    double wer = 0.0;
    double std_error = 0.0;
    double ml_cert_rate = 0.0;  ///< 0 for BP
    double mean_iterations = 0.0;
};

/// The channel flips of trial `trial` under `seed`; identical for every decoder.
std::vector<std::uint8_t> channel_draw(int n, double p, std::uint64_t seed, long trial);

/// Transmits the all-zero word over a BSC and counts decoded words that are not all-zero.
SimResult simulate(const TannerGraph& graph, const SimConfig& config, const ScheduleParams& sched,
                   const DecodeOptions& decode_opts = {});

std::string simulation_csv_header();
std::string simulation_csv_row(const SimResult& r);

struct BpResult {
    std::vector<std::uint8_t> bits;
    int iterations = 0;
    bool converged = false;
};

/// Sum-product decoding with a flooding schedule; a bit is 1 iff its posterior LLR is negative.
BpResult bp_decode(const TannerGraph& graph, std::span<const double> gamma, int max_iters);

struct MlResult {
    std::vector<std::uint8_t> codeword;
    double value = 0.0;
};

/// Exhaustive minimisation of gamma . c over the code; ties go to the lexicographically smallest word.
MlResult oracle_ml(const TannerGraph& graph, std::span<const double> gamma);

/// Minimum weight of a nonzero codeword, or nullopt when the code is {0}.
std::optional<int> oracle_min_distance(const TannerGraph& graph);

/// Every codeword of the global code (dimension at most kMaxOracleDimension).
std::vector<std::vector<std::uint8_t>> oracle_codewords(const TannerGraph& graph);

struct FracDistanceResult {
    Rational value;
    std::vector<Rational> minimizer;  ///< a vertex of the polytope attaining `value`
    std::vector<std::int64_t> facet;  ///< the facet row (v0, v) the minimizer was found on
    std::size_t programs = 0;         ///< exact linear programs solved
};

/// Exact fractional distance of a small plain LDPC code: the minimum of sum c_i over every
/// facet of the fundamental polytope that avoids the origin, each solved as an exact rational
/// linear program. nullopt when the polytope has no nonzero vertex.
std::optional<FracDistanceResult> oracle_fractional_distance(const TannerGraph& graph);

/// Box and odd-set rows (v0, v) of the fundamental polytope of a plain LDPC graph.
FacetSystem fundamental_polytope_facets(const TannerGraph& graph);

/// A and B by direct summation over the codeword list (log domain, compensated).
ABValues oracle_ab(const ConstituentCode& code, std::span<const double> u, double K);
/// min over codewords of u . g; +inf for an empty coset.
double oracle_local_min(const ConstituentCode& code, std::span<const double> u);

/// Convex weights w_{j,g} per constraint, parallel to each code's codeword list.
struct LocalWeighting {
    std::vector<std::vector<Rational>> weights;
};

/// Exact decomposition of c into local convex combinations; nullopt when c is outside the
/// fundamental polytope.
std::optional<LocalWeighting> local_weighting(const TannerGraph& graph, std::span<const Rational> c);
/// Non-negativity, unit sums and marginals, checked exactly.
bool verify_local_weighting(const TannerGraph& graph, std::span<const Rational> c, const LocalWeighting& w);

/// Exact rational image of a double.
Rational to_rational(double x);

}  // namespace lpdec
