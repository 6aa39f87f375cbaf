#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "lpdec/codes.hpp"

namespace lpdec {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// log(e^a + e^b) that treats -inf as an exact zero and drops terms below e^-40 of the larger.
inline double log_add(double a, double b) noexcept {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    if (a < b) std::swap(a, b);
    const double d = b - a;
    return d < -40.0 ? a : a + std::log1p(std::exp(d));
}

/// Forward and backward log-domain sums over the syndrome trellis.
///
/// Row k+1 of `forward` holds E(k, s) for k = -1..n-1; row k+1 of `backward`
/// holds the suffix sums over positions k+1..n-1.
struct TrellisTables {
    int n = 0;
    int states = 0;
    std::vector<double> forward;
    std::vector<double> backward;

    double fwd(int k, std::uint32_t s) const { return forward[static_cast<std::size_t>((k + 1) * states) + s]; }
    double bwd(int k, std::uint32_t s) const { return backward[static_cast<std::size_t>((k + 1) * states) + s]; }
};

/// Per-position log A_k and log B_k for one local code or coset.
///
/// log_a[k] sums exp(-K sum_{i != k} u_i g_i) over words with g_k = 1, log_b[k] over
/// words with g_k = 0. A side with no words is -inf and its position is listed in
/// `degenerate`.
struct ABValues {
    std::vector<double> log_a;
    std::vector<double> log_b;
    double log_z = kNegInf;  ///< log of the full partition sum
    std::vector<int> degenerate;
};

/// Reusable buffers; one per thread.
class TrellisWorkspace {
public:
    void build_tables(const ConstituentCode& code, std::span<const double> u, double K, TrellisTables& out);
    void compute_ab(const ConstituentCode& code, std::span<const double> u, double K, ABValues& out);
    /// min over (coset) codewords of sum u_i g_i, +inf for an empty coset.
    double local_min(const ConstituentCode& code, std::span<const double> u);

private:
    TrellisTables tables_;
    std::vector<double> cur_, next_;
};

ABValues compute_ab(const ConstituentCode& code, std::span<const double> u, double K);
TrellisTables build_tables(const ConstituentCode& code, std::span<const double> u, double K);
double local_dual_min(const ConstituentCode& code, std::span<const double> u);

/// D(u) = sum over constraints of the local minimum; `u` is edge-indexed.
double dual_objective(const TannerGraph& graph, std::span<const double> u);

/// Smoothed dual: sum over constraints of -(1/K) log Z_j(u).
double smoothed_dual_objective(const TannerGraph& graph, std::span<const double> u, double K);

}  // namespace lpdec
