#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "lpdec/codes.hpp"
#include "lpdec/trellis.hpp"

namespace lpdec {

/// Surrogate for v when one side of a local partition sum is empty.
inline constexpr double kVMax = 1e6;

/// Annealing schedule: K grows and eps0 shrinks by `growth` after each round.
struct ScheduleParams {
    double K0 = 1000.0;
    double eps0_init = 0.01;
    double growth = 1.26;
    int rounds = 10;
    long max_iters_per_round = 0;  ///< 0 selects 2000 * N

    void validate() const;
    double final_K() const;
    double final_eps0() const;
    long iteration_cap(int n_vars) const;
};

enum class PickRule { Fifo, Random };

/// How the shrink parameter eps for the primal point is chosen.
enum class EpsilonRule {
    /// Smallest value the terminal disagreement max_i eps_i allows (never above 1/eta).
    Adaptive,
    /// Final-round eps0, capped at 1/eta.
    ScheduleFloor,
    /// Smallest shrink up to the adaptive one whose point satisfies every odd-set inequality.
    /// Graphs with a constraint other than a single parity row use the adaptive shrink.
    Tight,
};

struct DecodeOptions {
    PickRule pick = PickRule::Fifo;
    std::uint64_t seed = 0;
    EpsilonRule eps_rule = EpsilonRule::Tight;
    double cert_tol = 1e-4;
    /// Overrides the eta derived from the constituent codes.
    std::optional<double> eta;
};

struct DecodeResult {
    std::vector<double> lam_tilde;
    std::vector<double> lam;
    std::vector<double> u_final;
    std::vector<std::uint8_t> c_hat;
    double primal_value = 0.0;
    double dual_value = 0.0;
    bool ml_certificate = false;
    bool converged = true;
    long iterations = 0;
    double eta = 0.0;
    double eps = 0.0;
    double eps_max = 0.0;  ///< largest per-variable disagreement at termination
    double final_K = 0.0;
    double final_eps0 = 0.0;

    double gap() const { return primal_value - dual_value; }
};

/// Dual coordinate-ascent state over one Tanner graph.
class DecoderState {
public:
    /// Sets u_{i,j} = gamma_i / |N_i| and derives v, lambda, eps and the active set.
    DecoderState(const TannerGraph& graph, std::span<const double> gamma, double K, double eps0);

    /// Switches to a new (K, eps0) pair keeping u, and recomputes everything else.
    void rescale(double K, double eps0);

    /// One coordinate update on variable k; k must be active.
    void iterate_once(int k);

    bool is_active(int k) const { return eps_node_[static_cast<std::size_t>(k)] >= eps0_; }
    bool any_active() const;
    /// Next variable to update, or -1 when the active set is empty.
    int pick(PickRule rule, std::mt19937_64& rng);

    const TannerGraph& graph() const noexcept { return *graph_; }
    std::span<const double> u() const noexcept { return u_; }
    std::span<const double> v() const noexcept { return v_; }
    std::span<const double> lam_edge() const noexcept { return lam_edge_; }
    std::span<const double> lam_node() const noexcept { return lam_node_; }
    std::span<const double> eps_node() const noexcept { return eps_node_; }
    double K() const noexcept { return K_; }
    double eps0() const noexcept { return eps0_; }
    const std::vector<int>& degenerate_edges() const noexcept { return degenerate_; }

private:
    void refresh_check(int j, int skip_edge);
    void refresh_node(int i);
    void mark(int i);

    const TannerGraph* graph_;
    std::vector<double> gamma_;
    double K_, eps0_;
    std::vector<double> u_, v_, lam_edge_, lam_node_, eps_node_;
    std::deque<int> queue_;
    std::vector<char> queued_;
    std::vector<int> active_list_, active_pos_;
    std::vector<int> degenerate_;
    std::vector<long> seen_;
    long stamp_ = 0;
    TrellisWorkspace ws_;
    ABValues ab_;
};

/// Runs the annealed coordinate ascent and recovers a primal-feasible point.
DecodeResult decode(const TannerGraph& graph, std::span<const double> gamma, const ScheduleParams& sched,
                    const DecodeOptions& opts = {});

/// sum_i gamma_i c_i
double primal_value(std::span<const double> gamma, std::span<const double> c);

/// eps for the primal recovery under `rule`.
double recovery_epsilon(EpsilonRule rule, double eta, double final_eps0, double eps_max);

/// Pulls lambda towards 1/2 by eta * eps so that it lies inside the fundamental polytope.
std::vector<double> shrink_towards_center(std::span<const double> lam, double eta, double eps);

/// Whether `x` satisfies the box and odd-set inequalities of every constraint, each violated by at
/// most `tol`. Returns nullopt when some constraint has more than one parity row.
std::optional<bool> in_parity_polytope(const TannerGraph& graph, std::span<const double> x, double tol = 0.0);

}  // namespace lpdec
