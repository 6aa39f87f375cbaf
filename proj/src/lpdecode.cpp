#include "lpdec/lpdecode.hpp"

#include <algorithm>
#include <cmath>

namespace lpdec {

void ScheduleParams::validate() const {
    if (!(K0 > 0.0) || !std::isfinite(K0)) throw ParameterError("K0 must be positive");
    if (!(eps0_init > 0.0)) throw ParameterError("eps0 must be positive");
    if (!(growth > 1.0)) throw ParameterError("growth factor must exceed 1");
    if (rounds < 1) throw ParameterError("at least one annealing round is required");
    if (max_iters_per_round < 0) throw ParameterError("iteration cap must be non-negative");
}

double ScheduleParams::final_K() const { return K0 * std::pow(growth, rounds); }
double ScheduleParams::final_eps0() const { return eps0_init / std::pow(growth, rounds); }

long ScheduleParams::iteration_cap(int n_vars) const {
    return max_iters_per_round > 0 ? max_iters_per_round : 2000L * std::max(n_vars, 1);
}

namespace {

double logistic_weight(double K, double u, double v) {
    return 1.0 / (1.0 + std::exp(K * (u - v)));
}

}  // namespace

DecoderState::DecoderState(const TannerGraph& graph, std::span<const double> gamma, double K, double eps0)
    : graph_(&graph), gamma_(gamma.begin(), gamma.end()), K_(K), eps0_(eps0) {
    const int n = graph.n_vars();
    if (static_cast<int>(gamma.size()) != n) throw InputError("LLR vector length differs from N");
    for (double g : gamma)
        if (!std::isfinite(g)) throw InputError("LLR entries must be finite");
    const auto ne = static_cast<std::size_t>(graph.n_edges());
    u_.assign(ne, 0.0);
    v_.assign(ne, 0.0);
    lam_edge_.assign(ne, 0.5);
    lam_node_.assign(static_cast<std::size_t>(n), 0.5);
    eps_node_.assign(static_cast<std::size_t>(n), 0.0);
    queued_.assign(static_cast<std::size_t>(n), 0);
    active_pos_.assign(static_cast<std::size_t>(n), -1);
    seen_.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        const auto edges = graph.var_edges(i);
        if (edges.empty()) throw InputError("variable " + std::to_string(i) + " is not checked by any constraint");
        const double share = gamma_[static_cast<std::size_t>(i)] / static_cast<double>(edges.size());
        for (int e : edges) u_[static_cast<std::size_t>(e)] = share;
    }
    rescale(K, eps0);
}

void DecoderState::rescale(double K, double eps0) {
    K_ = K;
    eps0_ = eps0;
    degenerate_.clear();
    for (int j = 0; j < graph_->n_constraints(); ++j) refresh_check(j, -1);
    queue_.clear();
    std::fill(queued_.begin(), queued_.end(), 0);
    active_list_.clear();
    std::fill(active_pos_.begin(), active_pos_.end(), -1);
    for (int i = 0; i < graph_->n_vars(); ++i) {
        refresh_node(i);
        mark(i);
    }
}

void DecoderState::refresh_check(int j, int skip_edge) {
    const auto& c = graph_->constraint(j);
    const int off = graph_->edge_offset(j);
    const auto len = c.vars.size();
    ws_.compute_ab(*c.code, std::span<const double>(u_).subspan(static_cast<std::size_t>(off), len), K_, ab_);
    if (ab_.log_z == kNegInf) throw CodeError("constraint " + std::to_string(j) + " has no codewords");
    for (std::size_t p = 0; p < len; ++p) {
        const int e = off + static_cast<int>(p);
        if (e != skip_edge) {
            const double la = ab_.log_a[p], lb = ab_.log_b[p];
            double v;
            if (la == kNegInf) {
                v = -kVMax;
            } else if (lb == kNegInf) {
                v = kVMax;
            } else {
                v = (la - lb) / K_;
            }
            if (la == kNegInf || lb == kNegInf) {
                if (std::find(degenerate_.begin(), degenerate_.end(), e) == degenerate_.end())
                    degenerate_.push_back(e);
            }
            v_[static_cast<std::size_t>(e)] = v;
        }
        lam_edge_[static_cast<std::size_t>(e)] =
            logistic_weight(K_, u_[static_cast<std::size_t>(e)], v_[static_cast<std::size_t>(e)]);
    }
}

void DecoderState::refresh_node(int i) {
    const auto edges = graph_->var_edges(i);
    double sum = 0.0;
    for (int e : edges) sum += lam_edge_[static_cast<std::size_t>(e)];
    const double mean = sum / static_cast<double>(edges.size());
    double dev = 0.0;
    for (int e : edges) dev = std::max(dev, std::abs(lam_edge_[static_cast<std::size_t>(e)] - mean));
    lam_node_[static_cast<std::size_t>(i)] = mean;
    eps_node_[static_cast<std::size_t>(i)] = dev;
}

void DecoderState::mark(int i) {
    const auto idx = static_cast<std::size_t>(i);
    if (is_active(i)) {
        if (!queued_[idx]) {
            queue_.push_back(i);
            queued_[idx] = 1;
        }
        if (active_pos_[idx] < 0) {
            active_pos_[idx] = static_cast<int>(active_list_.size());
            active_list_.push_back(i);
        }
    } else if (active_pos_[idx] >= 0) {
        const int slot = active_pos_[idx];
        const int last = active_list_.back();
        active_list_[static_cast<std::size_t>(slot)] = last;
        active_pos_[static_cast<std::size_t>(last)] = slot;
        active_list_.pop_back();
        active_pos_[idx] = -1;
    }
}

bool DecoderState::any_active() const { return !active_list_.empty(); }

int DecoderState::pick(PickRule rule, std::mt19937_64& rng) {
    if (rule == PickRule::Random) {
        if (active_list_.empty()) return -1;
        std::uniform_int_distribution<std::size_t> dist(0, active_list_.size() - 1);
        return active_list_[dist(rng)];
    }
    while (!queue_.empty()) {
        const int k = queue_.front();
        queue_.pop_front();
        queued_[static_cast<std::size_t>(k)] = 0;
        if (is_active(k)) return k;
    }
    return -1;
}

void DecoderState::iterate_once(int k) {
    if (k < 0 || k >= graph_->n_vars() || !is_active(k))
        throw InputError("coordinate update requested for an inactive variable");
    const auto edges = graph_->var_edges(k);
    const double d = static_cast<double>(edges.size());
    double vsum = 0.0;
    for (int e : edges) vsum += v_[static_cast<std::size_t>(e)];
    const double shift = gamma_[static_cast<std::size_t>(k)] / d - vsum / d;
    for (int e : edges) u_[static_cast<std::size_t>(e)] = v_[static_cast<std::size_t>(e)] + shift;

    for (int e : edges) refresh_check(graph_->edge_constraint(e), e);
    ++stamp_;
    for (int e : edges) {
        for (int i : graph_->constraint(graph_->edge_constraint(e)).vars) {
            if (seen_[static_cast<std::size_t>(i)] == stamp_) continue;
            seen_[static_cast<std::size_t>(i)] = stamp_;
            refresh_node(i);
            mark(i);
        }
    }
}

double recovery_epsilon(EpsilonRule rule, double eta, double final_eps0, double eps_max) {
    const double cap = eta > 0.0 ? 1.0 / eta : kPosInf;
    if (rule == EpsilonRule::ScheduleFloor) return std::min(final_eps0, cap);
    // With |lambda_{i,j} - lambda_i| <= eps_max, mixing in the uniform local distribution with
    // weight eta*eps restores non-negative local weights once eps >= eps_max / (1 + eta*eps_max).
    const double needed = eps_max / (1.0 + eta * eps_max);
    return std::min(cap, 1.01 * needed + 1e-12);
}

std::vector<double> shrink_towards_center(std::span<const double> lam, double eta, double eps) {
    const double t = eta * eps;
    std::vector<double> out(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) out[i] = lam[i] * (1.0 - t) + 0.5 * t;
    return out;
}

std::optional<bool> in_parity_polytope(const TannerGraph& graph, std::span<const double> x, double tol) {
    if (x.size() != static_cast<std::size_t>(graph.n_vars())) throw InputError("point length differs from N");
    for (int j = 0; j < graph.n_constraints(); ++j)
        if (graph.constraint(j).code->rows() > 1) return std::nullopt;
    for (double v : x)
        if (v < -tol || v > 1.0 + tol) return false;
    for (const Constraint& c : graph.constraints()) {
        // Cheapest odd-set inequality: S = {x_i > 1/2}, repaired by the coordinate closest to 1/2.
        double lhs = 0.0, repair = kPosInf;
        std::uint32_t parity = 0;
        bool any = false;
        for (std::size_t p = 0; p < c.vars.size(); ++p) {
            if (!c.code->column(static_cast<int>(p))) continue;
            any = true;
            const double v = x[static_cast<std::size_t>(c.vars[p])];
            if (v > 0.5) parity ^= 1U;
            lhs += std::min(v, 1.0 - v);
            repair = std::min(repair, std::abs(1.0 - 2.0 * v));
        }
        if (!any) {
            if (c.code->syndrome()) return false;
            continue;
        }
        if (parity == (c.code->syndrome() & 1U)) lhs += repair;
        if (lhs < 1.0 - tol) return false;
    }
    return true;
}

namespace {

// Smallest t in [0, t_max] with (1 - t) lam + t/2 inside the polytope, or t_max when that cannot
// lower the primal value or no exact test applies.
double tight_shrink(const TannerGraph& graph, std::span<const double> gamma, std::span<const double> lam,
                    double eta, double t_max) {
    double slope = 0.0;
    for (std::size_t i = 0; i < lam.size(); ++i) slope += gamma[i] * (0.5 - lam[i]);
    if (slope <= 0.0) return t_max;
    constexpr double kTol = 1e-12;
    auto feasible = [&](double t) {
        return in_parity_polytope(graph, shrink_towards_center(lam, eta, t / eta), kTol);
    };
    const auto at_zero = feasible(0.0);
    if (!at_zero) return t_max;
    if (*at_zero) return 0.0;
    if (!*feasible(t_max)) return t_max;
    double lo = 0.0, hi = t_max;
    for (int k = 0; k < 50 && hi - lo > 1e-12; ++k) {
        const double mid = 0.5 * (lo + hi);
        (*feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

double primal_value(std::span<const double> gamma, std::span<const double> c) {
    if (gamma.size() != c.size()) throw InputError("primal vector length differs from N");
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += gamma[i] * c[i];
    return s;
}

DecodeResult decode(const TannerGraph& graph, std::span<const double> gamma, const ScheduleParams& sched,
                    const DecodeOptions& opts) {
    sched.validate();
    DecodeResult res;
    res.eta = opts.eta ? *opts.eta : compute_eta(graph);
    res.final_K = sched.final_K();
    res.final_eps0 = sched.final_eps0();

    DecoderState st(graph, gamma, sched.K0, sched.eps0_init);
    std::mt19937_64 rng(opts.seed);
    const long cap = sched.iteration_cap(graph.n_vars());
    for (int round = 0; round <= sched.rounds; ++round) {
        if (round > 0)
            st.rescale(sched.K0 * std::pow(sched.growth, round), sched.eps0_init / std::pow(sched.growth, round));
        long it = 0;
        for (;;) {
            if (it >= cap) {
                if (st.any_active()) res.converged = false;
                break;
            }
            const int k = st.pick(opts.pick, rng);
            if (k < 0) break;
            st.iterate_once(k);
            ++it;
        }
        res.iterations += it;
    }

    res.lam.assign(st.lam_node().begin(), st.lam_node().end());
    for (double e : st.eps_node()) res.eps_max = std::max(res.eps_max, e);
    res.eps = recovery_epsilon(opts.eps_rule, res.eta, res.final_eps0, res.eps_max);
    if (opts.eps_rule == EpsilonRule::Tight && res.eta > 0.0)
        res.eps = tight_shrink(graph, gamma, res.lam, res.eta, res.eta * res.eps) / res.eta;
    res.lam_tilde = shrink_towards_center(res.lam, res.eta, res.eps);
    res.c_hat.resize(res.lam_tilde.size());
    for (std::size_t i = 0; i < res.lam_tilde.size(); ++i) res.c_hat[i] = res.lam_tilde[i] > 0.5 ? 1 : 0;
    res.u_final.assign(st.u().begin(), st.u().end());
    res.primal_value = primal_value(gamma, res.lam_tilde);
    res.dual_value = dual_objective(graph, res.u_final);
    for (int i = 0; i < graph.n_vars(); ++i) {
        double r = gamma[static_cast<std::size_t>(i)];
        for (int e : graph.var_edges(i)) r -= res.u_final[static_cast<std::size_t>(e)];
        res.dual_value += std::min(0.0, r);
    }

    double worst = 0.0;
    for (double l : res.lam_tilde) worst = std::max(worst, std::min(l, 1.0 - l));
    res.ml_certificate = worst <= opts.cert_tol && graph.is_codeword(res.c_hat);
    return res;
}

}  // namespace lpdec
