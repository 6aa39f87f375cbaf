#include "lpdec/trellis.hpp"

#include <algorithm>

namespace lpdec {

namespace {

void check_length(const ConstituentCode& code, std::span<const double> u) {
    if (static_cast<int>(u.size()) != code.length())
        throw InputError("cost vector length " + std::to_string(u.size()) + " differs from code length " +
                         std::to_string(code.length()));
}

// log sum_s exp(a[s] + b[s ^ shift]) for the two shifts at once.
std::pair<double, double> log_inner2(const double* a, const double* b, std::uint32_t shift1, std::uint32_t shift2,
                                     int states) {
    double m1 = kNegInf, m2 = kNegInf;
    for (int s = 0; s < states; ++s) {
        m1 = std::max(m1, a[s] + b[static_cast<std::uint32_t>(s) ^ shift1]);
        m2 = std::max(m2, a[s] + b[static_cast<std::uint32_t>(s) ^ shift2]);
    }
    double acc1 = 0.0, acc2 = 0.0;
    for (int s = 0; s < states; ++s) {
        const double d1 = a[s] + b[static_cast<std::uint32_t>(s) ^ shift1] - m1;
        const double d2 = a[s] + b[static_cast<std::uint32_t>(s) ^ shift2] - m2;
        if (d1 > -40.0) acc1 += d1 == 0.0 ? 1.0 : std::exp(d1);
        if (d2 > -40.0) acc2 += d2 == 0.0 ? 1.0 : std::exp(d2);
    }
    const auto finish = [](double m, double acc) {
        if (m == kNegInf) return kNegInf;
        return acc == 1.0 ? m : m + std::log(acc);
    };
    return {finish(m1, acc1), finish(m2, acc2)};
}

}  // namespace

void TrellisWorkspace::build_tables(const ConstituentCode& code, std::span<const double> u, double K,
                                    TrellisTables& t) {
    check_length(code, u);
    const int n = code.length();
    const int states = 1 << code.rows();
    t.n = n;
    t.states = states;
    const auto size = static_cast<std::size_t>((n + 1) * states);
    t.forward.resize(size);
    t.backward.resize(size);

    std::fill_n(t.forward.begin(), states, kNegInf);
    t.forward[0] = 0.0;
    for (int k = 0; k < n; ++k) {
        const double* prev = &t.forward[static_cast<std::size_t>(k * states)];
        double* cur = &t.forward[static_cast<std::size_t>((k + 1) * states)];
        const std::uint32_t h = code.column(k);
        const double w = -K * u[static_cast<std::size_t>(k)];
        for (int s = 0; s < states; ++s) {
            const double take = prev[static_cast<std::uint32_t>(s) ^ h];
            cur[s] = log_add(prev[s], take == kNegInf ? kNegInf : take + w);
        }
    }

    // Suffix over positions k+1..n-1 lives in row k+1; row n is the empty suffix.
    std::fill_n(t.backward.begin() + n * states, states, kNegInf);
    t.backward[static_cast<std::size_t>(n * states)] = 0.0;
    for (int k = n - 2; k >= -1; --k) {
        const double* nxt = &t.backward[static_cast<std::size_t>((k + 2) * states)];
        double* cur = &t.backward[static_cast<std::size_t>((k + 1) * states)];
        const std::uint32_t h = code.column(k + 1);
        const double w = -K * u[static_cast<std::size_t>(k + 1)];
        for (int s = 0; s < states; ++s) {
            const double take = nxt[static_cast<std::uint32_t>(s) ^ h];
            cur[s] = log_add(nxt[s], take == kNegInf ? kNegInf : take + w);
        }
    }
}

void TrellisWorkspace::compute_ab(const ConstituentCode& code, std::span<const double> u, double K,
                                  ABValues& out) {
    build_tables(code, u, K, tables_);
    const int n = code.length();
    const int states = tables_.states;
    const std::uint32_t target = code.syndrome();
    out.log_a.assign(static_cast<std::size_t>(n), kNegInf);
    out.log_b.assign(static_cast<std::size_t>(n), kNegInf);
    out.degenerate.clear();
    out.log_z = tables_.forward[static_cast<std::size_t>(n * states) + target];
    for (int k = 0; k < n; ++k) {
        const double* prefix = &tables_.forward[static_cast<std::size_t>(k * states)];
        const double* suffix = &tables_.backward[static_cast<std::size_t>((k + 1) * states)];
        const std::uint32_t h = code.column(k);
        const auto [la, lb] = log_inner2(prefix, suffix, h ^ target, target, states);
        out.log_a[static_cast<std::size_t>(k)] = la;
        out.log_b[static_cast<std::size_t>(k)] = lb;
        if (la == kNegInf || lb == kNegInf) out.degenerate.push_back(k);
    }
}

double TrellisWorkspace::local_min(const ConstituentCode& code, std::span<const double> u) {
    check_length(code, u);
    const int states = 1 << code.rows();
    cur_.assign(static_cast<std::size_t>(states), kPosInf);
    next_.assign(static_cast<std::size_t>(states), kPosInf);
    cur_[0] = 0.0;
    for (int k = 0; k < code.length(); ++k) {
        const std::uint32_t h = code.column(k);
        const double w = u[static_cast<std::size_t>(k)];
        for (int s = 0; s < states; ++s) {
            const double keep = cur_[static_cast<std::size_t>(s)];
            const double take = cur_[static_cast<std::size_t>(static_cast<std::uint32_t>(s) ^ h)];
            next_[static_cast<std::size_t>(s)] = std::min(keep, take == kPosInf ? kPosInf : take + w);
        }
        std::swap(cur_, next_);
    }
    return cur_[static_cast<std::size_t>(code.syndrome())];
}

ABValues compute_ab(const ConstituentCode& code, std::span<const double> u, double K) {
    TrellisWorkspace ws;
    ABValues out;
    ws.compute_ab(code, u, K, out);
    return out;
}

TrellisTables build_tables(const ConstituentCode& code, std::span<const double> u, double K) {
    TrellisWorkspace ws;
    TrellisTables t;
    ws.build_tables(code, u, K, t);
    return t;
}

double local_dual_min(const ConstituentCode& code, std::span<const double> u) {
    TrellisWorkspace ws;
    return ws.local_min(code, u);
}

double dual_objective(const TannerGraph& graph, std::span<const double> u) {
    if (static_cast<int>(u.size()) != graph.n_edges()) throw InputError("dual vector length differs from edge count");
    TrellisWorkspace ws;
    double total = 0.0;
    for (int j = 0; j < graph.n_constraints(); ++j) {
        const auto& c = graph.constraint(j);
        total += ws.local_min(*c.code, u.subspan(static_cast<std::size_t>(graph.edge_offset(j)), c.vars.size()));
    }
    return total;
}

double smoothed_dual_objective(const TannerGraph& graph, std::span<const double> u, double K) {
    if (static_cast<int>(u.size()) != graph.n_edges()) throw InputError("dual vector length differs from edge count");
    TrellisWorkspace ws;
    TrellisTables t;
    double total = 0.0;
    for (int j = 0; j < graph.n_constraints(); ++j) {
        const auto& c = graph.constraint(j);
        ws.build_tables(*c.code, u.subspan(static_cast<std::size_t>(graph.edge_offset(j)), c.vars.size()), K, t);
        const double log_z = t.fwd(t.n - 1, c.code->syndrome());
        total += -log_z / K;
    }
    return total;
}

}  // namespace lpdec
