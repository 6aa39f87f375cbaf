#include "lpdec/reduce.hpp"

#include <algorithm>

namespace lpdec {

namespace {

struct Infeasible {};

// Union-find over variables with the parity of each variable relative to its root.
class ParityForest {
public:
    explicit ParityForest(int n)
        : parent_(static_cast<std::size_t>(n)), parity_(static_cast<std::size_t>(n), 0),
          value_(static_cast<std::size_t>(n), -1) {
        for (int i = 0; i < n; ++i) parent_[static_cast<std::size_t>(i)] = i;
    }

    std::pair<int, int> find(int v) {
        int p = 0, r = v;
        while (parent_[static_cast<std::size_t>(r)] != r) {
            p ^= parity_[static_cast<std::size_t>(r)];
            r = parent_[static_cast<std::size_t>(r)];
        }
        // path compression
        int cur = v, acc = p;
        while (parent_[static_cast<std::size_t>(cur)] != cur) {
            const int next = parent_[static_cast<std::size_t>(cur)];
            const int par = parity_[static_cast<std::size_t>(cur)];
            parent_[static_cast<std::size_t>(cur)] = r;
            parity_[static_cast<std::size_t>(cur)] = static_cast<std::int8_t>(acc);
            acc ^= par;
            cur = next;
        }
        return {r, p};
    }

    int root_value(int r) const { return value_[static_cast<std::size_t>(r)]; }

    // x_v = val
    bool fix(int v, int val) {
        auto [r, p] = find(v);
        const int want = val ^ p;
        int& cur = value_[static_cast<std::size_t>(r)];
        if (cur >= 0) {
            if (cur != want) throw Infeasible{};
            return false;
        }
        cur = want;
        return true;
    }

    // x_a xor x_b = rel
    bool unite(int a, int b, int rel) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        const int q = rel ^ pa ^ pb;
        if (ra == rb) {
            if (q) throw Infeasible{};
            return false;
        }
        const int va = value_[static_cast<std::size_t>(ra)], vb = value_[static_cast<std::size_t>(rb)];
        if (va >= 0 && vb >= 0) {
            if ((va ^ vb) != q) throw Infeasible{};
            return false;
        }
        if (va >= 0) return fix(rb, va ^ q);
        if (vb >= 0) return fix(ra, vb ^ q);
        parent_[static_cast<std::size_t>(rb)] = ra;
        parity_[static_cast<std::size_t>(rb)] = static_cast<std::int8_t>(q);
        return true;
    }

private:
    std::vector<int> parent_;
    std::vector<std::int8_t> parity_;
    std::vector<int> value_;
};

struct WorkConstraint {
    int rows = 0;
    std::vector<int> vars;
    std::vector<std::uint32_t> cols;
    std::uint32_t syndrome = 0;
    CodePtr code;
    bool alive = true;
};

// Substitutes fixed values and merged variables into the local syndrome.
void substitute(WorkConstraint& w, ParityForest& forest) {
    std::vector<int> vars;
    std::vector<std::uint32_t> cols;
    std::uint32_t syn = w.syndrome;
    for (std::size_t p = 0; p < w.vars.size(); ++p) {
        auto [r, par] = forest.find(w.vars[p]);
        const int val = forest.root_value(r);
        if (val >= 0) {
            if (val ^ par) syn ^= w.cols[p];
            continue;
        }
        if (par) syn ^= w.cols[p];
        auto it = std::find(vars.begin(), vars.end(), r);
        if (it == vars.end()) {
            vars.push_back(r);
            cols.push_back(w.cols[p]);
        } else {
            cols[static_cast<std::size_t>(it - vars.begin())] ^= w.cols[p];
        }
    }
    w.vars.clear();
    w.cols.clear();
    for (std::size_t p = 0; p < vars.size(); ++p) {
        if (cols[p] == 0) continue;
        w.vars.push_back(vars[p]);
        w.cols.push_back(cols[p]);
    }
    w.syndrome = syn;
}

// Fixes constant positions and merges equal/complementary pairs. Returns true on progress.
bool tighten(const WorkConstraint& w, ParityForest& forest) {
    const auto& words = w.code->codewords();
    const int n = static_cast<int>(w.vars.size());
    std::uint32_t all_and = ~0U, all_or = 0;
    for (auto g : words) {
        all_and &= g;
        all_or |= g;
    }
    bool progress = false;
    for (int i = 0; i < n; ++i) {
        const bool one = (all_and >> i) & 1U;
        const bool zero = !((all_or >> i) & 1U);
        if (one || zero) progress |= forest.fix(w.vars[static_cast<std::size_t>(i)], one ? 1 : 0);
    }
    if (progress) return true;
    for (int i = 0; i < n; ++i) {
        for (int l = i + 1; l < n; ++l) {
            const std::uint32_t first = ((words.front() >> i) ^ (words.front() >> l)) & 1U;
            bool constant = true;
            for (auto g : words)
                if ((((g >> i) ^ (g >> l)) & 1U) != first) {
                    constant = false;
                    break;
                }
            if (constant) {
                forest.unite(w.vars[static_cast<std::size_t>(i)], w.vars[static_cast<std::size_t>(l)],
                             static_cast<int>(first));
                return true;
            }
        }
    }
    return false;
}

}  // namespace

std::vector<double> ReducedProblem::expand(std::span<const double> reduced) const {
    if (static_cast<int>(reduced.size()) != graph.n_vars()) throw InputError("reduced point has wrong length");
    std::vector<double> out(static_cast<std::size_t>(n_original));
    for (int i = 0; i < n_original; ++i) {
        const auto& m = map[static_cast<std::size_t>(i)];
        if (m.reduced < 0) {
            out[static_cast<std::size_t>(i)] = m.fixed;
        } else {
            const double x = reduced[static_cast<std::size_t>(m.reduced)];
            out[static_cast<std::size_t>(i)] = m.flip ? 1.0 - x : x;
        }
    }
    return out;
}

ReducedProblem reduce_problem(const TannerGraph& graph, std::span<const double> gamma,
                              std::span<const std::int8_t> pins) {
    const int n = graph.n_vars();
    if (static_cast<int>(gamma.size()) != n || static_cast<int>(pins.size()) != n)
        throw InputError("objective and pin vectors must have length N");
    ReducedProblem out;
    out.n_original = n;
    ParityForest forest(n);
    CodeCache cache;

    std::vector<WorkConstraint> work;
    work.reserve(static_cast<std::size_t>(graph.n_constraints()));
    for (const auto& c : graph.constraints()) {
        WorkConstraint w;
        w.rows = c.code->rows();
        w.vars = c.vars;
        w.cols.assign(c.code->columns().begin(), c.code->columns().end());
        w.syndrome = c.code->syndrome();
        work.push_back(std::move(w));
    }

    try {
        for (int i = 0; i < n; ++i) {
            const int pin = pins[static_cast<std::size_t>(i)];
            if (pin == 0 || pin == 1) forest.fix(i, pin);
            else if (pin != -1) throw InputError("pin values must be -1, 0 or 1");
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto& w : work) {
                if (!w.alive) continue;
                substitute(w, forest);
                if (w.vars.empty()) {
                    if (w.syndrome != 0) throw Infeasible{};
                    w.alive = false;
                    continue;
                }
                w.code = cache.get(w.rows, w.cols, w.syndrome);
                if (w.code->empty()) throw Infeasible{};
                if (w.code->dual_distance_ok()) continue;
                if (tighten(w, forest)) {
                    changed = true;
                    break;
                }
            }
        }
    } catch (const Infeasible&) {
        out.infeasible = true;
        out.offset = kPosInf;
        return out;
    }

    std::vector<int> index(static_cast<std::size_t>(n), -1);
    int next = 0;
    std::vector<Constraint> cons;
    for (const auto& w : work) {
        if (!w.alive) continue;
        Constraint c;
        for (int v : w.vars) {
            if (index[static_cast<std::size_t>(v)] < 0) index[static_cast<std::size_t>(v)] = next++;
            c.vars.push_back(index[static_cast<std::size_t>(v)]);
        }
        c.code = w.code;
        cons.push_back(std::move(c));
    }

    out.map.resize(static_cast<std::size_t>(n));
    std::vector<int> loose(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        auto [r, p] = forest.find(i);
        auto& m = out.map[static_cast<std::size_t>(i)];
        const int val = forest.root_value(r);
        if (val >= 0) {
            m.fixed = val ^ p;
            continue;
        }
        m.flip = p != 0;
        const int idx = index[static_cast<std::size_t>(r)];
        if (idx >= 0) {
            m.reduced = idx;
        } else {
            int& group = loose[static_cast<std::size_t>(r)];
            if (group < 0) group = out.n_loose++;
            m.loose = group;
        }
    }
    out.graph = TannerGraph(next, std::move(cons));
    out.apply_objective(gamma);
    return out;
}

ReducedProblem ReducedProblem::with_objective(std::span<const double> gamma) const {
    ReducedProblem out = *this;
    out.apply_objective(gamma);
    return out;
}

void ReducedProblem::apply_objective(std::span<const double> g) {
    if (static_cast<int>(g.size()) != n_original) throw InputError("objective must have length N");
    if (infeasible) return;
    offset = 0.0;
    gamma.assign(static_cast<std::size_t>(graph.n_vars()), 0.0);
    std::vector<double> loose_gamma(static_cast<std::size_t>(n_loose), 0.0);
    for (int i = 0; i < n_original; ++i) {
        const auto& m = map[static_cast<std::size_t>(i)];
        const double x = g[static_cast<std::size_t>(i)];
        if (m.reduced < 0 && m.loose < 0) {
            offset += x * m.fixed;
            continue;
        }
        if (m.flip) offset += x;
        double& slot = m.reduced >= 0 ? gamma[static_cast<std::size_t>(m.reduced)]
                                      : loose_gamma[static_cast<std::size_t>(m.loose)];
        slot += m.flip ? -x : x;
    }
    for (double x : loose_gamma) offset += std::min(0.0, x);
    for (auto& m : map) {
        if (m.loose < 0) continue;
        // outside every constraint: take the cheaper value
        const int best = loose_gamma[static_cast<std::size_t>(m.loose)] < 0.0 ? 1 : 0;
        m.fixed = best ^ (m.flip ? 1 : 0);
    }
}

PinnedSolve solve_pinned(const TannerGraph& graph, std::span<const double> gamma,
                         std::span<const std::int8_t> pins, const ScheduleParams& sched,
                         const DecodeOptions& opts) {
    PinnedSolve out;
    const ReducedProblem red = reduce_problem(graph, gamma, pins);
    if (red.infeasible) {
        out.infeasible = true;
        return out;
    }
    if (red.graph.n_vars() == 0) {
        out.lower = out.upper = red.offset;
        out.point = red.expand({});
        return out;
    }
    const DecodeResult res = decode(red.graph, red.gamma, sched, opts);
    out.lower = res.dual_value + red.offset;
    out.upper = res.primal_value + red.offset;
    out.iterations = res.iterations;
    out.converged = res.converged;
    out.point = red.expand(res.lam_tilde);
    return out;
}

}  // namespace lpdec
