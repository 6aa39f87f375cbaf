#include "lpdec/bounds.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

#include "lpdec/parallel.hpp"
#include "lpdec/reduce.hpp"

namespace lpdec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Pins the neighbours of constraint r to local word `word`; false on a clash with earlier pins.
bool pin_word(const TannerGraph& graph, int r, std::uint32_t word, std::vector<std::int8_t>& pins) {
    const auto& vars = graph.constraint(r).vars;
    for (std::size_t p = 0; p < vars.size(); ++p) {
        const auto bit = static_cast<std::int8_t>((word >> p) & 1U);
        auto& slot = pins[static_cast<std::size_t>(vars[p])];
        if (slot >= 0 && slot != bit) return false;
        slot = bit;
    }
    return true;
}

/// Weight minimisation with gamma = 1 under `pins`. The forced weight is a trivial lower bound.
void solve_weight(const TannerGraph& graph, const std::vector<std::int8_t>& pins, const ScheduleParams& sched,
                  const DecodeOptions& opts, BranchRecord& rec) {
    const std::vector<double> ones(static_cast<std::size_t>(graph.n_vars()), 1.0);
    const PinnedSolve s = solve_pinned(graph, ones, pins, sched, opts);
    rec.iterations = s.iterations;
    if (s.infeasible) {
        rec.infeasible = true;
        rec.lower = rec.upper = kPosInf;
        return;
    }
    const double forced = static_cast<double>(std::count(pins.begin(), pins.end(), std::int8_t{1}));
    rec.lower = std::max(s.lower, forced);
    rec.upper = s.upper;
}

/// Penalised weight for the facet v0 + sum_p coeff[p] c_{N_r[p]} <= 0 of constraint r.
void solve_facet(const TannerGraph& graph, int r, std::int64_t v0, std::span<const std::int64_t> coeff, double B,
                 const ScheduleParams& sched, const DecodeOptions& opts, BranchRecord& rec) {
    std::vector<double> gamma(static_cast<std::size_t>(graph.n_vars()), 1.0);
    const auto& vars = graph.constraint(r).vars;
    for (std::size_t p = 0; p < vars.size(); ++p)
        gamma[static_cast<std::size_t>(vars[p])] = 1.0 - B * static_cast<double>(coeff[p]);
    const std::vector<std::int8_t> free_pins(static_cast<std::size_t>(graph.n_vars()), -1);
    const PinnedSolve s = solve_pinned(graph, gamma, free_pins, sched, opts);
    rec.iterations = s.iterations;
    const double constant = -B * static_cast<double>(v0);
    rec.lower = s.lower + constant;
    rec.upper = s.upper + constant;
}

ScheduleParams penalty_schedule(const ScheduleParams& sched, double B, int n_vars) {
    if (!(B > 0.0) || !std::isfinite(B)) throw ParameterError("penalty constant B must be positive");
    ScheduleParams s = sched;
    s.eps0_init = 0.1 / B;
    if (s.max_iters_per_round == 0)
        s.max_iters_per_round = s.iteration_cap(n_vars) * static_cast<long>(std::ceil(1.0 + B));
    return s;
}

void box_branches(const TannerGraph& graph, const ScheduleParams& sched, const BoundsOptions& opts,
                  std::vector<BranchRecord>& out) {
    const std::size_t base = out.size();
    out.resize(base + static_cast<std::size_t>(graph.n_vars()));
    parallel_for(static_cast<std::size_t>(graph.n_vars()), opts.threads, [&](std::size_t i) {
        auto& rec = out[base + i];
        rec.kind = "box";
        rec.r = static_cast<int>(i);
        std::vector<std::int8_t> pins(static_cast<std::size_t>(graph.n_vars()), -1);
        pins[i] = 1;
        solve_weight(graph, pins, sched, opts.decode, rec);
    });
}

FracBoundReport summarise(FracBoundReport rep) {
    rep.d_frac_box = rep.d_frac_diag = kPosInf;
    for (const auto& b : rep.branches) {
        rep.total_iterations += b.iterations;
        if (b.kind == "box") rep.d_frac_box = std::min(rep.d_frac_box, b.lower);
        else rep.d_frac_diag = std::min(rep.d_frac_diag, b.lower);
    }
    rep.d_frac_B = std::min(rep.d_frac_box, rep.d_frac_diag);
    return rep;
}

}  // namespace

DistanceBoundReport min_distance_bounds(const TannerGraph& graph, const ScheduleParams& sched,
                                        const BoundsOptions& opts) {
    sched.validate();
    const auto t0 = Clock::now();
    DistanceBoundReport rep;
    std::vector<std::pair<int, int>> jobs;
    for (int r = 0; r < graph.n_constraints(); ++r) {
        const auto& words = graph.constraint(r).code->codewords();
        for (std::size_t w = 0; w < words.size(); ++w)
            if (words[w] != 0) jobs.emplace_back(r, static_cast<int>(w));
    }
    rep.per_check.resize(jobs.size());
    parallel_for(jobs.size(), opts.threads, [&](std::size_t t) {
        const auto [r, w] = jobs[t];
        auto& rec = rep.per_check[t];
        rec.kind = "codeword";
        rec.r = r;
        rec.branch = w;
        std::vector<std::int8_t> pins(static_cast<std::size_t>(graph.n_vars()), -1);
        pin_word(graph, r, graph.constraint(r).code->codewords()[static_cast<std::size_t>(w)], pins);
        solve_weight(graph, pins, sched, opts.decode, rec);
    });
    rep.l_min_lower = rep.l_min_upper = kPosInf;
    for (const auto& rec : rep.per_check) {
        rep.l_min_lower = std::min(rep.l_min_lower, rec.lower);
        rep.l_min_upper = std::min(rep.l_min_upper, rec.upper);
        rep.total_iterations += rec.iterations;
    }
    rep.seconds = seconds_since(t0);
    return rep;
}

BarReport bar_method(const TannerGraph& graph, const ScheduleParams& sched, double bar_lo, double bar_hi,
                     int bisect_steps, const BoundsOptions& opts) {
    if (!(bar_lo < bar_hi)) throw ParameterError("bar_lo must be below bar_hi");
    return bar_method(graph, min_distance_bounds(graph, sched, opts), sched, bar_lo, bar_hi, bisect_steps, opts);
}

BarReport bar_method(const TannerGraph& graph, const DistanceBoundReport& base, const ScheduleParams& sched,
                     double bar_lo, double bar_hi, int bisect_steps, const BoundsOptions& opts) {
    if (!(bar_lo < bar_hi)) throw ParameterError("bar_lo must be below bar_hi");
    if (bisect_steps < 0) throw ParameterError("bisection steps must be non-negative");
    BarReport rep;
    rep.l_min_lower = base.l_min_lower;

    const int m = graph.n_constraints();
    std::vector<std::vector<int>> near(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) {
        auto& list = near[static_cast<std::size_t>(r)];
        for (int i : graph.constraint(r).vars)
            for (int j : graph.var_constraints(i))
                if (j != r) list.push_back(j);
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }

    std::map<std::tuple<int, long, int>, double> pair_cache;
    auto pair_min = [&](int r, long w, int j) {
        const auto key = std::make_tuple(r, w, j);
        if (auto it = pair_cache.find(key); it != pair_cache.end()) return it->second;
        const std::uint32_t word_r = graph.constraint(r).code->codewords()[static_cast<std::size_t>(w)];
        std::vector<std::vector<std::int8_t>> cases;
        for (std::uint32_t word_j : graph.constraint(j).code->codewords()) {
            std::vector<std::int8_t> pins(static_cast<std::size_t>(graph.n_vars()), -1);
            pin_word(graph, r, word_r, pins);
            if (pin_word(graph, j, word_j, pins)) cases.push_back(std::move(pins));
        }
        std::vector<BranchRecord> recs(cases.size());
        parallel_for(cases.size(), opts.threads,
                     [&](std::size_t t) { solve_weight(graph, cases[t], sched, opts.decode, recs[t]); });
        double best = kPosInf;
        for (const auto& rec : recs) best = std::min(best, rec.lower);
        rep.refinements += static_cast<long>(recs.size());
        pair_cache.emplace(key, best);
        return best;
    };

    auto attainable = [&](double bar) {
        for (const auto& rec : base.per_check) {
            if (rec.lower >= bar) continue;
            bool refined = false;
            for (int j : near[static_cast<std::size_t>(rec.r)])
                if (pair_min(rec.r, rec.branch, j) >= bar) {
                    refined = true;
                    break;
                }
            if (!refined) return false;
        }
        return true;
    };
    auto test = [&](double bar) {
        const bool ok = attainable(bar);
        rep.tested.push_back(bar);
        rep.attainable.push_back(ok);
        return ok;
    };

    double lo = bar_lo, hi = bar_hi;
    if (!test(lo)) {
        rep.level = base.l_min_lower;
        return rep;
    }
    if (test(hi)) {
        rep.level = std::max(hi, base.l_min_lower);
        return rep;
    }
    for (int s = 0; s < bisect_steps; ++s) {
        const double mid = 0.5 * (lo + hi);
        if (test(mid)) lo = mid;
        else hi = mid;
    }
    rep.level = std::max(lo, base.l_min_lower);
    return rep;
}

FracBoundReport frac_distance_lower(const TannerGraph& graph, double B, const ScheduleParams& sched,
                                    const BoundsOptions& opts) {
    const ScheduleParams ps = penalty_schedule(sched, B, graph.n_vars());
    ps.validate();
    if (!graph.is_plain_ldpc())
        throw CodeError("odd-set facets need single parity checks; use the facet-system variant for GLDPC codes");
    const auto t0 = Clock::now();
    FracBoundReport rep;
    rep.B = B;
    box_branches(graph, ps, opts, rep.branches);

    std::vector<std::pair<int, std::uint32_t>> jobs;
    for (int r = 0; r < graph.n_constraints(); ++r) {
        const int d = static_cast<int>(graph.constraint(r).vars.size());
        if (d > kMaxOddSetDegree)
            throw SizeError("check " + std::to_string(r) + " has degree " + std::to_string(d) +
                            "; odd-set enumeration is limited to " + std::to_string(kMaxOddSetDegree));
        for (std::uint32_t s = 1; s < (std::uint32_t{1} << d); ++s)
            if (std::popcount(s) % 2 == 1 && std::popcount(s) > 1) jobs.emplace_back(r, s);
    }
    const std::size_t base = rep.branches.size();
    rep.branches.resize(base + jobs.size());
    parallel_for(jobs.size(), opts.threads, [&](std::size_t t) {
        const auto [r, s] = jobs[t];
        const int d = static_cast<int>(graph.constraint(r).vars.size());
        std::vector<std::int64_t> coeff(static_cast<std::size_t>(d));
        for (int p = 0; p < d; ++p) coeff[static_cast<std::size_t>(p)] = ((s >> p) & 1U) ? 1 : -1;
        auto& rec = rep.branches[base + t];
        rec.kind = "facet";
        rec.r = r;
        rec.branch = s;
        solve_facet(graph, r, -(std::popcount(s) - 1), coeff, B, ps, opts.decode, rec);
    });
    rep = summarise(std::move(rep));
    rep.seconds = seconds_since(t0);
    return rep;
}

FracBoundReport frac_distance_lower_facets(const TannerGraph& graph, const std::vector<FacetSystem>& facets,
                                           double B, const ScheduleParams& sched, const BoundsOptions& opts) {
    const ScheduleParams ps = penalty_schedule(sched, B, graph.n_vars());
    ps.validate();
    if (static_cast<int>(facets.size()) != graph.n_constraints())
        throw InputError("one facet system per constraint is required");
    const auto t0 = Clock::now();
    FracBoundReport rep;
    rep.B = B;
    box_branches(graph, ps, opts, rep.branches);

    std::vector<std::pair<int, int>> jobs;
    for (int r = 0; r < graph.n_constraints(); ++r) {
        const auto& fs = facets[static_cast<std::size_t>(r)];
        if (fs.dim != static_cast<int>(graph.constraint(r).vars.size()))
            throw InputError("facet system " + std::to_string(r) + " does not match the constraint length");
        for (std::size_t f = 0; f < fs.rays.size(); ++f) {
            const auto& row = fs.rays[f];
            if (row[0] >= 0) continue;
            const auto pos = std::count_if(row.begin() + 1, row.end(), [](std::int64_t x) { return x != 0; });
            const bool box = pos == 1 && row[0] == -1 &&
                             std::find(row.begin() + 1, row.end(), std::int64_t{1}) != row.end();
            if (!box) jobs.emplace_back(r, static_cast<int>(f));
        }
    }
    const std::size_t base = rep.branches.size();
    rep.branches.resize(base + jobs.size());
    parallel_for(jobs.size(), opts.threads, [&](std::size_t t) {
        const auto [r, f] = jobs[t];
        const auto& row = facets[static_cast<std::size_t>(r)].rays[static_cast<std::size_t>(f)];
        auto& rec = rep.branches[base + t];
        rec.kind = "facet";
        rec.r = r;
        rec.branch = f;
        solve_facet(graph, r, row[0], std::span<const std::int64_t>(row).subspan(1), B, ps, opts.decode, rec);
    });
    rep = summarise(std::move(rep));
    rep.seconds = seconds_since(t0);
    return rep;
}

std::string branches_csv(const std::vector<BranchRecord>& rows, double summary_lower, double summary_upper,
                         long summary_iterations) {
    std::string out = "kind,r,branch,lower,upper,iterations\n";
    char buf[160];
    for (const auto& b : rows) {
        std::snprintf(buf, sizeof buf, "%s,%d,%ld,%.12g,%.12g,%ld\n", b.kind.c_str(), b.r, b.branch, b.lower,
                      b.upper, b.iterations);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "summary,-1,-1,%.12g,%.12g,%ld\n", summary_lower, summary_upper,
                  summary_iterations);
    out += buf;
    return out;
}

}  // namespace lpdec
