#include "lpdec/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <random>

#include "lpdec/exact_lp.hpp"
#include "lpdec/gf2.hpp"
#include "lpdec/merge.hpp"
#include "lpdec/reduce.hpp"
#include "lpdec/parallel.hpp"

namespace lpdec {

std::string decoder_name(DecoderKind kind) {
    switch (kind) {
        case DecoderKind::Lp: return "lp";
        case DecoderKind::LpMerged: return "lp-merged";
        case DecoderKind::Bp: return "bp";
    }
    return "?";
}

DecoderKind parse_decoder(const std::string& name) {
    if (name == "lp") return DecoderKind::Lp;
    if (name == "lp-merged") return DecoderKind::LpMerged;
    if (name == "bp") return DecoderKind::Bp;
    throw ParameterError("unknown decoder '" + name + "' (expected lp, lp-merged or bp)");
}

void SimConfig::validate() const {
    if (!(p > 0.0 && p < 0.5)) throw ParameterError("crossover probability must lie in (0, 1/2)");
    if (trials < 1) throw ParameterError("at least one trial is required");
    if (first_trial < 0) throw ParameterError("the first trial index must be non-negative");
    if (max_bp_iters < 1) throw ParameterError("BP needs at least one iteration");
    if (max_cycle_len != 4 && max_cycle_len != 6 && max_cycle_len != 8)
        throw ParameterError("maximum cycle length must be 4, 6 or 8");
}

std::vector<std::uint8_t> channel_draw(int n, double p, std::uint64_t seed, long trial) {
    const auto t = static_cast<std::uint64_t>(trial);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<std::uint8_t> flips(static_cast<std::size_t>(n));
    for (auto& f : flips) f = static_cast<double>(rng() >> 11) * 0x1.0p-53 < p ? 1 : 0;
    return flips;
}

SimResult simulate(const TannerGraph& graph, const SimConfig& config, const ScheduleParams& sched,
                   const DecodeOptions& decode_opts) {
    config.validate();
    sched.validate();
    TannerGraph merged;
    const TannerGraph* target = &graph;
    if (config.decoder == DecoderKind::LpMerged) {
        merged = merge_constraints(graph, plan_from_cycles(find_short_cycles(graph, config.max_cycle_len)));
        target = &merged;
    }
    DecodeOptions opts = decode_opts;
    if (config.decoder == DecoderKind::Lp && !opts.eta) opts.eta = compute_eta(*target);
    ReducedProblem merged_base;
    if (config.decoder == DecoderKind::LpMerged) {
        opts.eta.reset();
        const std::vector<double> zero(static_cast<std::size_t>(graph.n_vars()), 0.0);
        merged_base = reduce_problem(merged, zero, std::vector<std::int8_t>(zero.size(), -1));
        if (merged_base.graph.n_vars() > 0) opts.eta = compute_eta(merged_base.graph);
    }

    struct Outcome {
        bool error = false;
        bool cert = false;
        long iterations = 0;
    };
    std::vector<Outcome> outcomes(static_cast<std::size_t>(config.trials));
    parallel_for(outcomes.size(), config.threads, [&](std::size_t t) {
        const auto flips = channel_draw(graph.n_vars(), config.p, config.seed, config.first_trial + static_cast<long>(t));
        const auto gamma = bsc_llrs(flips, config.p);
        auto& o = outcomes[t];
        if (config.decoder == DecoderKind::Bp) {
            const BpResult r = bp_decode(graph, gamma, config.max_bp_iters);
            o.error = std::any_of(r.bits.begin(), r.bits.end(), [](std::uint8_t b) { return b != 0; });
            o.iterations = r.iterations;
        } else if (config.decoder == DecoderKind::LpMerged) {
            const ReducedProblem red = merged_base.with_objective(gamma);
            std::vector<double> lam;
            bool cert = true;
            if (red.graph.n_vars() > 0) {
                const DecodeResult r = decode(red.graph, red.gamma, sched, opts);
                lam = r.lam_tilde;
                cert = r.ml_certificate;
                o.iterations = r.iterations;
            }
            const auto point = red.expand(lam);
            o.error = std::any_of(point.begin(), point.end(), [](double x) { return x > 0.5; });
            o.cert = cert;
        } else {
            const DecodeResult r = decode(*target, gamma, sched, opts);
            o.error = std::any_of(r.c_hat.begin(), r.c_hat.end(), [](std::uint8_t b) { return b != 0; });
            o.cert = r.ml_certificate;
            o.iterations = r.iterations;
        }
    });

    SimResult res;
    res.p = config.p;
    res.decoder = decoder_name(config.decoder);
    res.trials = config.trials;
    long certs = 0;
    double iters = 0.0;
    for (const auto& o : outcomes) {
        res.word_errors += o.error ? 1 : 0;
        certs += o.cert ? 1 : 0;
        iters += static_cast<double>(o.iterations);
    }
    const double n = static_cast<double>(res.trials);
    res.wer = static_cast<double>(res.word_errors) / n;
    res.std_error = std::sqrt(res.wer * (1.0 - res.wer) / n);
    res.ml_cert_rate = static_cast<double>(certs) / n;
    res.mean_iterations = iters / n;
    return res;
}

std::string simulation_csv_header() { return "p,trials,word_errors,wer,stderr,ml_cert_rate,mean_iters,decoder\n"; }

std::string simulation_csv_row(const SimResult& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.6g,%ld,%ld,%.8g,%.8g,%.8g,%.8g,%s\n", r.p, r.trials, r.word_errors, r.wer,
                  r.std_error, r.ml_cert_rate, r.mean_iterations, r.decoder.c_str());
    return buf;
}

BpResult bp_decode(const TannerGraph& graph, std::span<const double> gamma, int max_iters) {
    constexpr double kClip = 30.0;
    if (!graph.is_plain_ldpc()) throw CodeError("belief propagation is implemented for single parity checks only");
    const int n = graph.n_vars();
    if (static_cast<int>(gamma.size()) != n) throw InputError("LLR vector length differs from N");
    if (max_iters < 1) throw ParameterError("BP needs at least one iteration");
    const auto ne = static_cast<std::size_t>(graph.n_edges());
    std::vector<double> to_check(ne), to_var(ne, 0.0), tanh_half(ne);
    for (std::size_t e = 0; e < ne; ++e) to_check[e] = std::clamp(gamma[static_cast<std::size_t>(graph.edge_var(static_cast<int>(e)))], -kClip, kClip);

    BpResult out;
    out.bits.assign(static_cast<std::size_t>(n), 0);
    std::vector<double> prefix;
    for (int it = 1; it <= max_iters; ++it) {
        for (int j = 0; j < graph.n_constraints(); ++j) {
            const int off = graph.edge_offset(j);
            const auto d = graph.constraint(j).vars.size();
            prefix.assign(d + 1, 1.0);
            for (std::size_t p = 0; p < d; ++p) {
                tanh_half[static_cast<std::size_t>(off) + p] = std::tanh(0.5 * to_check[static_cast<std::size_t>(off) + p]);
                prefix[p + 1] = prefix[p] * tanh_half[static_cast<std::size_t>(off) + p];
            }
            double suffix = 1.0;
            for (std::size_t p = d; p-- > 0;) {
                const double prod = std::clamp(prefix[p] * suffix, -1.0, 1.0);
                to_var[static_cast<std::size_t>(off) + p] = std::clamp(2.0 * std::atanh(prod), -kClip, kClip);
                suffix *= tanh_half[static_cast<std::size_t>(off) + p];
            }
        }
        for (int i = 0; i < n; ++i) {
            double post = gamma[static_cast<std::size_t>(i)];
            for (int e : graph.var_edges(i)) post += to_var[static_cast<std::size_t>(e)];
            for (int e : graph.var_edges(i))
                to_check[static_cast<std::size_t>(e)] = std::clamp(post - to_var[static_cast<std::size_t>(e)], -kClip, kClip);
            out.bits[static_cast<std::size_t>(i)] = post < 0.0 ? 1 : 0;
        }
        out.iterations = it;
        if (graph.is_codeword(out.bits)) {
            out.converged = true;
            break;
        }
    }
    return out;
}

namespace {

AffineSolution code_space(const TannerGraph& graph) {
    const auto n = static_cast<std::size_t>(graph.n_vars());
    std::vector<BitVec> rows;
    std::vector<std::uint8_t> rhs;
    for (const auto& c : graph.constraints()) {
        for (int r = 0; r < c.code->rows(); ++r) {
            BitVec row(n);
            for (std::size_t p = 0; p < c.vars.size(); ++p)
                if ((c.code->column(static_cast<int>(p)) >> r) & 1U) row.set(static_cast<std::size_t>(c.vars[p]));
            rows.push_back(std::move(row));
            rhs.push_back(static_cast<std::uint8_t>((c.code->syndrome() >> r) & 1U));
        }
    }
    auto sol = solve_affine(std::move(rows), std::move(rhs), n);
    if (!sol) throw CodeError("the code has no codewords");
    if (sol->basis.size() > static_cast<std::size_t>(kMaxOracleDimension))
        throw SizeError("code dimension " + std::to_string(sol->basis.size()) + " exceeds the oracle limit of " +
                        std::to_string(kMaxOracleDimension));
    return std::move(*sol);
}

/// Visits every codeword once, in Gray-code order.
template <class F>
void for_each_codeword(const AffineSolution& sol, F&& f) {
    BitVec word = sol.particular;
    f(word);
    const std::uint64_t count = std::uint64_t{1} << sol.basis.size();
    for (std::uint64_t t = 1; t < count; ++t) {
        word ^= sol.basis[static_cast<std::size_t>(std::countr_zero(t))];
        f(word);
    }
}

std::vector<std::uint8_t> to_bytes(const BitVec& w) {
    std::vector<std::uint8_t> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = w.get(i) ? 1 : 0;
    return out;
}

/// Logarithm of sum exp(x) with a Neumaier-compensated sum of the scaled terms.
double log_sum_exp(const std::vector<double>& xs) {
    if (xs.empty()) return kNegInf;
    const double m = *std::max_element(xs.begin(), xs.end());
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double t = std::exp(x - m);
        const double s = sum + t;
        comp += std::abs(sum) >= std::abs(t) ? (sum - s) + t : (t - s) + sum;
        sum = s;
    }
    return m + std::log(sum + comp);
}

double compensated_dot(std::span<const double> u, std::uint32_t g, int skip) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (static_cast<int>(i) == skip || !((g >> i) & 1U)) continue;
        const double t = u[i];
        const double s = sum + t;
        comp += std::abs(sum) >= std::abs(t) ? (sum - s) + t : (t - s) + sum;
        sum = s;
    }
    return sum + comp;
}

}  // namespace

MlResult oracle_ml(const TannerGraph& graph, std::span<const double> gamma) {
    if (static_cast<int>(gamma.size()) != graph.n_vars()) throw InputError("LLR vector length differs from N");
    const AffineSolution sol = code_space(graph);
    BitVec best;
    double best_value = kPosInf;
    bool have = false;
    for_each_codeword(sol, [&](const BitVec& w) {
        double v = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w.get(i)) v += gamma[i];
        if (!have || v < best_value || (v == best_value && lex_less(w, best))) {
            best = w;
            best_value = v;
            have = true;
        }
    });
    return MlResult{to_bytes(best), best_value};
}

std::optional<int> oracle_min_distance(const TannerGraph& graph) {
    const AffineSolution sol = code_space(graph);
    if (sol.particular.any()) throw CodeError("minimum distance needs a linear code (zero syndromes)");
    std::optional<int> best;
    for_each_codeword(sol, [&](const BitVec& w) {
        const int wt = w.popcount();
        if (wt > 0 && (!best || wt < *best)) best = wt;
    });
    return best;
}

std::vector<std::vector<std::uint8_t>> oracle_codewords(const TannerGraph& graph) {
    const AffineSolution sol = code_space(graph);
    std::vector<std::vector<std::uint8_t>> out;
    for_each_codeword(sol, [&](const BitVec& w) { out.push_back(to_bytes(w)); });
    std::sort(out.begin(), out.end());
    return out;
}

FacetSystem fundamental_polytope_facets(const TannerGraph& graph) {
    if (!graph.is_plain_ldpc()) throw CodeError("odd-set facets need single parity checks");
    const int n = graph.n_vars();
    FacetSystem fs;
    fs.dim = n;
    for (int i = 0; i < n; ++i) {
        std::vector<std::int64_t> lo(static_cast<std::size_t>(n + 1), 0), hi(static_cast<std::size_t>(n + 1), 0);
        lo[static_cast<std::size_t>(i) + 1] = -1;
        hi[0] = -1;
        hi[static_cast<std::size_t>(i) + 1] = 1;
        fs.rays.push_back(std::move(lo));
        fs.rays.push_back(std::move(hi));
    }
    for (const auto& c : graph.constraints()) {
        const int d = static_cast<int>(c.vars.size());
        if (d > kMaxFacetDimension) throw SizeError("check degree too large for odd-set enumeration");
        for (std::uint32_t s = 1; s < (std::uint32_t{1} << d); ++s) {
            if (std::popcount(s) % 2 == 0) continue;
            std::vector<std::int64_t> row(static_cast<std::size_t>(n + 1), 0);
            row[0] = -(std::popcount(s) - 1);
            for (int p = 0; p < d; ++p)
                row[static_cast<std::size_t>(c.vars[static_cast<std::size_t>(p)]) + 1] = ((s >> p) & 1U) ? 1 : -1;
            fs.rays.push_back(std::move(row));
        }
    }
    fs.rays = canonical_rows(std::move(fs.rays));
    return fs;
}

std::optional<FracDistanceResult> oracle_fractional_distance(const TannerGraph& graph) {
    const int n = graph.n_vars();
    if (n > kMaxFacetDimension)
        throw SizeError("exact fractional distance is limited to " + std::to_string(kMaxFacetDimension) + " variables");
    const FacetSystem fs = fundamental_polytope_facets(graph);
    // Rows -c_i <= 0 are the sign constraints of the standard form; every other row gets a slack.
    std::vector<std::size_t> slack_rows;
    for (std::size_t f = 0; f < fs.rays.size(); ++f) {
        const auto& row = fs.rays[f];
        const bool sign_row = row[0] == 0 && std::count(row.begin() + 1, row.end(), std::int64_t{0}) == n - 1 &&
                              std::count(row.begin() + 1, row.end(), std::int64_t{-1}) == 1;
        if (!sign_row) slack_rows.push_back(f);
    }
    std::optional<FracDistanceResult> best;
    std::size_t programs = 0;
    for (std::size_t target : slack_rows) {
        if (fs.rays[target][0] >= 0) continue;
        StandardLp lp;
        const std::size_t width = static_cast<std::size_t>(n) + slack_rows.size();
        lp.cost.assign(width, Rational(0));
        for (int i = 0; i < n; ++i) lp.cost[static_cast<std::size_t>(i)] = 1;
        for (std::size_t s = 0; s < slack_rows.size(); ++s) {
            const auto& row = fs.rays[slack_rows[s]];
            std::vector<Rational> a(width, Rational(0));
            for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(i) + 1];
            if (slack_rows[s] != target) a[static_cast<std::size_t>(n) + s] = 1;
            lp.a.push_back(std::move(a));
            lp.b.emplace_back(-row[0]);
        }
        ++programs;
        const auto sol = solve_exact_lp(lp);
        if (!sol) continue;
        if (!best || sol->value < best->value) {
            best = FracDistanceResult{sol->value,
                                      std::vector<Rational>(sol->y.begin(), sol->y.begin() + n),
                                      fs.rays[target], 0};
        }
    }
    if (best) best->programs = programs;
    return best;
}

ABValues oracle_ab(const ConstituentCode& code, std::span<const double> u, double K) {
    const int n = code.length();
    if (static_cast<int>(u.size()) != n) throw InputError("u has the wrong length");
    ABValues out;
    out.log_a.assign(static_cast<std::size_t>(n), kNegInf);
    out.log_b.assign(static_cast<std::size_t>(n), kNegInf);
    std::vector<double> all;
    for (auto g : code.codewords()) all.push_back(-K * compensated_dot(u, g, -1));
    out.log_z = log_sum_exp(all);
    for (int k = 0; k < n; ++k) {
        std::vector<double> ones, zeros;
        for (auto g : code.codewords()) {
            const double x = -K * compensated_dot(u, g, k);
            ((g >> k) & 1U ? ones : zeros).push_back(x);
        }
        out.log_a[static_cast<std::size_t>(k)] = log_sum_exp(ones);
        out.log_b[static_cast<std::size_t>(k)] = log_sum_exp(zeros);
        if (ones.empty() || zeros.empty()) out.degenerate.push_back(k);
    }
    return out;
}

double oracle_local_min(const ConstituentCode& code, std::span<const double> u) {
    if (static_cast<int>(u.size()) != code.length()) throw InputError("u has the wrong length");
    double best = kPosInf;
    for (auto g : code.codewords()) best = std::min(best, compensated_dot(u, g, -1));
    return best;
}

Rational to_rational(double x) {
    if (!std::isfinite(x)) throw InputError("cannot convert a non-finite value to a rational");
    int e = 0;
    const double m = std::frexp(x, &e);
    const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    const Rational r{BigInt(mant)};
    const int shift = e - 53;
    const BigInt pow2 = BigInt(1) << std::abs(shift);
    return shift >= 0 ? r * Rational(pow2) : r / Rational(pow2);
}

std::optional<LocalWeighting> local_weighting(const TannerGraph& graph, std::span<const Rational> c) {
    if (static_cast<int>(c.size()) != graph.n_vars()) throw InputError("point length differs from N");
    LocalWeighting out;
    for (const auto& con : graph.constraints()) {
        const auto& words = con.code->codewords();
        const std::size_t d = con.vars.size();
        std::vector<std::vector<Rational>> a(d + 1, std::vector<Rational>(words.size()));
        std::vector<Rational> b(d + 1);
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t g = 0; g < words.size(); ++g) a[p][g] = (words[g] >> p) & 1U ? 1 : 0;
            b[p] = c[static_cast<std::size_t>(con.vars[p])];
        }
        for (std::size_t g = 0; g < words.size(); ++g) a[d][g] = 1;
        b[d] = 1;
        StandardLp lp{std::move(a), std::move(b), std::vector<Rational>(words.size(), Rational(0))};
        auto sol = solve_exact_lp(lp);
        if (!sol) return std::nullopt;
        out.weights.push_back(std::move(sol->y));
    }
    return out;
}

bool verify_local_weighting(const TannerGraph& graph, std::span<const Rational> c, const LocalWeighting& w) {
    if (static_cast<int>(c.size()) != graph.n_vars() ||
        static_cast<int>(w.weights.size()) != graph.n_constraints())
        return false;
    for (int j = 0; j < graph.n_constraints(); ++j) {
        const auto& con = graph.constraint(j);
        const auto& words = con.code->codewords();
        const auto& wj = w.weights[static_cast<std::size_t>(j)];
        if (wj.size() != words.size()) return false;
        Rational total = 0;
        std::vector<Rational> marg(con.vars.size());
        for (std::size_t g = 0; g < words.size(); ++g) {
            if (wj[g] < 0) return false;
            total += wj[g];
            for (std::size_t p = 0; p < con.vars.size(); ++p)
                if ((words[g] >> p) & 1U) marg[p] += wj[g];
        }
        if (total != 1) return false;
        for (std::size_t p = 0; p < con.vars.size(); ++p)
            if (marg[p] != c[static_cast<std::size_t>(con.vars[p])]) return false;
    }
    return true;
}

}  // namespace lpdec
