#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpdec/bounds.hpp"
#include "lpdec/codes.hpp"
#include "lpdec/errors.hpp"
#include "lpdec/harness.hpp"
#include "lpdec/lpdecode.hpp"
#include "lpdec/merge.hpp"
#include "lpdec/polytope.hpp"

namespace {

using namespace lpdec;

/// Bad flag combinations detected after parsing; reported with exit status 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CodeSource {
    std::string code;
    std::string gldpc;
    bool hamming74 = false;
    std::vector<int> gallager;
    std::uint64_t seed = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--code", code, "alist or GLDPC code file")->check(CLI::ExistingFile);
        cmd->add_option("--gldpc", gldpc, "GLDPC code file")->check(CLI::ExistingFile);
        cmd->add_flag("--hamming74", hamming74, "single Hamming(7,4) constraint on 7 variables");
        cmd->add_option("--gallager", gallager, "Gallager ensemble N dv dc (drawn with --seed)")->expected(3);
        cmd->add_option("--seed", seed, "random seed")->capture_default_str();
    }

    TannerGraph load() const {
        const int given = !code.empty() + !gldpc.empty() + hamming74 + !gallager.empty();
        if (given == 0) throw UsageError("no code given: use --code, --gldpc, --hamming74 or --gallager");
        if (given > 1) throw UsageError("more than one code source given");
        if (!code.empty()) return load_code_file(code);
        if (!gldpc.empty()) return parse_gldpc(read_text(gldpc));
        if (hamming74) {
            std::vector<int> vars{0, 1, 2, 3, 4, 5, 6};
            auto h = std::make_shared<const ConstituentCode>(ConstituentCode::hamming74());
            return TannerGraph(7, {Constraint{vars, h}});
        }
        return gallager_ensemble(gallager[0], gallager[1], gallager[2], seed);
    }

    static std::string read_text(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw UsageError("cannot open input file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
};

struct ScheduleFlags {
    ScheduleParams sched;
    int threads = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--K0", sched.K0, "initial K")->capture_default_str();
        cmd->add_option("--eps0", sched.eps0_init, "initial eps0")->capture_default_str();
        cmd->add_option("--growth", sched.growth, "per-round growth of K and shrink of eps0")->capture_default_str();
        cmd->add_option("--rounds", sched.rounds, "annealing rounds")->capture_default_str();
        cmd->add_option("--max-iters", sched.max_iters_per_round, "iteration cap per round (0: 2000 N)")
            ->capture_default_str();
        cmd->add_option("--threads", threads, "worker threads (0: machine parallelism)")->capture_default_str();
    }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write output file: " + path);
    out << text;
    if (!out) throw Error("write failed: " + path);
}

std::vector<double> read_llrs(const std::string& path, int n) {
    std::istringstream in(CodeSource::read_text(path));
    std::vector<double> gamma;
    double x = 0.0;
    while (in >> x) gamma.push_back(x);
    if (!in.eof()) throw InputError("non-numeric entry in LLR file " + path);
    if (static_cast<int>(gamma.size()) != n)
        throw InputError("LLR file has " + std::to_string(gamma.size()) + " entries, code has " +
                         std::to_string(n) + " variables");
    return gamma;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// Channel LLRs either from a file or from one BSC draw of the all-zero word.
std::vector<double> channel_gamma(const TannerGraph& g, const std::string& llr_path, std::optional<double> p,
                                  std::uint64_t seed) {
    if (!llr_path.empty() && p) throw UsageError("--llr and --p are mutually exclusive");
    if (!llr_path.empty()) return read_llrs(llr_path, g.n_vars());
    if (!p) throw UsageError("give channel LLRs with --llr or a crossover probability with --p");
    if (!(*p > 0.0 && *p < 0.5)) throw UsageError("--p must lie in (0, 0.5)");
    const auto flips = channel_draw(g.n_vars(), *p, seed, 0);
    return bsc_llrs(flips, *p);
}

EpsilonRule parse_eps_rule(const std::string& s) {
    if (s == "adaptive") return EpsilonRule::Adaptive;
    if (s == "schedule") return EpsilonRule::ScheduleFloor;
    if (s == "tight") return EpsilonRule::Tight;
    throw UsageError("unknown --eps-rule '" + s + "' (expected tight, adaptive or schedule)");
}

PickRule parse_pick(const std::string& s) {
    if (s == "fifo") return PickRule::Fifo;
    if (s == "random") return PickRule::Random;
    throw UsageError("unknown --pick '" + s + "' (expected fifo or random)");
}

std::string bits_string(const std::vector<std::uint8_t>& bits) {
    std::string s;
    for (auto b : bits) s += b ? '1' : '0';
    return s;
}

/// One facet system per distinct local code, shared by every constraint using it.
std::vector<FacetSystem> local_facets(const TannerGraph& g) {
    std::map<const ConstituentCode*, FacetSystem> cache;
    std::vector<FacetSystem> out;
    out.reserve(static_cast<std::size_t>(g.n_constraints()));
    for (const auto& c : g.constraints()) {
        auto it = cache.find(c.code.get());
        if (it == cache.end()) it = cache.emplace(c.code.get(), extreme_rays(*c.code)).first;
        out.push_back(it->second);
    }
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"LP decoding, distance bounds and local-code polytopes for LDPC and GLDPC codes"};
    app.require_subcommand(1, 1);

    CodeSource src;
    ScheduleFlags sf;
    std::string out;
    std::string llr_path;
    std::optional<double> p_single;
    std::string eps_rule = "tight";
    std::string pick = "fifo";

    auto* decode_cmd = app.add_subcommand("decode", "decode one channel output with the iterative LP decoder");
    src.attach(decode_cmd);
    sf.attach(decode_cmd);
    decode_cmd->add_option("--llr", llr_path, "file of N channel LLRs")->check(CLI::ExistingFile);
    decode_cmd->add_option("--p", p_single, "BSC crossover; draws one received word with --seed");
    decode_cmd->add_option("--eps-rule", eps_rule, "tight, adaptive or schedule")->capture_default_str();
    decode_cmd->add_option("--pick", pick, "fifo or random")->capture_default_str();
    decode_cmd->add_option("--out", out, "per-variable CSV");

    auto* mindist_cmd = app.add_subcommand("mindist", "forced-codeword bounds on d_min and d_frac");
    src.attach(mindist_cmd);
    sf.attach(mindist_cmd);
    mindist_cmd->add_option("--out", out, "branch CSV");

    std::optional<double> bar_lo, bar_hi;
    int bisect_steps = 8;
    auto* bar_cmd = app.add_subcommand("bar", "bisection with pairwise refinement above the forced bound");
    src.attach(bar_cmd);
    sf.attach(bar_cmd);
    bar_cmd->add_option("--bar-lo", bar_lo, "lowest level (default: the forced lower bound)");
    bar_cmd->add_option("--bar-hi", bar_hi, "highest level (default: twice the forced upper bound)");
    bar_cmd->add_option("--bisect-steps", bisect_steps, "bisection steps")->capture_default_str();
    bar_cmd->add_option("--out", out, "CSV of tested levels");

    std::optional<double> penalty_b;
    auto* frac_cmd = app.add_subcommand("fracdist", "penalty lower bound on the fractional distance");
    src.attach(frac_cmd);
    sf.attach(frac_cmd);
    frac_cmd->add_option("--penalty-B", penalty_b, "penalty weight (default: 10 N)");
    frac_cmd->add_option("--out", out, "branch CSV");

    bool spc_gf4 = false;
    int constraint_index = 0;
    auto* poly_cmd = app.add_subcommand("polytope", "facets of a local code's codeword polytope");
    src.attach(poly_cmd);
    poly_cmd->add_flag("--spc-gf4-n4", spc_gf4, "binary image of the length-4 single parity code over GF(4)");
    poly_cmd->add_option("--constraint", constraint_index, "constraint of --code/--gldpc to use")
        ->capture_default_str();
    poly_cmd->add_option("--out", out, "facet file");

    int max_cycle_len = 6;
    auto* merge_cmd = app.add_subcommand("merge", "merge the constraints on every short cycle");
    src.attach(merge_cmd);
    merge_cmd->add_option("--max-cycle-len", max_cycle_len, "longest cycle merged (4, 6 or 8)")
        ->capture_default_str();
    merge_cmd->add_option("--out", out, "merged GLDPC file");

    std::vector<double> ps;
    std::vector<std::string> decoders{"lp"};
    long trials = 100;
    long first_trial = 0;
    int bp_iters = 100;
    auto* sim_cmd = app.add_subcommand("simulate", "word error rate of the all-zero word over a BSC");
    src.attach(sim_cmd);
    sf.attach(sim_cmd);
    sim_cmd->add_option("--p", ps, "crossover probabilities")->required();
    sim_cmd->add_option("--decoder", decoders, "lp, lp-merged or bp")->capture_default_str();
    sim_cmd->add_option("--trials", trials, "trials per cell")->capture_default_str();
    sim_cmd->add_option("--first-trial", first_trial, "index of the first channel draw")->capture_default_str();
    sim_cmd->add_option("--max-cycle-len", max_cycle_len, "longest cycle merged by lp-merged")
        ->capture_default_str();
    sim_cmd->add_option("--bp-iters", bp_iters, "BP iteration cap")->capture_default_str();
    sim_cmd->add_option("--out", out, "CSV, one row per (p, decoder)");

    std::vector<int> random_gldpc_args;
    auto* gen_cmd = app.add_subcommand("gencode", "draw a code and write it out");
    gen_cmd->add_option("--gallager", src.gallager, "Gallager ensemble N dv dc")->expected(3);
    gen_cmd->add_option("--random-gldpc", random_gldpc_args, "N dv: Hamming(7,4) constraints")->expected(2);
    gen_cmd->add_option("--seed", src.seed, "random seed")->capture_default_str();
    gen_cmd->add_option("--out", out, "code file");

    auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive reference values for small codes");
    src.attach(oracle_cmd);
    oracle_cmd->add_option("--llr", llr_path, "file of N channel LLRs for an ML decision")
        ->check(CLI::ExistingFile);
    oracle_cmd->add_option("--p", p_single, "BSC crossover for an ML decision on one draw");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    if (gen_cmd->parsed()) {
        const bool gal = !src.gallager.empty();
        if (gal == !random_gldpc_args.empty())
            throw UsageError("gencode needs exactly one of --gallager or --random-gldpc");
        TannerGraph g;
        std::string text;
        if (gal) {
            g = gallager_ensemble(src.gallager[0], src.gallager[1], src.gallager[2], src.seed);
            text = write_alist(g);
        } else {
            auto h = std::make_shared<const ConstituentCode>(ConstituentCode::hamming74());
            g = random_gldpc(random_gldpc_args[0], random_gldpc_args[1], h, src.seed);
            text = write_gldpc(g);
        }
        if (out.empty()) out = gal ? "code.alist" : "code.gldpc";
        write_file(out, text);
        std::cout << "n=" << g.n_vars() << " constraints=" << g.n_constraints() << " out=" << out << "\n";
        return 0;
    }

    if (poly_cmd->parsed()) {
        FacetSystem fs;
        std::string what;
        if (spc_gf4) {
            if (src.hamming74 || !src.code.empty() || !src.gldpc.empty() || !src.gallager.empty())
                throw UsageError("--spc-gf4-n4 cannot be combined with another code source");
            fs = extreme_rays(spc_gf4_n4().binary_codewords);
            what = "spc-gf4-n4";
        } else {
            const TannerGraph g = src.load();
            if (constraint_index < 0 || constraint_index >= g.n_constraints())
                throw UsageError("--constraint out of range");
            fs = extreme_rays(*g.constraint(constraint_index).code);
            what = src.hamming74 ? "hamming74" : "constraint " + std::to_string(constraint_index);
        }
        if (out.empty()) out = "facets.txt";
        write_file(out, write_facet_file(fs));
        std::cout << what << ": facets=" << fs.rays.size() << " dim=" << fs.dim << " out=" << out << "\n";
        return 0;
    }

    const TannerGraph graph = src.load();
    sf.sched.validate();
    BoundsOptions bopts;
    bopts.threads = sf.threads;

    if (decode_cmd->parsed()) {
        DecodeOptions opts;
        opts.eps_rule = parse_eps_rule(eps_rule);
        opts.pick = parse_pick(pick);
        opts.seed = src.seed;
        const auto gamma = channel_gamma(graph, llr_path, p_single, src.seed);
        const DecodeResult r = decode(graph, gamma, sf.sched, opts);
        std::string csv = "i,lam_tilde,c_hat\n";
        for (int i = 0; i < graph.n_vars(); ++i)
            csv += std::to_string(i) + "," + fmt(r.lam_tilde[static_cast<std::size_t>(i)]) + "," +
                   std::to_string(r.c_hat[static_cast<std::size_t>(i)]) + "\n";
        if (out.empty()) out = "decode.csv";
        write_file(out, csv);
        std::cout << "primal=" << fmt(r.primal_value) << " dual=" << fmt(r.dual_value) << " gap=" << fmt(r.gap())
                  << " ml_certificate=" << (r.ml_certificate ? 1 : 0) << " converged=" << (r.converged ? 1 : 0)
                  << " iterations=" << r.iterations << " out=" << out << "\n";
        return 0;
    }

    if (mindist_cmd->parsed()) {
        const auto rep = min_distance_bounds(graph, sf.sched, bopts);
        if (out.empty()) out = "mindist.csv";
        write_file(out, branches_csv(rep.per_check, rep.l_min_lower, rep.l_min_upper, rep.total_iterations));
        std::cout << "l_min_lower=" << fmt(rep.l_min_lower) << " l_min_upper=" << fmt(rep.l_min_upper)
                  << " branches=" << rep.per_check.size() << " iterations=" << rep.total_iterations
                  << " seconds=" << fmt(rep.seconds) << " out=" << out << "\n";
        return 0;
    }

    if (bar_cmd->parsed()) {
        const auto base = min_distance_bounds(graph, sf.sched, bopts);
        const double lo = bar_lo.value_or(base.l_min_lower);
        const double hi = bar_hi.value_or(2.0 * base.l_min_upper);
        if (!(lo < hi)) throw UsageError("--bar-lo must be below --bar-hi");
        const auto rep = bar_method(graph, base, sf.sched, lo, hi, bisect_steps, bopts);
        std::string csv = "level,attainable\n";
        for (std::size_t k = 0; k < rep.tested.size(); ++k)
            csv += fmt(rep.tested[k]) + "," + (rep.attainable[k] ? "1" : "0") + "\n";
        if (out.empty()) out = "bar.csv";
        write_file(out, csv);
        std::cout << "bar_level=" << fmt(rep.level) << " l_min_lower=" << fmt(rep.l_min_lower)
                  << " refinements=" << rep.refinements << " out=" << out << "\n";
        return 0;
    }

    if (frac_cmd->parsed()) {
        const double B = penalty_b.value_or(10.0 * graph.n_vars());
        const auto rep = graph.is_plain_ldpc()
                             ? frac_distance_lower(graph, B, sf.sched, bopts)
                             : frac_distance_lower_facets(graph, local_facets(graph), B, sf.sched, bopts);
        if (out.empty()) out = "fracdist.csv";
        write_file(out, branches_csv(rep.branches, rep.d_frac_B, rep.d_frac_B, rep.total_iterations));
        std::cout << "d_frac_B=" << fmt(rep.d_frac_B) << " d_frac_box=" << fmt(rep.d_frac_box)
                  << " d_frac_diag=" << fmt(rep.d_frac_diag) << " B=" << fmt(B)
                  << " iterations=" << rep.total_iterations << " seconds=" << fmt(rep.seconds) << " out=" << out
                  << "\n";
        return 0;
    }

    if (merge_cmd->parsed()) {
        const auto cycles = find_short_cycles(graph, max_cycle_len);
        const auto plan = plan_from_cycles(cycles);
        const TannerGraph merged = merge_constraints(graph, plan);
        if (out.empty()) out = "merged.gldpc";
        write_file(out, write_gldpc(merged));
        std::cout << "cycles=" << cycles.cycles.size() << " constraints=" << graph.n_constraints() << "->"
                  << merged.n_constraints() << " out=" << out << "\n";
        return 0;
    }

    if (sim_cmd->parsed()) {
        std::string csv = simulation_csv_header();
        std::string summary;
        for (double p : ps) {
            for (const auto& name : decoders) {
                SimConfig cfg;
                cfg.p = p;
                cfg.trials = trials;
                cfg.first_trial = first_trial;
                cfg.seed = src.seed;
                cfg.decoder = parse_decoder(name);
                cfg.max_bp_iters = bp_iters;
                cfg.max_cycle_len = max_cycle_len;
                cfg.threads = sf.threads;
                const SimResult r = simulate(graph, cfg, sf.sched);
                csv += simulation_csv_row(r);
                if (!summary.empty()) summary += " ";
                summary += r.decoder + "@" + fmt(p) + ":wer=" + fmt(r.wer);
            }
        }
        if (out.empty()) out = "simulate.csv";
        write_file(out, csv);
        std::cout << summary << " out=" << out << "\n";
        return 0;
    }

    if (oracle_cmd->parsed()) {
        std::ostringstream line;
        const auto d = oracle_min_distance(graph);
        line << "n=" << graph.n_vars() << " d_min=" << (d ? std::to_string(*d) : std::string("none"));
        if (graph.is_plain_ldpc() && graph.n_vars() <= 16) {
            const auto f = oracle_fractional_distance(graph);
            line << " d_frac=" << (f ? f->value.str() : std::string("none"));
        }
        if (!llr_path.empty() || p_single) {
            const auto gamma = channel_gamma(graph, llr_path, p_single, src.seed);
            const MlResult ml = oracle_ml(graph, gamma);
            line << " ml_value=" << fmt(ml.value) << " ml_word=" << bits_string(ml.codeword);
        }
        std::cout << line.str() << "\n";
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const SizeError& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return 2;
    } catch (const ParameterError& e) {
        std::cerr << "invalid parameter: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
