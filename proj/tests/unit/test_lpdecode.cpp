#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "brute.hpp"
#include "lpdec/codes.hpp"
#include "lpdec/errors.hpp"
#include "lpdec/lpdecode.hpp"
#include "lpdec/trellis.hpp"

using namespace lpdec;

namespace {

/// Sum over constraints of -(1/K) log sum_g exp(-K u.g), straight from the codeword lists.
double smoothed_dual(const TannerGraph& g, std::span<const double> u, double K) {
    double total = 0.0;
    for (int j = 0; j < g.n_constraints(); ++j) {
        const auto& c = g.constraint(j);
        std::vector<double> uj(c.vars.size());
        for (std::size_t p = 0; p < uj.size(); ++p) uj[p] = u[static_cast<std::size_t>(g.edge_offset(j)) + p];
        total += -static_cast<double>(brute::log_sum(brute::local_words(*c.code), uj, K, -1, 0)) / K;
    }
    return total;
}

std::vector<double> edge_sums(const TannerGraph& g, std::span<const double> u) {
    std::vector<double> s(static_cast<std::size_t>(g.n_vars()), 0.0);
    for (int e = 0; e < g.n_edges(); ++e) s[static_cast<std::size_t>(g.edge_var(e))] += u[static_cast<std::size_t>(e)];
    return s;
}

}  // namespace

TEST_CASE("schedule parameters") {
    ScheduleParams s;
    CHECK(s.K0 == 1000.0);
    CHECK(s.eps0_init == 0.01);
    CHECK(s.growth == 1.26);
    CHECK(s.rounds == 10);
    CHECK(s.iteration_cap(50) == 2000 * 50);
    CHECK(s.final_K() == doctest::Approx(1000.0 * std::pow(1.26, 10)));
    CHECK(s.final_eps0() == doctest::Approx(0.01 / std::pow(1.26, 10)));
    s.growth = 1.0;
    CHECK_THROWS_AS(s.validate(), ParameterError);
    s = ScheduleParams{};
    s.rounds = 0;
    CHECK_THROWS_AS(s.validate(), ParameterError);
}

TEST_CASE("initial state with zero LLRs") {
    const TannerGraph g = gallager_ensemble(12, 3, 6, 1);
    DecoderState st(g, std::vector<double>(12, 0.0), 1000.0, 0.01);
    for (double x : st.u()) CHECK(x == 0.0);
    for (double x : st.v()) CHECK(x == doctest::Approx(0.0));
    for (double x : st.lam_edge()) CHECK(x == doctest::Approx(0.5));
    for (double x : st.eps_node()) CHECK(x == doctest::Approx(0.0));
    CHECK_FALSE(st.any_active());
}

TEST_CASE("initial split of an LLR over two constraints") {
    const TannerGraph g = brute::spc_graph(5, {{0, 1, 2}, {0, 3, 4}});
    std::vector<double> gamma{2.0, 0.5, 0.5, 0.5, 0.5};
    DecoderState st(g, gamma, 1000.0, 0.01);
    for (int e : g.var_edges(0)) CHECK(st.u()[static_cast<std::size_t>(e)] == 2.0 / 2.0);
}

TEST_CASE("edge values always sum to the LLR") {
    const TannerGraph g = gallager_ensemble(60, 3, 6, 4);
    std::mt19937_64 rng(8);
    const auto gamma = brute::bsc_gamma(60, 0.08, rng);
    DecoderState st(g, gamma, 1000.0, 0.01);
    auto sums = edge_sums(g, st.u());
    for (int i = 0; i < 60; ++i) CHECK(sums[static_cast<std::size_t>(i)] == doctest::Approx(gamma[static_cast<std::size_t>(i)]));
    std::mt19937_64 pick_rng(1);
    for (int t = 0; t < 300 && st.any_active(); ++t) {
        const int k = st.pick(PickRule::Fifo, pick_rng);
        st.iterate_once(k);
        sums = edge_sums(g, st.u());
        CHECK(sums[static_cast<std::size_t>(k)] == doctest::Approx(gamma[static_cast<std::size_t>(k)]).epsilon(1e-12));
    }
}

TEST_CASE("a coordinate update never lowers the smoothed dual") {
    const TannerGraph g = gallager_ensemble(12, 3, 4, 3);
    std::mt19937_64 rng(2);
    const auto gamma = brute::bsc_gamma(12, 0.15, rng);
    const double K = 5.0;
    DecoderState st(g, gamma, K, 1e-6);
    std::mt19937_64 pick_rng(1);
    double prev = smoothed_dual(g, st.u(), K);
    CHECK(prev == doctest::Approx(smoothed_dual_objective(g, st.u(), K)).epsilon(1e-10));
    for (int t = 0; t < 100 && st.any_active(); ++t) {
        st.iterate_once(st.pick(PickRule::Fifo, pick_rng));
        const double cur = smoothed_dual(g, st.u(), K);
        CHECK(cur >= prev - 1e-10 * std::max(1.0, std::fabs(prev)));
        prev = cur;
    }
}

TEST_CASE("variables settle and leave the active set") {
    const TannerGraph g = brute::spc_graph(5, {{0, 1, 2}, {2, 3, 4}});
    DecoderState st(g, std::vector<double>{1.0, 1.0, 1.0, 1.0, 1.0}, 1000.0, 0.01);
    std::mt19937_64 rng(0);
    int steps = 0;
    while (st.any_active() && steps < 1000) {
        st.iterate_once(st.pick(PickRule::Fifo, rng));
        ++steps;
    }
    CHECK_FALSE(st.any_active());
    for (int i = 0; i < 5; ++i) {
        CHECK_FALSE(st.is_active(i));
        CHECK_THROWS_AS(st.iterate_once(i), InputError);
    }
}

TEST_CASE("positive LLRs decode to zero") {
    const TannerGraph g = gallager_ensemble(60, 3, 6, 2);
    const std::vector<double> gamma(60, std::log(0.95 / 0.05));
    const DecodeResult r = decode(g, gamma, ScheduleParams{});
    for (auto b : r.c_hat) CHECK(b == 0);
    CHECK(r.primal_value >= 0.0);
    CHECK(r.primal_value < 1e-3);
    CHECK(r.dual_value <= r.primal_value);
    CHECK(r.ml_certificate);
}

TEST_CASE("single degree-3 parity check") {
    const TannerGraph g = brute::spc_graph(3, {{0, 1, 2}});
    const std::vector<double> gamma{1.0, 2.0, -3.0};
    const DecodeResult r = decode(g, gamma, ScheduleParams{});
    const auto [word, value] = brute::ml(g, gamma);
    CHECK(value == -2.0);
    CHECK(word == 0b101);
    CHECK(r.c_hat == std::vector<std::uint8_t>{1, 0, 1});
    CHECK(r.dual_value <= r.primal_value);
    CHECK(r.dual_value <= value + 1e-12);
    CHECK(std::fabs(r.primal_value - value) <= r.gap() + 1e-12);
    CHECK(r.gap() < 1e-3);
}

TEST_CASE("duality gap at N=1002 under the default schedule") {
    const TannerGraph g = gallager_ensemble(1002, 3, 6, 1);
    std::mt19937_64 rng(40);
    const auto gamma = brute::bsc_gamma(1002, 0.04, rng);
    const DecodeResult r = decode(g, gamma, ScheduleParams{});
    CHECK(r.dual_value <= r.primal_value);
    CHECK(r.gap() / 1002.0 <= 0.01);
    CHECK(brute::in_parity_polytope(g, r.lam_tilde, 1e-6));
}

TEST_CASE("weak duality and feasibility across random draws") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 10; ++t) {
        const TannerGraph g = gallager_ensemble(60, 3, 6, 100 + static_cast<std::uint64_t>(t));
        const auto gamma = brute::bsc_gamma(60, 0.07, rng);
        for (auto rule : {EpsilonRule::Adaptive, EpsilonRule::ScheduleFloor, EpsilonRule::Tight}) {
            DecodeOptions opts;
            opts.eps_rule = rule;
            const DecodeResult r = decode(g, gamma, ScheduleParams{}, opts);
            CHECK(r.dual_value <= r.primal_value);
            CHECK(brute::in_parity_polytope(g, r.lam_tilde, 1e-6));
        }
    }
}

TEST_CASE("odd-set membership test") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const TannerGraph g = gallager_ensemble(12, 3, 4, 2);
    const auto words = brute::global_words(g);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    int inside = 0;
    for (int t = 0; t < 400; ++t) {
        // A mixture of two codewords, then noise on every coordinate.
        const auto w0 = words[pick(rng)], w1 = words[pick(rng)];
        const double mix = unit(rng), noise = (t % 4) * 0.05;
        std::vector<double> x(12);
        for (int i = 0; i < 12; ++i) {
            const double v = mix * ((w0 >> i) & 1U) + (1.0 - mix) * ((w1 >> i) & 1U);
            x[static_cast<std::size_t>(i)] = std::clamp(v + noise * (unit(rng) - 0.5), 0.0, 1.0);
        }
        const auto got = in_parity_polytope(g, x, 1e-12);
        REQUIRE(got.has_value());
        CHECK(*got == brute::in_parity_polytope(g, x, 1e-12));
        inside += *got;
    }
    CHECK(inside > 0);
    CHECK(inside < 400);

    std::vector<double> centre(12, 0.5);
    CHECK(*in_parity_polytope(g, centre));
    centre[0] = -1e-3;
    CHECK_FALSE(*in_parity_polytope(g, centre));
    CHECK(*in_parity_polytope(g, centre, 2e-3));

    CodeCache cache;
    const TannerGraph coset(3, {Constraint{{0, 1, 2}, cache.get(1, {1, 1, 1}, 1)}});
    CHECK(*in_parity_polytope(coset, std::vector<double>{1, 0, 0}));
    CHECK_FALSE(*in_parity_polytope(coset, std::vector<double>{0, 0, 0}));
    CHECK_FALSE(*in_parity_polytope(coset, std::vector<double>{1, 1, 0}));

    const TannerGraph ham(7, {Constraint{{0, 1, 2, 3, 4, 5, 6}, cache.get(3, {1, 2, 3, 4, 5, 6, 7})}});
    CHECK_FALSE(in_parity_polytope(ham, std::vector<double>(7, 0.0)).has_value());
}

TEST_CASE("tight recovery shrinks no more than the adaptive rule") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 8; ++t) {
        const TannerGraph g = gallager_ensemble(60, 3, 6, 200 + static_cast<std::uint64_t>(t));
        const auto gamma = brute::bsc_gamma(60, 0.05, rng);
        DecodeOptions adaptive, tight;
        adaptive.eps_rule = EpsilonRule::Adaptive;
        tight.eps_rule = EpsilonRule::Tight;
        const DecodeResult a = decode(g, gamma, ScheduleParams{}, adaptive);
        const DecodeResult b = decode(g, gamma, ScheduleParams{}, tight);
        CHECK(b.lam == a.lam);
        CHECK(b.c_hat == a.c_hat);
        CHECK(b.eps <= a.eps);
        CHECK(b.primal_value <= a.primal_value + 1e-12);
        CHECK(b.dual_value <= b.primal_value);
        CHECK(brute::in_parity_polytope(g, b.lam_tilde, 1e-9));
    }
}

TEST_CASE("random pick rule is reproducible") {
    const TannerGraph g = gallager_ensemble(60, 3, 6, 7);
    std::mt19937_64 rng(3);
    const auto gamma = brute::bsc_gamma(60, 0.06, rng);
    DecodeOptions opts;
    opts.pick = PickRule::Random;
    opts.seed = 12;
    const DecodeResult a = decode(g, gamma, ScheduleParams{}, opts);
    const DecodeResult b = decode(g, gamma, ScheduleParams{}, opts);
    CHECK(a.lam_tilde == b.lam_tilde);
    CHECK(a.iterations == b.iterations);
    CHECK(a.dual_value <= a.primal_value);
}

TEST_CASE("iteration cap yields a flagged but valid result") {
    const TannerGraph g = gallager_ensemble(60, 3, 6, 5);
    std::mt19937_64 rng(4);
    const auto gamma = brute::bsc_gamma(60, 0.1, rng);
    ScheduleParams s;
    s.max_iters_per_round = 3;
    const DecodeResult r = decode(g, gamma, s);
    CHECK_FALSE(r.converged);
    CHECK(r.dual_value <= r.primal_value);
    CHECK(brute::in_parity_polytope(g, r.lam_tilde, 1e-6));
}

TEST_CASE("primal value") {
    const std::vector<double> gamma{0.5, -1.25, 3.0};
    CHECK(primal_value(gamma, std::vector<double>{0, 0, 0}) == 0.0);
    CHECK(primal_value(gamma, std::vector<double>{0, 1, 0}) == -1.25);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> a(50), b(50);
    for (auto& x : a) x = uni(rng);
    for (auto& x : b) x = uni(rng);
    double expect = 0.0;
    for (std::size_t i = 50; i-- > 0;) expect += a[i] * b[i];
    CHECK(primal_value(a, b) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("input validation") {
    const TannerGraph g = brute::spc_graph(3, {{0, 1, 2}});
    CHECK_THROWS_AS(decode(g, std::vector<double>{1.0, 2.0}, ScheduleParams{}), InputError);
    CHECK_THROWS_AS(decode(g, std::vector<double>{1.0, std::nan(""), 2.0}, ScheduleParams{}), InputError);
}
