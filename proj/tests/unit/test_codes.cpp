#include <doctest.h>

#include <cmath>
#include <set>

#include "brute.hpp"
#include "lpdec/codes.hpp"
#include "lpdec/errors.hpp"

using namespace lpdec;

namespace {

const char* kSmallAlist =
    "4 2\n"
    "2 3\n"
    "1 2 2 1\n"
    "3 3\n"
    "1 0\n"
    "1 2\n"
    "1 2\n"
    "2 0\n"
    "1 2 3\n"
    "2 3 4\n";

std::vector<std::vector<std::uint8_t>> hamming_h() {
    return {{1, 0, 1, 0, 1, 0, 1}, {0, 1, 1, 0, 0, 1, 1}, {0, 0, 0, 1, 1, 1, 1}};
}

}  // namespace

TEST_CASE("alist of a two-row matrix") {
    const TannerGraph g = parse_alist(kSmallAlist);
    CHECK(g.n_vars() == 4);
    CHECK(g.n_constraints() == 2);
    CHECK(g.constraint(0).vars == std::vector<int>{0, 1, 2});
    CHECK(g.constraint(1).vars == std::vector<int>{1, 2, 3});
    CHECK(g.is_plain_ldpc());
    CHECK(g.degree(1) == 2);
    CHECK(g.degree(3) == 1);
}

TEST_CASE("alist of Hamming(7,4) rows") {
    const std::string text =
        "7 3\n3 4\n1 1 2 1 2 2 3\n4 4 4\n"
        "1 0 0\n2 0 0\n1 2 0\n3 0 0\n1 3 0\n2 3 0\n1 2 3\n"
        "1 3 5 7\n2 3 6 7\n4 5 6 7\n";
    const TannerGraph g = parse_alist(text);
    CHECK(g.n_vars() == 7);
    CHECK(g.n_constraints() == 3);
    const auto words = brute::global_words(g);
    CHECK(words.size() == 16);
    CHECK(brute::min_distance(g) == 3);
}

TEST_CASE("malformed code files") {
    CHECK_THROWS_AS(parse_alist(""), ParseError);
    CHECK_THROWS_AS(parse_code_file(""), ParseError);
    CHECK_THROWS_AS(parse_alist("4 2\n2 3\n1 2 2\n"), ParseError);
    CHECK_THROWS_AS(parse_gldpc("gldpc 3 1\ncheck 1 3 1\n1 2 9\n1 1 1\n"), ParseError);
}

TEST_CASE("alist and GLDPC writers round trip") {
    const TannerGraph g = gallager_ensemble(20, 3, 4, 5);
    const TannerGraph a = parse_code_file(write_alist(g));
    const TannerGraph b = parse_code_file(write_gldpc(g));
    REQUIRE(a.n_constraints() == g.n_constraints());
    REQUIRE(b.n_constraints() == g.n_constraints());
    for (int j = 0; j < g.n_constraints(); ++j) {
        CHECK(std::set<int>(a.constraint(j).vars.begin(), a.constraint(j).vars.end()) ==
              std::set<int>(g.constraint(j).vars.begin(), g.constraint(j).vars.end()));
        CHECK(b.constraint(j).vars == g.constraint(j).vars);
    }
    CHECK(write_alist(a) == write_alist(g));

    auto h = std::make_shared<const ConstituentCode>(ConstituentCode::hamming74());
    const TannerGraph gl = random_gldpc(14, 2, h, 3);
    CHECK(write_gldpc(parse_code_file(write_gldpc(gl))) == write_gldpc(gl));
    CHECK_THROWS_AS(write_alist(gl), Error);
}

TEST_CASE("codeword enumeration") {
    SUBCASE("single parity check of length 3") {
        const auto words = enumerate_codewords({{1, 1, 1}}, 3);
        CHECK(words == std::vector<std::uint32_t>{0b000, 0b110, 0b101, 0b011});
        CHECK(words == brute::solutions({{1, 1, 1}}));
    }
    SUBCASE("Hamming(7,4)") {
        const auto words = enumerate_codewords(hamming_h(), 7);
        CHECK(words.size() == 16);
        CHECK(words == brute::solutions(hamming_h()));
        int dmin = 99;
        for (auto w : words)
            if (w) dmin = std::min(dmin, std::popcount(w));
        CHECK(dmin == 3);
        CHECK(ConstituentCode::hamming74().codewords().size() == 16);
    }
    SUBCASE("zero matrix") {
        const auto words = enumerate_codewords({{0, 0}}, 2);
        CHECK(words == std::vector<std::uint32_t>{0b00, 0b10, 0b01, 0b11});
    }
    SUBCASE("length cap") {
        std::vector<std::vector<std::uint8_t>> wide{std::vector<std::uint8_t>(kMaxEnumerationLength + 1, 1)};
        CHECK_THROWS_AS(enumerate_codewords(wide, kMaxEnumerationLength + 1), SizeError);
    }
}

TEST_CASE("local codes agree with exhaustive search") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 40; ++t) {
        const int n = 3 + static_cast<int>(rng() % 8);
        const int m = 1 + static_cast<int>(rng() % 4);
        std::vector<std::vector<std::uint8_t>> h(static_cast<std::size_t>(m), std::vector<std::uint8_t>(static_cast<std::size_t>(n)));
        for (auto& row : h)
            for (auto& x : row) x = rng() & 1U;
        std::vector<std::uint8_t> s(static_cast<std::size_t>(m));
        std::uint32_t syn = 0;
        for (int r = 0; r < m; ++r) {
            s[static_cast<std::size_t>(r)] = rng() & 1U;
            if (s[static_cast<std::size_t>(r)]) syn |= 1U << r;
        }
        const auto code = ConstituentCode::from_rows(h, syn);
        CHECK(code.codewords() == brute::solutions(h, s));
        auto sorted = code.codewords();
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == brute::local_words(code));
    }
}

TEST_CASE("coset syndrome of a forced neighbour") {
    // Constraint 0 carries the 3x4 code below on variables 0..3; constraint 1 is a single parity
    // check on variables 3, 4, 5. Forcing c = (1, 1, 0) on constraint 1 sets variable 3 to 1.
    const std::vector<std::vector<std::uint8_t>> hj{{1, 0, 0, 1}, {0, 1, 1, 1}, {1, 1, 0, 0}};
    auto cj = std::make_shared<const ConstituentCode>(ConstituentCode::from_rows(hj));
    auto cr = std::make_shared<const ConstituentCode>(ConstituentCode::single_parity(3));
    const TannerGraph g(6, {Constraint{{0, 1, 2, 3}, cj}, Constraint{{3, 4, 5}, cr}});

    const CosetSpec spec = coset_syndrome(g, 0, 1, 0b011);
    CHECK(spec.positions == std::vector<int>{0, 1, 2});
    CHECK(spec.vars == std::vector<int>{0, 1, 2});
    // Fourth column of H_j read top to bottom: (1, 1, 0).
    CHECK(spec.syndrome == 0b011);
    const std::vector<std::vector<std::uint8_t>> base{{1, 0, 0}, {0, 1, 1}, {1, 1, 0}};
    CHECK(spec.code->codewords() == brute::solutions(base, {1, 1, 0}));

    const CosetSpec zero = coset_syndrome(g, 0, 1, 0b000);
    CHECK(zero.syndrome == 0);
    CHECK(zero.code->codewords() == brute::solutions(base));

    CHECK_THROWS_AS(coset_syndrome(g, 0, 1, 0b001), InputError);
}

TEST_CASE("coset of a degree-3 parity check with one neighbour forced to 1") {
    const TannerGraph g = brute::spc_graph(5, {{0, 1, 2}, {2, 3, 4}});
    const CosetSpec spec = coset_syndrome(g, 0, 1, 0b011);
    CHECK(spec.vars == std::vector<int>{0, 1});
    CHECK(spec.code->codewords() == std::vector<std::uint32_t>{0b10, 0b01});
}

TEST_CASE("Gallager ensemble") {
    SUBCASE("N=1002, (3,6)") {
        const TannerGraph g = gallager_ensemble(1002, 3, 6, 1);
        CHECK(g.n_constraints() == 501);
        for (int i = 0; i < g.n_vars(); ++i) CHECK(g.degree(i) == 3);
        for (const auto& c : g.constraints()) {
            CHECK(c.vars.size() == 6);
            CHECK(std::set<int>(c.vars.begin(), c.vars.end()).size() == 6);
        }
    }
    SUBCASE("deterministic for a fixed seed") {
        CHECK(write_alist(gallager_ensemble(8, 2, 4, 9)) == write_alist(gallager_ensemble(8, 2, 4, 9)));
    }
    SUBCASE("N=20, (3,4)") {
        const TannerGraph g = gallager_ensemble(20, 3, 4, 2);
        CHECK(g.n_constraints() == 15);
        for (int i = 0; i < g.n_vars(); ++i) CHECK(g.degree(i) == 3);
    }
    SUBCASE("divisibility") {
        CHECK_THROWS_AS(gallager_ensemble(10, 3, 4, 1), ParameterError);
    }
}

namespace {

/// |C| * n * max |Xi| with Xi = Psi~^T (Psi~ Psi~^T)^{-1}, by Gauss-Jordan in long double.
long double eta_reference(const std::vector<std::uint32_t>& words, int n) {
    const int d = n + 1;
    auto col = [&](std::uint32_t w, int a) -> long double { return a == 0 ? 1.0L : ((w >> (a - 1)) & 1U); };
    std::vector<std::vector<long double>> m(static_cast<std::size_t>(d), std::vector<long double>(2 * static_cast<std::size_t>(d), 0.0L));
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b)
            for (auto w : words) m[a][b] += col(w, a) * col(w, b);
        m[a][d + a] = 1.0L;
    }
    for (int c = 0; c < d; ++c) {
        int piv = c;
        for (int r = c + 1; r < d; ++r)
            if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
        std::swap(m[c], m[piv]);
        const long double p = m[c][c];
        for (auto& x : m[c]) x /= p;
        for (int r = 0; r < d; ++r) {
            if (r == c) continue;
            const long double f = m[r][c];
            for (int k = 0; k < 2 * d; ++k) m[r][k] -= f * m[c][k];
        }
    }
    long double mx = 0.0L;
    for (auto w : words)
        for (int b = 0; b < d; ++b) {
            long double s = 0.0L;
            for (int a = 0; a < d; ++a) s += col(w, a) * m[a][d + b];
            mx = std::max(mx, std::fabs(s));
        }
    return mx * static_cast<long double>(words.size()) * n;
}

}  // namespace

TEST_CASE("eta") {
    SUBCASE("degree-3 parity check") {
        const TannerGraph g = brute::spc_graph(3, {{0, 1, 2}});
        const double eta = compute_eta(g);
        CHECK(eta > 0.0);
        CHECK(std::isfinite(eta));
    }
    SUBCASE("identical constraints share the same term") {
        const TannerGraph g = brute::spc_graph(6, {{0, 1, 2, 3}, {2, 3, 4, 5}});
        CHECK(g.constraint(0).code->eta_term() == g.constraint(1).code->eta_term());
        CHECK(compute_eta(g) == g.constraint(0).code->eta_term());
    }
    SUBCASE("degree-6 parity check against an independent solve") {
        const auto code = ConstituentCode::single_parity(6);
        const long double ref = eta_reference(brute::local_words(code), 6);
        CHECK(std::fabs(code.eta_term() - static_cast<double>(ref)) <= 1e-9 * static_cast<double>(ref));
    }
    SUBCASE("Hamming(7,4) against an independent solve") {
        const auto code = ConstituentCode::hamming74();
        const long double ref = eta_reference(brute::local_words(code), 7);
        CHECK(std::fabs(code.eta_term() - static_cast<double>(ref)) <= 1e-9 * static_cast<double>(ref));
    }
    SUBCASE("singular Gram matrix") {
        const TannerGraph g = brute::spc_graph(2, {{0, 1}});
        CHECK_FALSE(g.constraint(0).code->gram_invertible());
        CHECK_THROWS_AS(compute_eta(g), CodeError);
    }
}

TEST_CASE("BSC log-likelihood ratios") {
    const std::vector<std::uint8_t> y{0, 1};
    const auto g = bsc_llrs(y, 0.1);
    CHECK(g[0] == doctest::Approx(std::log(9.0)).epsilon(1e-15));
    CHECK(g[1] == doctest::Approx(-std::log(9.0)).epsilon(1e-15));

    const std::vector<std::uint8_t> zeros(10, 0);
    const auto z = bsc_llrs(zeros, 0.045);
    for (double x : z) {
        CHECK(x > 0.0);
        CHECK(x == z[0]);
    }
    const std::vector<std::uint8_t> mixed{1, 0, 1, 1};
    for (double x : bsc_llrs(mixed, 0.2)) CHECK(std::fabs(x) == doctest::Approx(std::log(4.0)));

    CHECK_THROWS_AS(bsc_llrs(y, 0.5), ParameterError);
    CHECK_THROWS_AS(bsc_llrs(y, 0.0), ParameterError);
}

TEST_CASE("erasure renormalisation") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(bec_renormalize(std::vector<double>{inf, -inf, 0.5}) == std::vector<double>{1.0, -1.0, 0.5});
    CHECK(bec_renormalize(std::vector<double>{0.25, -3.0}) == std::vector<double>{0.25, -3.0});
    CHECK(bec_renormalize(std::vector<double>{0.0, 0.0}) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("Tanner graph bookkeeping") {
    const TannerGraph g = gallager_ensemble(20, 3, 4, 1);
    int edges = 0;
    for (int j = 0; j < g.n_constraints(); ++j) {
        CHECK(g.edge_offset(j) == edges);
        for (std::size_t p = 0; p < g.constraint(j).vars.size(); ++p) {
            const int e = edges + static_cast<int>(p);
            CHECK(g.edge_var(e) == g.constraint(j).vars[p]);
            CHECK(g.edge_constraint(e) == j);
            CHECK(g.position_in(j, g.constraint(j).vars[p]) == static_cast<int>(p));
        }
        edges += static_cast<int>(g.constraint(j).vars.size());
    }
    CHECK(edges == g.n_edges());
    std::vector<std::uint8_t> zero(20, 0), one(20, 0);
    one[0] = 1;
    CHECK(g.is_codeword(zero));
    CHECK_FALSE(g.is_codeword(one));
}
