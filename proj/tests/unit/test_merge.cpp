#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "brute.hpp"
#include "lpdec/codes.hpp"
#include "lpdec/errors.hpp"
#include "lpdec/merge.hpp"
#include "lpdec/reduce.hpp"

using namespace lpdec;

namespace {

std::map<int, int> count_by_length(const CycleList& cl) {
    std::map<int, int> out;
    for (const auto& c : cl.cycles) ++out[c.length()];
    return out;
}

/// Simple cycles by exhaustive walk over (variable, check) sequences, each counted once.
std::map<int, int> reference_cycles(const TannerGraph& g, int max_len) {
    std::set<std::vector<int>> seen;
    std::map<int, int> out;
    const int n = g.n_vars();
    std::vector<int> path;  // alternating variable, check (checks offset by n)
    std::function<void(int)> dfs = [&](int depth) {
        const int last = path.back();
        if (depth % 2 == 1) {  // last entry is a variable
            for (int j : g.var_constraints(last)) {
                if (std::find(path.begin(), path.end(), n + j) != path.end()) continue;
                path.push_back(n + j);
                dfs(depth + 1);
                path.pop_back();
            }
        } else {
            const int j = last - n;
            for (int v : g.constraint(j).vars) {
                if (v == path.front() && static_cast<int>(path.size()) >= 4) {
                    std::vector<int> key = path;
                    std::sort(key.begin(), key.end());
                    std::vector<int> edges;
                    for (std::size_t t = 0; t < path.size(); ++t) {
                        const int a = path[t], b = path[(t + 1) % path.size()];
                        edges.push_back(std::min(a, b) * 1000 + std::max(a, b));
                    }
                    std::sort(edges.begin(), edges.end());
                    if (seen.insert(edges).second) ++out[static_cast<int>(path.size())];
                    continue;
                }
                if (static_cast<int>(path.size()) + 1 >= max_len) continue;
                if (std::find(path.begin(), path.end(), v) != path.end()) continue;
                path.push_back(v);
                dfs(depth + 1);
                path.pop_back();
            }
        }
    };
    for (int v = 0; v < n; ++v) {
        path = {v};
        dfs(1);
    }
    return out;
}

}  // namespace

TEST_CASE("short cycles") {
    SUBCASE("tree") {
        const TannerGraph g = brute::spc_graph(5, {{0, 1, 2}, {2, 3, 4}});
        CHECK(find_short_cycles(g, 8).cycles.empty());
    }
    SUBCASE("two checks sharing two variables") {
        const TannerGraph g = brute::spc_graph(4, {{0, 1, 2}, {0, 1, 3}});
        const auto cl = find_short_cycles(g, 6);
        REQUIRE(cl.cycles.size() == 1);
        CHECK(cl.cycles[0].length() == 4);
        CHECK(cl.cycles[0].vars == std::vector<int>{0, 1});
    }
    SUBCASE("complete bipartite 3 x 3") {
        const TannerGraph g = brute::spc_graph(3, {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
        const auto counts = count_by_length(find_short_cycles(g, 6));
        CHECK(counts.at(4) == 9);
        CHECK(counts.at(6) == 6);
        CHECK(counts == reference_cycles(g, 6));
    }
    SUBCASE("random graphs against an exhaustive walk") {
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            const TannerGraph g = gallager_ensemble(16, 3, 4, seed);
            for (int len : {4, 6, 8}) {
                CAPTURE(seed);
                CAPTURE(len);
                CHECK(count_by_length(find_short_cycles(g, len)) == reference_cycles(g, len));
            }
        }
    }
    SUBCASE("cycles alternate through real edges") {
        const TannerGraph g = gallager_ensemble(60, 3, 6, 2);
        for (const auto& c : find_short_cycles(g, 6).cycles) {
            const std::size_t k = c.vars.size();
            REQUIRE(c.checks.size() == k);
            for (std::size_t t = 0; t < k; ++t) {
                CHECK(g.position_in(c.checks[t], c.vars[t]) >= 0);
                CHECK(g.position_in(c.checks[t], c.vars[(t + 1) % k]) >= 0);
            }
            CHECK(*std::min_element(c.vars.begin(), c.vars.end()) == c.vars.front());
        }
    }
    SUBCASE("length limit") {
        const TannerGraph g = brute::spc_graph(3, {{0, 1, 2}});
        CHECK_THROWS_AS(find_short_cycles(g, 5), ParameterError);
    }
}

TEST_CASE("merge plans") {
    CHECK(plan_from_cycles(CycleList{}).groups.empty());
    CycleList one;
    one.cycles.push_back(Cycle{{0, 1}, {3, 1}});
    const MergePlan p1 = plan_from_cycles(one);
    REQUIRE(p1.groups.size() == 1);
    CHECK(p1.groups[0] == std::vector<int>{1, 3});
    CHECK(p1.keep_originals);

    CycleList two;
    two.cycles.push_back(Cycle{{0, 1, 2}, {0, 1, 2}});
    two.cycles.push_back(Cycle{{3, 4, 5}, {2, 3, 4}});
    const MergePlan p2 = plan_from_cycles(two);
    REQUIRE(p2.groups.size() == 2);
    CHECK(p2.groups[0] == std::vector<int>{0, 1, 2});
    CHECK(p2.groups[1] == std::vector<int>{2, 3, 4});
    CHECK(p2.keep_originals);
}

TEST_CASE("merged local codes") {
    SUBCASE("two parity checks sharing a variable") {
        const TannerGraph g = brute::spc_graph(5, {{0, 1, 2}, {2, 3, 4}});
        std::vector<int> support;
        const std::vector<int> group{0, 1};
        const CodePtr code = merged_code(g, group, support);
        CHECK(support == std::vector<int>{0, 1, 2, 3, 4});
        const auto expect = brute::solutions({{1, 1, 1, 0, 0}, {0, 0, 1, 1, 1}});
        CHECK(expect.size() == 8);
        CHECK(code->codewords() == expect);
    }
    SUBCASE("disjoint checks give the product code") {
        const TannerGraph g = brute::spc_graph(6, {{0, 1, 2}, {3, 4, 5}});
        std::vector<int> support;
        const std::vector<int> group{0, 1};
        CHECK(merged_code(g, group, support)->codewords().size() == 16);
    }
    SUBCASE("merging every check recovers the global code") {
        const TannerGraph g = gallager_ensemble(12, 3, 4, 6);
        std::vector<int> group(static_cast<std::size_t>(g.n_constraints()));
        std::iota(group.begin(), group.end(), 0);
        std::vector<int> support;
        const CodePtr code = merged_code(g, group, support);
        REQUIRE(support.size() == 12);
        std::set<std::uint32_t> got(code->codewords().begin(), code->codewords().end());
        const auto all = brute::global_words(g);
        CHECK(got == std::set<std::uint32_t>(all.begin(), all.end()));

        // The LP over the merged graph has only codewords as vertices, so it returns the ML value.
        MergePlan plan;
        plan.groups.push_back(group);
        const TannerGraph merged = merge_constraints(g, plan);
        plan.keep_originals = false;
        const TannerGraph alone = merge_constraints(g, plan);
        CHECK(alone.n_constraints() == 1);
        std::mt19937_64 rng(12);
        const std::vector<std::int8_t> free(12, -1);
        for (int t = 0; t < 5; ++t) {
            const auto gamma = brute::bsc_gamma(12, 0.2, rng);
            const double ml = brute::ml(g, gamma).second;
            const PinnedSolve s = solve_pinned(merged, gamma, free, ScheduleParams{});
            CHECK(s.lower <= ml + 1e-9);
            CHECK(s.upper >= ml - 1e-9);
            CHECK(s.lower >= ml - 1e-3);
            const PinnedSolve a = solve_pinned(alone, gamma, free, ScheduleParams{});
            CHECK(a.lower <= ml + 1e-9);
            CHECK(a.upper - ml <= 1e-3);
        }
    }
    SUBCASE("size cap") {
        const TannerGraph g = gallager_ensemble(60, 3, 6, 1);
        std::vector<int> group{0, 1, 2, 3, 4, 5, 6};
        std::vector<int> support;
        CHECK_THROWS_AS(merged_code(g, group, support), MergeError);
    }
}

TEST_CASE("merge_constraints keeps originals and removes duplicates") {
    const TannerGraph g = brute::spc_graph(4, {{0, 1, 2}, {0, 1, 3}});
    MergePlan plan;
    plan.groups = {{0, 1}, {1, 0}};
    const TannerGraph m = merge_constraints(g, plan);
    CHECK(m.n_constraints() == 3);
    CHECK(m.constraint(2).vars == std::vector<int>{0, 1, 2, 3});
    plan.keep_originals = false;
    CHECK(merge_constraints(g, plan).n_constraints() == 1);
}

TEST_CASE("polytope membership") {
    const TannerGraph g = gallager_ensemble(20, 3, 4, 3);
    for (auto w : brute::global_words(g)) {
        std::vector<double> c(20);
        for (int i = 0; i < 20; ++i) c[static_cast<std::size_t>(i)] = (w >> i) & 1U;
        CHECK(polytope_membership(g, c, 1e-9));
    }
    CHECK(polytope_membership(g, std::vector<double>(20, 0.5), 0.0));
    std::vector<double> e(20, 0.0);
    e[4] = 1.0;
    CHECK_FALSE(polytope_membership(g, e, 1e-9));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> c(20);
        for (auto& x : c) x = uni(rng) < 0.5 ? uni(rng) * 0.3 : 0.5 + uni(rng) * 0.1;
        CHECK(polytope_membership(g, c, 1e-9) == brute::in_parity_polytope(g, c, 1e-9));
    }

    auto h = std::make_shared<const ConstituentCode>(ConstituentCode::hamming74());
    const TannerGraph gl(7, {Constraint{{0, 1, 2, 3, 4, 5, 6}, h}});
    CHECK_THROWS_AS(polytope_membership(gl, std::vector<double>(7, 0.0), 1e-9), CodeError);
}
