#include "lpdec/merge.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <utility>

namespace lpdec {

namespace {

class CycleSearch {
public:
    CycleSearch(const TannerGraph& graph, int max_len, CycleList& out)
        : graph_(graph), max_vars_(max_len / 2), out_(out),
          on_path_(static_cast<std::size_t>(graph.n_vars()), 0),
          check_used_(static_cast<std::size_t>(graph.n_constraints()), 0) {}

    void run() {
        for (int s = 0; s < graph_.n_vars(); ++s) {
            start_ = s;
            vars_.assign(1, s);
            checks_.clear();
            on_path_[static_cast<std::size_t>(s)] = 1;
            extend(s);
            on_path_[static_cast<std::size_t>(s)] = 0;
        }
    }

private:
    void extend(int x) {
        for (int j : graph_.var_constraints(x)) {
            if (check_used_[static_cast<std::size_t>(j)]) continue;
            check_used_[static_cast<std::size_t>(j)] = 1;
            checks_.push_back(j);
            for (int y : graph_.constraint(j).vars) {
                if (y == x) continue;
                if (y == start_) {
                    if (vars_.size() >= 2) record();
                    continue;
                }
                if (y < start_ || on_path_[static_cast<std::size_t>(y)]) continue;
                if (static_cast<int>(vars_.size()) >= max_vars_) continue;
                on_path_[static_cast<std::size_t>(y)] = 1;
                vars_.push_back(y);
                extend(y);
                vars_.pop_back();
                on_path_[static_cast<std::size_t>(y)] = 0;
            }
            checks_.pop_back();
            check_used_[static_cast<std::size_t>(j)] = 0;
        }
    }

    void record() {
        // Each cycle is met in both directions; keep the one whose first check is smaller.
        if (checks_.front() > checks_.back()) return;
        out_.cycles.push_back(Cycle{vars_, checks_});
    }

    const TannerGraph& graph_;
    int max_vars_;
    CycleList& out_;
    int start_ = 0;
    std::vector<int> vars_, checks_;
    std::vector<char> on_path_, check_used_;
};

}  // namespace

CycleList find_short_cycles(const TannerGraph& graph, int max_len) {
    if (max_len != 4 && max_len != 6 && max_len != 8)
        throw ParameterError("maximum cycle length must be 4, 6 or 8");
    CycleList out;
    CycleSearch(graph, max_len, out).run();
    std::sort(out.cycles.begin(), out.cycles.end(), [](const Cycle& a, const Cycle& b) {
        if (a.vars.size() != b.vars.size()) return a.vars.size() < b.vars.size();
        if (a.vars != b.vars) return a.vars < b.vars;
        return a.checks < b.checks;
    });
    return out;
}

MergePlan plan_from_cycles(const CycleList& cycles) {
    MergePlan plan;
    for (const auto& c : cycles.cycles) {
        std::vector<int> g = c.checks;
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
        plan.groups.push_back(std::move(g));
    }
    return plan;
}

CodePtr merged_code(const TannerGraph& graph, std::span<const int> group, std::vector<int>& support) {
    auto name = [&] {
        std::string s = "{";
        for (std::size_t t = 0; t < group.size(); ++t) s += (t ? "," : "") + std::to_string(group[t]);
        return s + "}";
    };
    if (group.size() < 2) throw MergeError("merge group " + name() + " needs at least two constraints");
    support.clear();
    for (int j : group) {
        if (j < 0 || j >= graph.n_constraints()) throw MergeError("merge group " + name() + " names an unknown constraint");
        const auto& v = graph.constraint(j).vars;
        support.insert(support.end(), v.begin(), v.end());
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    const int n = static_cast<int>(support.size());
    if (n > kMaxMergedSupport)
        throw MergeError("merge group " + name() + " spans " + std::to_string(n) + " variables; limit is " +
                         std::to_string(kMaxMergedSupport));

    // Stacked rows as position masks with their syndrome bit.
    std::vector<std::pair<std::uint32_t, int>> rows;
    for (int j : group) {
        const auto& c = graph.constraint(j);
        std::vector<int> pos(c.vars.size());
        for (std::size_t p = 0; p < c.vars.size(); ++p)
            pos[p] = static_cast<int>(std::lower_bound(support.begin(), support.end(), c.vars[p]) - support.begin());
        for (int r = 0; r < c.code->rows(); ++r) {
            std::uint32_t mask = 0;
            for (std::size_t p = 0; p < c.vars.size(); ++p)
                if ((c.code->column(static_cast<int>(p)) >> r) & 1U) mask |= std::uint32_t{1} << pos[p];
            rows.emplace_back(mask, static_cast<int>((c.code->syndrome() >> r) & 1U));
        }
    }
    std::vector<std::pair<std::uint32_t, int>> basis;
    for (auto row : rows) {
        for (const auto& b : basis)
            if (row.first & (std::uint32_t{1} << std::countr_zero(b.first))) {
                row.first ^= b.first;
                row.second ^= b.second;
            }
        if (row.first == 0) {
            if (row.second) throw MergeError("merge group " + name() + " has no common solution");
            continue;
        }
        const std::uint32_t lead = std::uint32_t{1} << std::countr_zero(row.first);
        for (auto& b : basis)
            if (b.first & lead) {
                b.first ^= row.first;
                b.second ^= row.second;
            }
        basis.push_back(row);
    }
    const int rank = static_cast<int>(basis.size());
    if (n - rank > 16)
        throw MergeError("merge group " + name() + " has 2^" + std::to_string(n - rank) + " codewords; limit is 2^16");
    if (rank > kMaxCheckRows)
        throw MergeError("merge group " + name() + " needs " + std::to_string(rank) + " parity rows");
    std::vector<std::uint32_t> cols(static_cast<std::size_t>(n), 0);
    std::uint32_t syn = 0;
    for (int r = 0; r < rank; ++r) {
        const auto& b = basis[static_cast<std::size_t>(r)];
        for (int p = 0; p < n; ++p)
            if ((b.first >> p) & 1U) cols[static_cast<std::size_t>(p)] |= std::uint32_t{1} << r;
        if (b.second) syn |= std::uint32_t{1} << r;
    }
    return std::make_shared<const ConstituentCode>(rank, std::move(cols), syn);
}

TannerGraph merge_constraints(const TannerGraph& graph, const MergePlan& plan) {
    std::vector<Constraint> cons;
    if (plan.keep_originals) cons = graph.constraints();
    std::set<std::vector<int>> seen_groups;
    std::map<std::pair<std::vector<int>, std::vector<std::uint32_t>>, int> seen_codes;
    for (const auto& g : plan.groups) {
        std::vector<int> key = g;
        std::sort(key.begin(), key.end());
        if (!seen_groups.insert(key).second) continue;
        Constraint c;
        c.code = merged_code(graph, key, c.vars);
        auto k = std::make_pair(c.vars, c.code->codewords());
        if (!seen_codes.emplace(std::move(k), 0).second) continue;
        cons.push_back(std::move(c));
    }
    return TannerGraph(graph.n_vars(), std::move(cons));
}

bool polytope_membership(const TannerGraph& graph, std::span<const double> c, double tol) {
    if (static_cast<int>(c.size()) != graph.n_vars()) throw InputError("point length differs from N");
    for (const auto& con : graph.constraints())
        if (!con.code->is_single_parity())
            throw CodeError("membership by odd-set inequalities needs single parity checks");
    for (double x : c)
        if (!(x >= -tol && x <= 1.0 + tol)) return false;
    for (const auto& con : graph.constraints()) {
        // The smallest left-hand side over odd S puts i in S iff c_i > 1/2, repaired by the
        // cheapest single flip when that set is even.
        double sum = 0.0, repair = std::numeric_limits<double>::infinity();
        int in_s = 0;
        for (int i : con.vars) {
            const double x = c[static_cast<std::size_t>(i)];
            if (x > 0.5) {
                sum += 1.0 - x;
                ++in_s;
            } else {
                sum += x;
            }
            repair = std::min(repair, std::abs(1.0 - 2.0 * x));
        }
        if (in_s % 2 == 0) sum += repair;
        if (sum < 1.0 - tol) return false;
    }
    return true;
}

}  // namespace lpdec
