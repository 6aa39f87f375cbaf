#include "lpdec/exact_lp.hpp"

#include "lpdec/errors.hpp"

namespace lpdec {

namespace {

class Tableau {
public:
    Tableau(const StandardLp& lp) : m_(lp.a.size()), n_(lp.cost.size()) {
        for (const auto& row : lp.a)
            if (row.size() != n_) throw InputError("constraint row width differs from the cost vector");
        if (lp.b.size() != m_) throw InputError("right-hand side length differs from the row count");
        cols_ = n_ + m_;
        t_.assign(m_, std::vector<Rational>(cols_ + 1));
        for (std::size_t r = 0; r < m_; ++r) {
            const bool neg = lp.b[r] < 0;
            for (std::size_t c = 0; c < n_; ++c) t_[r][c] = neg ? -lp.a[r][c] : lp.a[r][c];
            t_[r][n_ + r] = 1;
            t_[r][cols_] = neg ? -lp.b[r] : lp.b[r];
        }
        basis_.resize(m_);
        for (std::size_t r = 0; r < m_; ++r) basis_[r] = n_ + r;
    }

    bool phase_one() {
        z_.assign(cols_ + 1, Rational(0));
        for (std::size_t r = 0; r < m_; ++r) {
            for (std::size_t c = 0; c < n_; ++c) z_[c] -= t_[r][c];
            z_[cols_] -= t_[r][cols_];
        }
        run(cols_);
        if (z_[cols_] != 0) return false;
        drive_out_artificials();
        return true;
    }

    void phase_two(const std::vector<Rational>& cost) {
        z_.assign(cols_ + 1, Rational(0));
        for (std::size_t c = 0; c < n_; ++c) z_[c] = cost[c];
        for (std::size_t r = 0; r < m_; ++r) {
            const std::size_t bv = basis_[r];
            if (bv >= n_ || z_[bv] == 0) continue;
            const Rational f = z_[bv];
            for (std::size_t c = 0; c <= cols_; ++c) z_[c] -= f * t_[r][c];
        }
        run(n_);
    }

    std::vector<Rational> solution() const {
        std::vector<Rational> y(n_);
        for (std::size_t r = 0; r < m_; ++r)
            if (basis_[r] < n_) y[basis_[r]] = t_[r][cols_];
        return y;
    }

private:
    /// Pivots until no column below `limit` has a negative reduced cost.
    void run(std::size_t limit) {
        for (;;) {
            std::size_t enter = limit;
            for (std::size_t c = 0; c < limit; ++c)
                if (z_[c] < 0) {
                    enter = c;
                    break;
                }
            if (enter == limit) return;
            std::size_t leave = m_;
            Rational best;
            for (std::size_t r = 0; r < m_; ++r) {
                if (t_[r][enter] <= 0) continue;
                const Rational ratio = t_[r][cols_] / t_[r][enter];
                if (leave == m_ || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == m_) throw InputError("linear program is unbounded");
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        const Rational piv = t_[row][col];
        nonzero_.clear();
        for (std::size_t c = 0; c <= cols_; ++c) {
            if (t_[row][c] == 0) continue;
            t_[row][c] /= piv;
            nonzero_.push_back(c);
        }
        for (std::size_t r = 0; r < m_; ++r) {
            if (r == row || t_[r][col] == 0) continue;
            const Rational f = t_[r][col];
            for (std::size_t c : nonzero_) t_[r][c] -= f * t_[row][c];
        }
        if (z_[col] != 0) {
            const Rational f = z_[col];
            for (std::size_t c : nonzero_) z_[c] -= f * t_[row][c];
        }
        basis_[row] = col;
    }

    void drive_out_artificials() {
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < n_) continue;
            for (std::size_t c = 0; c < n_; ++c)
                if (t_[r][c] != 0) {
                    pivot(r, c);
                    break;
                }
            // A row left with only artificial entries is redundant and stays at zero.
        }
        for (std::size_t r = 0; r < m_; ++r)
            for (std::size_t c = n_; c < cols_; ++c) t_[r][c] = 0;
    }

    std::size_t m_, n_, cols_ = 0;
    std::vector<std::vector<Rational>> t_;
    std::vector<Rational> z_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> nonzero_;
};

}  // namespace

std::optional<LpSolution> solve_exact_lp(const StandardLp& lp) {
    Tableau tab(lp);
    if (!tab.phase_one()) return std::nullopt;
    tab.phase_two(lp.cost);
    LpSolution out;
    out.y = tab.solution();
    out.value = 0;
    for (std::size_t c = 0; c < out.y.size(); ++c) out.value += lp.cost[c] * out.y[c];
    return out;
}

}  // namespace lpdec
