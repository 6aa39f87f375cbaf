#include "lpdec/gf2.hpp"

#include <bit>

namespace lpdec {

bool BitVec::any() const noexcept {
    for (auto w : words_)
        if (w) return true;
    return false;
}

int BitVec::popcount() const noexcept {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
}

long BitVec::first_set() const noexcept {
    for (std::size_t w = 0; w < words_.size(); ++w)
        if (words_[w]) return static_cast<long>(w * 64 + std::countr_zero(words_[w]));
    return -1;
}

bool BitVec::dot(const BitVec& o) const noexcept {
    int c = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) c += std::popcount(words_[w] & o.words_[w]);
    return c & 1;
}

bool lex_less(const BitVec& a, const BitVec& b) noexcept {
    for (std::size_t w = 0; w < a.words_.size(); ++w) {
        const std::uint64_t diff = a.words_[w] ^ b.words_[w];
        if (diff) return (b.words_[w] & diff & (~diff + 1)) != 0;
    }
    return false;
}

std::optional<AffineSolution> solve_affine(std::vector<BitVec> rows, std::vector<std::uint8_t> rhs,
                                           std::size_t n) {
    const std::size_t m = rows.size();
    std::vector<long> pivot_col;
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < m; ++col) {
        std::size_t sel = r;
        while (sel < m && !rows[sel].get(col)) ++sel;
        if (sel == m) continue;
        std::swap(rows[sel], rows[r]);
        std::swap(rhs[sel], rhs[r]);
        for (std::size_t k = 0; k < m; ++k) {
            if (k != r && rows[k].get(col)) {
                rows[k] ^= rows[r];
                rhs[k] ^= rhs[r];
            }
        }
        pivot_col.push_back(static_cast<long>(col));
        ++r;
    }
    for (std::size_t k = r; k < m; ++k)
        if (rhs[k]) return std::nullopt;

    AffineSolution sol;
    sol.rank = static_cast<int>(r);
    sol.particular = BitVec(n);
    std::vector<char> is_pivot(n, 0);
    for (std::size_t k = 0; k < r; ++k) {
        is_pivot[pivot_col[k]] = 1;
        if (rhs[k]) sol.particular.set(pivot_col[k]);
    }
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        BitVec b(n);
        b.set(f);
        for (std::size_t k = 0; k < r; ++k)
            if (rows[k].get(f)) b.set(pivot_col[k]);
        sol.basis.push_back(std::move(b));
    }
    return sol;
}

}  // namespace lpdec
