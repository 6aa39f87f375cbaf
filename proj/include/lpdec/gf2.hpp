#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace lpdec {

/// Dense binary vector of fixed length.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const noexcept { return n_; }
    bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i, bool v = true) noexcept {
        const std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (v) words_[i >> 6] |= bit; else words_[i >> 6] &= ~bit;
    }
    void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVec& operator^=(const BitVec& o) noexcept {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
        return *this;
    }
    bool any() const noexcept;
    int popcount() const noexcept;
    /// Index of the lowest set bit, or -1.
    long first_set() const noexcept;
    /// Parity of the bitwise AND with `o`.
    bool dot(const BitVec& o) const noexcept;

    friend bool operator==(const BitVec& a, const BitVec& b) noexcept {
        return a.n_ == b.n_ && a.words_ == b.words_;
    }
    /// Lexicographic on (b_0, b_1, ...), 0 < 1.
    friend bool lex_less(const BitVec& a, const BitVec& b) noexcept;

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Solution set {x : A x = b} of a binary linear system.
struct AffineSolution {
    BitVec particular;
    std::vector<BitVec> basis;  // null-space basis of A
    int rank = 0;
};

/// Gaussian elimination over GF(2). `rows[r]` has length n; `rhs[r]` is the r-th target bit.
/// Returns nullopt when the system is inconsistent.
std::optional<AffineSolution> solve_affine(std::vector<BitVec> rows, std::vector<std::uint8_t> rhs,
                                           std::size_t n);

/// Codeword comparison for masks whose bit i stores coordinate i: lexicographic on (g_0, g_1, ...).
inline bool mask_lex_less(std::uint32_t a, std::uint32_t b) noexcept {
    const std::uint32_t diff = a ^ b;
    if (diff == 0) return false;
    return (b & diff & (~diff + 1)) != 0;
}

}  // namespace lpdec
