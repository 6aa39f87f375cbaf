#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "lpdec/errors.hpp"

namespace lpdec {

/// Largest block length for which a local code's codewords are enumerated.
inline constexpr int kMaxEnumerationLength = 24;
/// Largest number of parity rows in a local code (trellis width is 2^rows).
inline constexpr int kMaxCheckRows = 20;

/// Binary local code {g : H g = s} over GF(2), stored by parity-check columns.
///
/// A zero syndrome gives an ordinary linear constituent code; a nonzero one gives
/// the coset codes that appear once neighbouring variables are pinned to fixed
/// values. Codewords are enumerated eagerly and kept in lexicographic order of
/// (g_0, g_1, ...); bit i of each mask stores g_i.
class ConstituentCode {
public:
    /// `columns[i]` is h_i as an `rows`-bit mask.
    ConstituentCode(int rows, std::vector<std::uint32_t> columns, std::uint32_t syndrome = 0);

    /// Build from a dense m x n matrix given row by row.
    static ConstituentCode from_rows(const std::vector<std::vector<std::uint8_t>>& rows,
                                     std::uint32_t syndrome = 0);
    static ConstituentCode single_parity(int n);
    /// Hamming(7,4) with h_i equal to the binary expansion of i+1.
    static ConstituentCode hamming74();

    int length() const noexcept { return static_cast<int>(columns_.size()); }
    int rows() const noexcept { return rows_; }
    std::uint32_t column(int i) const noexcept { return columns_[static_cast<std::size_t>(i)]; }
    std::span<const std::uint32_t> columns() const noexcept { return columns_; }
    std::uint32_t syndrome() const noexcept { return syndrome_; }
    bool is_coset() const noexcept { return syndrome_ != 0; }

    const std::vector<std::uint32_t>& codewords() const noexcept { return codewords_; }
    bool empty() const noexcept { return codewords_.empty(); }
    int rank() const noexcept { return rank_; }
    bool contains(std::uint32_t word) const noexcept;
    /// Syndrome H g of an arbitrary word.
    std::uint32_t syndrome_of(std::uint32_t word) const noexcept;

    /// |C| * n * max |Xi_{l,i}|; zero when the Gram matrix is singular.
    double eta_term() const noexcept { return eta_term_; }
    bool gram_invertible() const noexcept { return gram_ok_; }
    /// True when no coordinate is constant and no two coordinates are equal or complementary
    /// on every codeword, i.e. the dual distance is at least 3.
    bool dual_distance_ok() const noexcept { return dual_ok_; }
    /// Linear even-weight code of length n.
    bool is_single_parity() const noexcept { return spc_; }

    std::string describe() const;

private:
    void enumerate();
    void compute_eta();
    void classify();

    int rows_;
    std::vector<std::uint32_t> columns_;
    std::uint32_t syndrome_;
    std::vector<std::uint32_t> codewords_;
    int rank_ = 0;
    double eta_term_ = 0.0;
    bool gram_ok_ = false;
    bool dual_ok_ = false;
    bool spc_ = false;
};

using CodePtr = std::shared_ptr<const ConstituentCode>;

/// Interns identical local codes so that large graphs share one instance per distinct code.
class CodeCache {
public:
    CodePtr get(int rows, std::vector<std::uint32_t> columns, std::uint32_t syndrome = 0);

private:
    std::map<std::tuple<int, std::vector<std::uint32_t>, std::uint32_t>, CodePtr> entries_;
};

/// Enumerates all solutions of H g = 0 in lexicographic order. `rows` is m x n.
std::vector<std::uint32_t> enumerate_codewords(const std::vector<std::vector<std::uint8_t>>& rows,
                                               int n);

struct Constraint {
    std::vector<int> vars;  ///< N_j, in the column order of `code`
    CodePtr code;
};

/// Bipartite graph of N variables and M constraint nodes, each carrying a local code.
///
/// Edges are numbered constraint by constraint: edge `edge_offset(j) + p` joins
/// constraint j with its p-th neighbour.
class TannerGraph {
public:
    TannerGraph() = default;
    TannerGraph(int n_vars, std::vector<Constraint> constraints);

    int n_vars() const noexcept { return n_vars_; }
    int n_constraints() const noexcept { return static_cast<int>(constraints_.size()); }
    int n_edges() const noexcept { return static_cast<int>(edge_var_.size()); }

    const Constraint& constraint(int j) const { return constraints_[static_cast<std::size_t>(j)]; }
    const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    std::span<const int> var_constraints(int i) const;
    std::span<const int> var_edges(int i) const;
    int edge_offset(int j) const { return edge_offset_[static_cast<std::size_t>(j)]; }
    int edge_var(int e) const { return edge_var_[static_cast<std::size_t>(e)]; }
    int edge_constraint(int e) const { return edge_check_[static_cast<std::size_t>(e)]; }
    int degree(int i) const { return static_cast<int>(var_constraints(i).size()); }
    /// Position of variable i inside constraint j, or -1.
    int position_in(int j, int i) const;

    /// Every constraint is an even-weight single parity check with zero syndrome.
    bool is_plain_ldpc() const noexcept;
    int max_constraint_length() const noexcept;

    /// Checks H g = s for every constraint.
    bool is_codeword(std::span<const std::uint8_t> word) const;

private:
    int n_vars_ = 0;
    std::vector<Constraint> constraints_;
    std::vector<int> var_adj_offset_, var_adj_;      // N_i
    std::vector<int> var_edge_;                      // edge ids, parallel to var_adj_
    std::vector<int> edge_offset_, edge_var_, edge_check_;
};

/// Constraint j's coset code after pinning the neighbours it shares with constraint r.
struct CosetSpec {
    CodePtr code;                 ///< columns of N_j \ N_r with the induced syndrome
    std::vector<int> positions;   ///< surviving positions of j, in order
    std::vector<int> vars;        ///< variables behind `positions`
    std::uint32_t syndrome = 0;
};

/// `local_word` is a codeword of constraint r, bit p for the p-th neighbour of r.
CosetSpec coset_syndrome(const TannerGraph& graph, int j, int r, std::uint32_t local_word);

// ---- I/O ----------------------------------------------------------------------------------

TannerGraph parse_alist(std::string_view text);
TannerGraph parse_gldpc(std::string_view text);
/// Dispatches on the leading token ("gldpc" or an alist header).
TannerGraph parse_code_file(std::string_view text);
TannerGraph load_code_file(const std::string& path);
/// Plain-LDPC graphs only.
std::string write_alist(const TannerGraph& graph);
std::string write_gldpc(const TannerGraph& graph);

// ---- constructions ------------------------------------------------------------------------

/// Gallager's (dv, dc)-regular ensemble: dv bands of N/dc rows, bands 2..dv column-permuted.
TannerGraph gallager_ensemble(int n, int dv, int dc, std::uint64_t seed);

/// Random GLDPC graph: every variable has degree `var_degree`, every constraint uses `code`.
TannerGraph random_gldpc(int n, int var_degree, const CodePtr& code, std::uint64_t seed);

/// Plain-LDPC graph from an explicit parity-check matrix (rows of 0/1).
TannerGraph graph_from_parity_matrix(const std::vector<std::vector<std::uint8_t>>& h);

/// eta = max over constraints of eta_term. Throws CodeError when a Gram matrix is singular.
double compute_eta(const TannerGraph& graph);

// ---- channel ------------------------------------------------------------------------------

/// Natural-log LLRs for a BSC with crossover p.
std::vector<double> bsc_llrs(std::span<const std::uint8_t> received, double p);
/// Replaces +inf by 1 and -inf by -1.
std::vector<double> bec_renormalize(std::span<const double> raw);

}  // namespace lpdec
