#include "lpdec/codes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "lpdec/gf2.hpp"

namespace lpdec {

namespace {

struct AffineWords {
    std::vector<std::uint32_t> words;
    std::vector<std::uint32_t> basis;
    int rank = 0;
    bool consistent = false;
};

// Solutions of H g = s with H given by column masks, in lexicographic order.
AffineWords solve_columns(int m, std::span<const std::uint32_t> columns, std::uint32_t syndrome) {
    const std::size_t n = columns.size();
    std::vector<BitVec> rows(static_cast<std::size_t>(m), BitVec(n));
    std::vector<std::uint8_t> rhs(static_cast<std::size_t>(m), 0);
    for (int r = 0; r < m; ++r) {
        for (std::size_t i = 0; i < n; ++i)
            if ((columns[i] >> r) & 1U) rows[static_cast<std::size_t>(r)].set(i);
        rhs[static_cast<std::size_t>(r)] = static_cast<std::uint8_t>((syndrome >> r) & 1U);
    }
    AffineWords out;
    auto sol = solve_affine(std::move(rows), std::move(rhs), n);
    if (!sol) return out;
    out.consistent = true;
    out.rank = sol->rank;
    auto to_mask = [n](const BitVec& b) {
        std::uint32_t w = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (b.get(i)) w |= std::uint32_t{1} << i;
        return w;
    };
    const std::uint32_t base = n ? to_mask(sol->particular) : 0;
    for (const auto& b : sol->basis) out.basis.push_back(to_mask(b));

    const std::size_t count = std::size_t{1} << out.basis.size();
    out.words.reserve(count);
    // Gray-code walk over the null space.
    std::uint32_t w = base;
    out.words.push_back(w);
    for (std::size_t t = 1; t < count; ++t) {
        w ^= out.basis[static_cast<std::size_t>(std::countr_zero(t))];
        out.words.push_back(w);
    }
    std::sort(out.words.begin(), out.words.end(), mask_lex_less);
    return out;
}

std::string trim_comment(const std::string& line) {
    const auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

struct Line {
    int number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize_lines(std::string_view text) {
    std::vector<Line> lines;
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        std::istringstream ls(trim_comment(raw));
        Line l{number, {}};
        std::string tok;
        while (ls >> tok) l.tokens.push_back(tok);
        if (!l.tokens.empty()) lines.push_back(std::move(l));
    }
    return lines;
}

long parse_int(const std::string& tok, int line) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(tok, &used);
    } catch (const std::exception&) {
        throw ParseError(line, "expected an integer, got '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError(line, "expected an integer, got '" + tok + "'");
    return v;
}

std::vector<long> parse_ints(const Line& l) {
    std::vector<long> out;
    out.reserve(l.tokens.size());
    for (const auto& t : l.tokens) out.push_back(parse_int(t, l.number));
    return out;
}

}  // namespace

// ---- ConstituentCode ----------------------------------------------------------------------

ConstituentCode::ConstituentCode(int rows, std::vector<std::uint32_t> columns, std::uint32_t syndrome)
    : rows_(rows), columns_(std::move(columns)), syndrome_(syndrome) {
    if (rows_ < 0 || rows_ > kMaxCheckRows)
        throw SizeError("local code has " + std::to_string(rows_) + " parity rows; limit is " +
                        std::to_string(kMaxCheckRows));
    if (length() > kMaxEnumerationLength)
        throw SizeError("local code length " + std::to_string(length()) + " exceeds the limit of " +
                        std::to_string(kMaxEnumerationLength));
    const std::uint32_t mask = rows_ == 32 ? ~0U : ((std::uint32_t{1} << rows_) - 1);
    for (auto c : columns_)
        if (c & ~mask) throw InputError("parity column has bits beyond the row count");
    if (syndrome_ & ~mask) throw InputError("syndrome has bits beyond the row count");
    enumerate();
    classify();
    compute_eta();
}

ConstituentCode ConstituentCode::from_rows(const std::vector<std::vector<std::uint8_t>>& rows,
                                           std::uint32_t syndrome) {
    const int m = static_cast<int>(rows.size());
    if (m > kMaxCheckRows) throw SizeError("too many parity rows");
    const std::size_t n = rows.empty() ? 0 : rows.front().size();
    std::vector<std::uint32_t> cols(n, 0);
    for (int r = 0; r < m; ++r) {
        if (rows[static_cast<std::size_t>(r)].size() != n)
            throw InputError("parity matrix rows have different lengths");
        for (std::size_t i = 0; i < n; ++i)
            if (rows[static_cast<std::size_t>(r)][i]) cols[i] |= std::uint32_t{1} << r;
    }
    return ConstituentCode(m, std::move(cols), syndrome);
}

ConstituentCode ConstituentCode::single_parity(int n) {
    return ConstituentCode(1, std::vector<std::uint32_t>(static_cast<std::size_t>(n), 1U), 0);
}

ConstituentCode ConstituentCode::hamming74() {
    std::vector<std::uint32_t> cols;
    for (std::uint32_t i = 1; i <= 7; ++i) cols.push_back(i);
    return ConstituentCode(3, std::move(cols), 0);
}

bool ConstituentCode::contains(std::uint32_t word) const noexcept {
    if (length() < 32 && (word >> length()) != 0) return false;
    return syndrome_of(word) == syndrome_;
}

std::uint32_t ConstituentCode::syndrome_of(std::uint32_t word) const noexcept {
    std::uint32_t s = 0;
    while (word) {
        const int i = std::countr_zero(word);
        if (i >= length()) break;
        s ^= columns_[static_cast<std::size_t>(i)];
        word &= word - 1;
    }
    return s;
}

void ConstituentCode::enumerate() {
    auto sol = solve_columns(rows_, columns_, syndrome_);
    rank_ = sol.rank;
    codewords_ = std::move(sol.words);
    if (!sol.consistent) {
        // rank is still meaningful for the linear part
        rank_ = solve_columns(rows_, columns_, 0).rank;
        dual_ok_ = false;
        return;
    }
    const int n = length();
    bool ok = n > 0;
    for (int i = 0; i < n && ok; ++i) {
        bool varies = false;
        for (auto b : sol.basis) varies |= ((b >> i) & 1U) != 0;
        if (!varies) ok = false;
    }
    for (int i = 0; i < n && ok; ++i) {
        for (int l = i + 1; l < n && ok; ++l) {
            bool differs = false;
            for (auto b : sol.basis) differs |= (((b >> i) ^ (b >> l)) & 1U) != 0;
            if (!differs) ok = false;
        }
    }
    dual_ok_ = ok;
}

void ConstituentCode::classify() {
    const int n = length();
    spc_ = false;
    if (syndrome_ != 0 || n == 0) return;
    if (codewords_.size() != (std::size_t{1} << (n - 1))) return;
    spc_ = std::all_of(codewords_.begin(), codewords_.end(),
                       [](std::uint32_t w) { return std::popcount(w) % 2 == 0; });
}

void ConstituentCode::compute_eta() {
    eta_term_ = 0.0;
    gram_ok_ = false;
    if (codewords_.empty()) return;
    const int n = length();
    const int d = n + 1;
    // Gram matrix of the codeword list augmented by a leading 1.
    std::vector<double> g(static_cast<std::size_t>(d * d), 0.0);
    auto at = [&](int a, int b) -> double& { return g[static_cast<std::size_t>(a * d + b)]; };
    for (auto w : codewords_) {
        at(0, 0) += 1.0;
        for (int i = 0; i < n; ++i) {
            if (!((w >> i) & 1U)) continue;
            at(0, i + 1) += 1.0;
            at(i + 1, 0) += 1.0;
            for (int l = 0; l < n; ++l)
                if ((w >> l) & 1U) at(i + 1, l + 1) += 1.0;
        }
    }
    double scale = 0.0;
    for (int a = 0; a < d; ++a) scale = std::max(scale, at(a, a));

    // Cholesky factor, lower triangular, in place.
    for (int j = 0; j < d; ++j) {
        double diag = at(j, j);
        for (int k = 0; k < j; ++k) diag -= at(j, k) * at(j, k);
        if (diag <= 1e-10 * scale) return;
        const double root = std::sqrt(diag);
        at(j, j) = root;
        for (int i = j + 1; i < d; ++i) {
            double s = at(i, j);
            for (int k = 0; k < j; ++k) s -= at(i, k) * at(j, k);
            at(i, j) = s / root;
        }
    }
    gram_ok_ = true;

    // Rows of Psi~^T G^{-1}, one per codeword.
    std::vector<double> y(static_cast<std::size_t>(d));
    double max_abs = 0.0;
    for (auto w : codewords_) {
        for (int i = 0; i < d; ++i) {
            double s = (i == 0) ? 1.0 : static_cast<double>((w >> (i - 1)) & 1U);
            for (int k = 0; k < i; ++k) s -= at(i, k) * y[static_cast<std::size_t>(k)];
            y[static_cast<std::size_t>(i)] = s / at(i, i);
        }
        for (int i = d - 1; i >= 0; --i) {
            double s = y[static_cast<std::size_t>(i)];
            for (int k = i + 1; k < d; ++k) s -= at(k, i) * y[static_cast<std::size_t>(k)];
            y[static_cast<std::size_t>(i)] = s / at(i, i);
        }
        for (double v : y) max_abs = std::max(max_abs, std::abs(v));
    }
    eta_term_ = static_cast<double>(codewords_.size()) * n * max_abs;
}

std::string ConstituentCode::describe() const {
    std::ostringstream os;
    os << "local code n=" << length() << " m=" << rows_ << " |C|=" << codewords_.size();
    if (syndrome_) os << " syndrome=" << syndrome_;
    return os.str();
}

CodePtr CodeCache::get(int rows, std::vector<std::uint32_t> columns, std::uint32_t syndrome) {
    auto key = std::make_tuple(rows, columns, syndrome);
    auto it = entries_.find(key);
    if (it != entries_.end()) return it->second;
    auto code = std::make_shared<const ConstituentCode>(rows, std::move(columns), syndrome);
    entries_.emplace(std::move(key), code);
    return code;
}

std::vector<std::uint32_t> enumerate_codewords(const std::vector<std::vector<std::uint8_t>>& rows,
                                               int n) {
    if (n > kMaxEnumerationLength)
        throw SizeError("cannot enumerate codewords of length " + std::to_string(n));
    std::vector<BitVec> bv;
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != n) throw InputError("parity matrix row has wrong length");
        BitVec b(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            if (r[static_cast<std::size_t>(i)]) b.set(static_cast<std::size_t>(i));
        bv.push_back(std::move(b));
    }
    auto sol = solve_affine(std::move(bv), std::vector<std::uint8_t>(rows.size(), 0),
                            static_cast<std::size_t>(n));
    std::vector<std::uint32_t> basis;
    for (const auto& b : sol->basis) {
        std::uint32_t w = 0;
        for (int i = 0; i < n; ++i)
            if (b.get(static_cast<std::size_t>(i))) w |= std::uint32_t{1} << i;
        basis.push_back(w);
    }
    std::vector<std::uint32_t> words(std::size_t{1} << basis.size(), 0);
    for (std::size_t t = 1; t < words.size(); ++t)
        words[t] = words[t - 1] ^ basis[static_cast<std::size_t>(std::countr_zero(t))];
    std::sort(words.begin(), words.end(), mask_lex_less);
    return words;
}

// ---- TannerGraph --------------------------------------------------------------------------

TannerGraph::TannerGraph(int n_vars, std::vector<Constraint> constraints)
    : n_vars_(n_vars), constraints_(std::move(constraints)) {
    if (n_vars_ < 0) throw InputError("negative variable count");
    std::vector<int> deg(static_cast<std::size_t>(n_vars_), 0);
    edge_offset_.reserve(constraints_.size() + 1);
    for (std::size_t j = 0; j < constraints_.size(); ++j) {
        const auto& c = constraints_[j];
        if (!c.code) throw InputError("constraint " + std::to_string(j) + " has no local code");
        if (c.code->length() != static_cast<int>(c.vars.size()))
            throw InputError("constraint " + std::to_string(j) +
                             ": local code length differs from its neighbourhood size");
        std::vector<int> sorted = c.vars;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw InputError("constraint " + std::to_string(j) + " lists a variable twice");
        edge_offset_.push_back(static_cast<int>(edge_var_.size()));
        for (int v : c.vars) {
            if (v < 0 || v >= n_vars_)
                throw InputError("constraint " + std::to_string(j) + " references variable " +
                                 std::to_string(v) + " out of range");
            ++deg[static_cast<std::size_t>(v)];
            edge_var_.push_back(v);
            edge_check_.push_back(static_cast<int>(j));
        }
    }
    edge_offset_.push_back(static_cast<int>(edge_var_.size()));

    var_adj_offset_.assign(static_cast<std::size_t>(n_vars_) + 1, 0);
    for (int i = 0; i < n_vars_; ++i)
        var_adj_offset_[static_cast<std::size_t>(i) + 1] =
            var_adj_offset_[static_cast<std::size_t>(i)] + deg[static_cast<std::size_t>(i)];
    var_adj_.assign(edge_var_.size(), 0);
    var_edge_.assign(edge_var_.size(), 0);
    std::vector<int> fill(var_adj_offset_.begin(), var_adj_offset_.end() - 1);
    for (std::size_t e = 0; e < edge_var_.size(); ++e) {
        const int v = edge_var_[e];
        const int slot = fill[static_cast<std::size_t>(v)]++;
        var_adj_[static_cast<std::size_t>(slot)] = edge_check_[e];
        var_edge_[static_cast<std::size_t>(slot)] = static_cast<int>(e);
    }
}

std::span<const int> TannerGraph::var_constraints(int i) const {
    const auto b = static_cast<std::size_t>(var_adj_offset_[static_cast<std::size_t>(i)]);
    const auto e = static_cast<std::size_t>(var_adj_offset_[static_cast<std::size_t>(i) + 1]);
    return {var_adj_.data() + b, e - b};
}

std::span<const int> TannerGraph::var_edges(int i) const {
    const auto b = static_cast<std::size_t>(var_adj_offset_[static_cast<std::size_t>(i)]);
    const auto e = static_cast<std::size_t>(var_adj_offset_[static_cast<std::size_t>(i) + 1]);
    return {var_edge_.data() + b, e - b};
}

int TannerGraph::position_in(int j, int i) const {
    const auto& vars = constraint(j).vars;
    auto it = std::find(vars.begin(), vars.end(), i);
    return it == vars.end() ? -1 : static_cast<int>(it - vars.begin());
}

bool TannerGraph::is_plain_ldpc() const noexcept {
    return std::all_of(constraints_.begin(), constraints_.end(),
                       [](const Constraint& c) { return c.code->is_single_parity(); });
}

int TannerGraph::max_constraint_length() const noexcept {
    int m = 0;
    for (const auto& c : constraints_) m = std::max(m, static_cast<int>(c.vars.size()));
    return m;
}

bool TannerGraph::is_codeword(std::span<const std::uint8_t> word) const {
    if (static_cast<int>(word.size()) != n_vars_) throw InputError("word length differs from N");
    for (const auto& c : constraints_) {
        std::uint32_t w = 0;
        for (std::size_t p = 0; p < c.vars.size(); ++p)
            if (word[static_cast<std::size_t>(c.vars[p])]) w |= std::uint32_t{1} << p;
        if (!c.code->contains(w)) return false;
    }
    return true;
}

CosetSpec coset_syndrome(const TannerGraph& graph, int j, int r, std::uint32_t local_word) {
    if (j == r) throw InputError("coset construction needs two distinct constraints");
    const auto& cr = graph.constraint(r);
    const auto& cj = graph.constraint(j);
    if (!cr.code->contains(local_word))
        throw InputError("forced word is not a codeword of constraint " + std::to_string(r));
    CosetSpec out;
    std::vector<std::uint32_t> cols;
    bool shared = false;
    for (std::size_t p = 0; p < cj.vars.size(); ++p) {
        const int pr = graph.position_in(r, cj.vars[p]);
        if (pr >= 0) {
            shared = true;
            if ((local_word >> pr) & 1U) out.syndrome ^= cj.code->column(static_cast<int>(p));
        } else {
            out.positions.push_back(static_cast<int>(p));
            out.vars.push_back(cj.vars[p]);
            cols.push_back(cj.code->column(static_cast<int>(p)));
        }
    }
    if (!shared) throw InputError("constraints share no variable");
    out.code = std::make_shared<const ConstituentCode>(cj.code->rows(), std::move(cols), out.syndrome);
    return out;
}

// ---- I/O ----------------------------------------------------------------------------------

TannerGraph parse_alist(std::string_view text) {
    const auto lines = tokenize_lines(text);
    if (lines.empty()) throw ParseError(0, "empty alist input");
    std::size_t at = 0;
    auto next = [&](const char* what) -> const Line& {
        if (at >= lines.size()) throw ParseError(lines.back().number, std::string("missing ") + what);
        return lines[at++];
    };

    const Line& h1 = next("header");
    auto hdr = parse_ints(h1);
    if (hdr.size() != 2 || hdr[0] <= 0 || hdr[1] <= 0)
        throw ParseError(h1.number, "header must be 'N M' with positive counts");
    const long n = hdr[0], m = hdr[1];

    const Line& h2 = next("maximum degrees");
    auto maxdeg = parse_ints(h2);
    if (maxdeg.size() != 2 || maxdeg[0] < 0 || maxdeg[1] < 0)
        throw ParseError(h2.number, "second line must hold two maximum degrees");

    const Line& l3 = next("column degrees");
    auto col_deg = parse_ints(l3);
    if (static_cast<long>(col_deg.size()) != n)
        throw ParseError(l3.number, "expected " + std::to_string(n) + " column degrees");
    const Line& l4 = next("row degrees");
    auto row_deg = parse_ints(l4);
    if (static_cast<long>(row_deg.size()) != m)
        throw ParseError(l4.number, "expected " + std::to_string(m) + " row degrees");
    for (long d : col_deg)
        if (d < 0 || d > maxdeg[0]) throw ParseError(l3.number, "column degree out of range");
    for (long d : row_deg)
        if (d < 0 || d > maxdeg[1]) throw ParseError(l4.number, "row degree out of range");

    auto read_list = [&](long expected_deg, long limit, const char* what) {
        const Line& l = next(what);
        auto vals = parse_ints(l);
        std::vector<int> out;
        for (long v : vals) {
            if (v == 0) continue;  // zero padding
            if (v < 1 || v > limit)
                throw ParseError(l.number, "index " + std::to_string(v) + " out of range");
            out.push_back(static_cast<int>(v - 1));
        }
        if (static_cast<long>(out.size()) != expected_deg)
            throw ParseError(l.number, "list length disagrees with the declared degree");
        auto s = out;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw ParseError(l.number, "duplicate index (parallel edge)");
        return std::make_pair(out, l.number);
    };

    std::vector<std::vector<int>> cols(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
        cols[static_cast<std::size_t>(i)] = read_list(col_deg[static_cast<std::size_t>(i)], m, "column list").first;
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(m));
    std::vector<int> row_line(static_cast<std::size_t>(m));
    for (long j = 0; j < m; ++j) {
        auto [r, ln] = read_list(row_deg[static_cast<std::size_t>(j)], n, "row list");
        rows[static_cast<std::size_t>(j)] = std::move(r);
        row_line[static_cast<std::size_t>(j)] = ln;
    }
    if (at != lines.size()) throw ParseError(lines[at].number, "unexpected trailing data");

    for (long j = 0; j < m; ++j)
        for (int i : rows[static_cast<std::size_t>(j)]) {
            const auto& c = cols[static_cast<std::size_t>(i)];
            if (std::find(c.begin(), c.end(), static_cast<int>(j)) == c.end())
                throw ParseError(row_line[static_cast<std::size_t>(j)],
                                 "row and column lists disagree on entry (" + std::to_string(j + 1) +
                                     ", " + std::to_string(i + 1) + ")");
        }

    CodeCache cache;
    std::vector<Constraint> cons;
    for (auto& r : rows) {
        const int d = static_cast<int>(r.size());
        cons.push_back({std::move(r), cache.get(1, std::vector<std::uint32_t>(static_cast<std::size_t>(d), 1U))});
    }
    return TannerGraph(static_cast<int>(n), std::move(cons));
}

TannerGraph parse_gldpc(std::string_view text) {
    // Token stream with line numbers, so lists may wrap across lines.
    struct Tok {
        std::string s;
        int line;
    };
    std::vector<Tok> toks;
    for (const auto& l : tokenize_lines(text))
        for (const auto& t : l.tokens) toks.push_back({t, l.number});
    if (toks.empty()) throw ParseError(0, "empty GLDPC input");
    std::size_t at = 0;
    auto next = [&](const char* what) -> const Tok& {
        if (at >= toks.size()) throw ParseError(toks.back().line, std::string("missing ") + what);
        return toks[at++];
    };
    auto next_int = [&](const char* what) {
        const Tok& t = next(what);
        return std::make_pair(parse_int(t.s, t.line), t.line);
    };

    const Tok& magic = next("header");
    if (magic.s != "gldpc") throw ParseError(magic.line, "header must start with 'gldpc'");
    auto [n, nl] = next_int("N");
    auto [m, ml] = next_int("M");
    if (n <= 0) throw ParseError(nl, "N must be positive");
    if (m < 0) throw ParseError(ml, "M must be non-negative");

    CodeCache cache;
    std::vector<Constraint> cons;
    for (long k = 0; k < m; ++k) {
        const Tok& kw = next("'check'");
        if (kw.s != "check") throw ParseError(kw.line, "expected 'check', got '" + kw.s + "'");
        auto [j, jl] = next_int("check index");
        if (j != k + 1) throw ParseError(jl, "checks must be numbered 1, 2, ... in order");
        auto [d, dl] = next_int("check length");
        auto [rows, rl] = next_int("row count");
        if (d < 1 || d > kMaxEnumerationLength)
            throw ParseError(dl, "check length must lie in [1, " + std::to_string(kMaxEnumerationLength) + "]");
        if (rows < 0 || rows > kMaxCheckRows)
            throw ParseError(rl, "row count must lie in [0, " + std::to_string(kMaxCheckRows) + "]");
        std::vector<int> vars;
        for (long p = 0; p < d; ++p) {
            auto [v, vl] = next_int("neighbour index");
            if (v < 1 || v > n) throw ParseError(vl, "neighbour index out of range");
            if (std::find(vars.begin(), vars.end(), static_cast<int>(v - 1)) != vars.end())
                throw ParseError(vl, "duplicate neighbour (parallel edge)");
            vars.push_back(static_cast<int>(v - 1));
        }
        std::vector<std::uint32_t> cols(static_cast<std::size_t>(d), 0);
        for (long r = 0; r < rows; ++r) {
            const Tok& first = next("parity row");
            std::string bits;
            if (d > 1 && static_cast<long>(first.s.size()) == d) {
                bits = first.s;
            } else {
                bits = first.s;
                for (long p = 1; p < d; ++p) bits += next("parity bit").s;
            }
            if (static_cast<long>(bits.size()) != d)
                throw ParseError(first.line, "parity row must have " + std::to_string(d) + " bits");
            for (long p = 0; p < d; ++p) {
                const char c = bits[static_cast<std::size_t>(p)];
                if (c != '0' && c != '1') throw ParseError(first.line, "parity entries must be 0 or 1");
                if (c == '1') cols[static_cast<std::size_t>(p)] |= std::uint32_t{1} << r;
            }
        }
        cons.push_back({std::move(vars), cache.get(static_cast<int>(rows), std::move(cols))});
    }
    if (at != toks.size()) throw ParseError(toks[at].line, "unexpected trailing data");
    return TannerGraph(static_cast<int>(n), std::move(cons));
}

TannerGraph parse_code_file(std::string_view text) {
    for (const auto& l : tokenize_lines(text)) {
        if (l.tokens.front() == "gldpc") return parse_gldpc(text);
        break;
    }
    return parse_alist(text);
}

TannerGraph load_code_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open code file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_code_file(ss.str());
}

std::string write_alist(const TannerGraph& graph) {
    if (!graph.is_plain_ldpc()) throw InputError("alist output needs a plain LDPC graph");
    const int n = graph.n_vars(), m = graph.n_constraints();
    int max_col = 0, max_row = 0;
    for (int i = 0; i < n; ++i) max_col = std::max(max_col, graph.degree(i));
    for (int j = 0; j < m; ++j) max_row = std::max(max_row, static_cast<int>(graph.constraint(j).vars.size()));
    std::ostringstream os;
    os << n << ' ' << m << '\n' << max_col << ' ' << max_row << '\n';
    for (int i = 0; i < n; ++i) os << (i ? " " : "") << graph.degree(i);
    os << '\n';
    for (int j = 0; j < m; ++j) os << (j ? " " : "") << graph.constraint(j).vars.size();
    os << '\n';
    for (int i = 0; i < n; ++i) {
        auto adj = graph.var_constraints(i);
        for (std::size_t k = 0; k < adj.size(); ++k) os << (k ? " " : "") << adj[k] + 1;
        os << '\n';
    }
    for (int j = 0; j < m; ++j) {
        const auto& vars = graph.constraint(j).vars;
        for (std::size_t k = 0; k < vars.size(); ++k) os << (k ? " " : "") << vars[k] + 1;
        os << '\n';
    }
    return os.str();
}

std::string write_gldpc(const TannerGraph& graph) {
    std::ostringstream os;
    os << "gldpc " << graph.n_vars() << ' ' << graph.n_constraints() << '\n';
    for (int j = 0; j < graph.n_constraints(); ++j) {
        const auto& c = graph.constraint(j);
        if (c.code->is_coset()) throw InputError("coset constraints cannot be written");
        const int d = static_cast<int>(c.vars.size());
        os << "check " << j + 1 << ' ' << d << ' ' << c.code->rows() << '\n';
        for (int p = 0; p < d; ++p) os << (p ? " " : "") << c.vars[static_cast<std::size_t>(p)] + 1;
        os << '\n';
        for (int r = 0; r < c.code->rows(); ++r) {
            for (int p = 0; p < d; ++p) os << (p ? " " : "") << ((c.code->column(p) >> r) & 1U);
            os << '\n';
        }
    }
    return os.str();
}

// ---- constructions ------------------------------------------------------------------------

TannerGraph gallager_ensemble(int n, int dv, int dc, std::uint64_t seed) {
    if (n <= 0 || dv < 1) throw ParameterError("Gallager ensemble needs N > 0 and dv >= 1");
    if (dc < 3) throw ParameterError("Gallager ensemble needs dc >= 3");
    if (dc > kMaxEnumerationLength) throw SizeError("check degree too large");
    if (n % dc != 0)
        throw ParameterError("Gallager's band construction needs dc to divide N (N=" + std::to_string(n) +
                             ", dc=" + std::to_string(dc) + ")");
    const int rows_per_band = n / dc;
    std::mt19937_64 rng(seed);
    CodeCache cache;
    const CodePtr spc = cache.get(1, std::vector<std::uint32_t>(static_cast<std::size_t>(dc), 1U));

    constexpr int kRetries = 100;
    for (int attempt = 0; attempt < kRetries; ++attempt) {
        std::vector<Constraint> cons;
        cons.reserve(static_cast<std::size_t>(rows_per_band) * static_cast<std::size_t>(dv));
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        for (int band = 0; band < dv; ++band) {
            if (band > 0) std::shuffle(perm.begin(), perm.end(), rng);
            for (int r = 0; r < rows_per_band; ++r) {
                std::vector<int> vars(perm.begin() + r * dc, perm.begin() + (r + 1) * dc);
                std::sort(vars.begin(), vars.end());
                cons.push_back({std::move(vars), spc});
            }
        }
        try {
            return TannerGraph(n, std::move(cons));
        } catch (const InputError&) {
            continue;
        }
    }
    throw ParameterError("Gallager construction exhausted its retry budget");
}

TannerGraph random_gldpc(int n, int var_degree, const CodePtr& code, std::uint64_t seed) {
    if (!code) throw InputError("random GLDPC construction needs a local code");
    const int len = code->length();
    if (n <= 0 || var_degree < 1 || len < 1) throw ParameterError("invalid GLDPC dimensions");
    if ((n * var_degree) % len != 0)
        throw ParameterError("N * variable degree must be a multiple of the local code length");
    const int m = n * var_degree / len;
    std::mt19937_64 rng(seed);
    std::vector<int> sockets;
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < var_degree; ++t) sockets.push_back(i);

    constexpr int kRetries = 1000;
    for (int attempt = 0; attempt < kRetries; ++attempt) {
        std::shuffle(sockets.begin(), sockets.end(), rng);
        std::vector<Constraint> cons;
        bool ok = true;
        for (int j = 0; j < m && ok; ++j) {
            std::vector<int> vars(sockets.begin() + j * len, sockets.begin() + (j + 1) * len);
            auto s = vars;
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end()) ok = false;
            cons.push_back({std::move(vars), code});
        }
        if (ok) return TannerGraph(n, std::move(cons));
    }
    throw ParameterError("random GLDPC construction exhausted its retry budget");
}

TannerGraph graph_from_parity_matrix(const std::vector<std::vector<std::uint8_t>>& h) {
    const std::size_t n = h.empty() ? 0 : h.front().size();
    CodeCache cache;
    std::vector<Constraint> cons;
    for (const auto& row : h) {
        if (row.size() != n) throw InputError("parity matrix rows have different lengths");
        std::vector<int> vars;
        for (std::size_t i = 0; i < n; ++i)
            if (row[i]) vars.push_back(static_cast<int>(i));
        const auto d = vars.size();
        cons.push_back({std::move(vars), cache.get(1, std::vector<std::uint32_t>(d, 1U))});
    }
    return TannerGraph(static_cast<int>(n), std::move(cons));
}

double compute_eta(const TannerGraph& graph) {
    double eta = 0.0;
    for (int j = 0; j < graph.n_constraints(); ++j) {
        const auto& code = *graph.constraint(j).code;
        if (!code.gram_invertible())
            throw CodeError("constraint " + std::to_string(j) + ": Gram matrix of the local code is singular (" +
                            code.describe() + ")");
        eta = std::max(eta, code.eta_term());
    }
    return eta;
}

// ---- channel ------------------------------------------------------------------------------

std::vector<double> bsc_llrs(std::span<const std::uint8_t> received, double p) {
    if (!(p > 0.0 && p < 0.5)) throw ParameterError("BSC crossover probability must lie in (0, 1/2)");
    const double g = std::log((1.0 - p) / p);
    std::vector<double> out(received.size());
    for (std::size_t i = 0; i < received.size(); ++i) out[i] = received[i] ? -g : g;
    return out;
}

std::vector<double> bec_renormalize(std::span<const double> raw) {
    std::vector<double> out(raw.begin(), raw.end());
    for (double& x : out) {
        if (x == std::numeric_limits<double>::infinity()) x = 1.0;
        else if (x == -std::numeric_limits<double>::infinity()) x = -1.0;
    }
    return out;
}

}  // namespace lpdec
