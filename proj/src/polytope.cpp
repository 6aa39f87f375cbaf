#include "lpdec/polytope.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace lpdec {

namespace {

class Bits {
public:
    explicit Bits(std::size_t n = 0) : w_((n + 63) / 64, 0) {}
    void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1U; }
    int count_and(const Bits& o) const {
        int c = 0;
        for (std::size_t k = 0; k < w_.size(); ++k) c += std::popcount(w_[k] & o.w_[k]);
        return c;
    }
    Bits operator&(const Bits& o) const {
        Bits r = *this;
        for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] &= o.w_[k];
        return r;
    }
    bool subset_of(const Bits& o) const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k] & ~o.w_[k]) return false;
        return true;
    }

private:
    std::vector<std::uint64_t> w_;
};

struct Ray {
    std::vector<BigInt> x;
    Bits zero;
};

BigInt dot(const std::vector<std::int64_t>& a, const std::vector<BigInt>& x) {
    BigInt s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i]) s += a[i] * x[i];
    return s;
}

void make_primitive(std::vector<BigInt>& x) {
    BigInt g = 0;
    for (const auto& v : x) g = gcd(g, abs(v));
    if (g > 1)
        for (auto& v : x) v /= g;
}

// Columns of the inverse of `b` (rows of a square integer matrix), as primitive integer vectors.
std::vector<std::vector<BigInt>> inverse_columns(const std::vector<std::vector<std::int64_t>>& b) {
    const std::size_t d = b.size();
    std::vector<std::vector<Rational>> m(d, std::vector<Rational>(2 * d));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) m[i][j] = b[i][j];
        m[i][d + i] = 1;
    }
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t p = c;
        while (m[p][c] == 0) ++p;
        std::swap(m[p], m[c]);
        const Rational inv = 1 / m[c][c];
        for (auto& v : m[c]) v *= inv;
        for (std::size_t r = 0; r < d; ++r) {
            if (r == c || m[r][c] == 0) continue;
            const Rational f = m[r][c];
            for (std::size_t k = 0; k < 2 * d; ++k) m[r][k] -= f * m[c][k];
        }
    }
    std::vector<std::vector<BigInt>> cols(d, std::vector<BigInt>(d));
    for (std::size_t k = 0; k < d; ++k) {
        BigInt l = 1;
        for (std::size_t i = 0; i < d; ++i) l = lcm(l, denominator(m[i][d + k]));
        for (std::size_t i = 0; i < d; ++i) cols[k][i] = numerator(m[i][d + k]) * (l / denominator(m[i][d + k]));
        make_primitive(cols[k]);
    }
    return cols;
}

// Greedy choice of linearly independent rows in the given order.
std::vector<std::size_t> independent_rows(const IntMatrix& a, std::size_t dim) {
    std::vector<std::vector<Rational>> basis;  // reduced rows
    std::vector<std::size_t> pivots, chosen;
    for (std::size_t r = 0; r < a.size() && chosen.size() < dim; ++r) {
        std::vector<Rational> v(a[r].begin(), a[r].end());
        for (std::size_t k = 0; k < basis.size(); ++k) {
            if (v[pivots[k]] == 0) continue;
            const Rational f = v[pivots[k]] / basis[k][pivots[k]];
            for (std::size_t c = 0; c < dim; ++c) v[c] -= f * basis[k][c];
        }
        std::size_t p = 0;
        while (p < dim && v[p] == 0) ++p;
        if (p == dim) continue;
        basis.push_back(std::move(v));
        pivots.push_back(p);
        chosen.push_back(r);
    }
    return chosen;
}

std::vector<std::int64_t> to_int64(const std::vector<BigInt>& x) {
    std::vector<std::int64_t> out;
    out.reserve(x.size());
    for (const auto& v : x) {
        if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
            throw SizeError("ray coefficient exceeds 64 bits");
        out.push_back(static_cast<std::int64_t>(v));
    }
    return out;
}

// GF(q) for prime q or q in {4, 8, 16}; Z_q otherwise.
class SymbolRing {
public:
    SymbolRing(int q, RingKind kind) : q_(q), kind_(kind) {
        if (q < 2) throw ParameterError("ring size must be at least 2");
        if (kind == RingKind::Integers) return;
        bool prime = true;
        for (int d = 2; d * d <= q; ++d)
            if (q % d == 0) prime = false;
        if (prime) {
            prime_ = true;
            return;
        }
        switch (q) {
            case 4: poly_ = 0b111; break;
            case 8: poly_ = 0b1011; break;
            case 16: poly_ = 0b10011; break;
            default: throw ParameterError("GF(" + std::to_string(q) + ") is not supported");
        }
    }
    int add(int a, int b) const {
        if (kind_ == RingKind::GaloisField && !prime_) return a ^ b;
        return (a + b) % q_;
    }
    int mul(int a, int b) const {
        if (kind_ == RingKind::GaloisField && !prime_) {
            int r = 0;
            while (b) {
                if (b & 1) r ^= a;
                b >>= 1;
                a <<= 1;
                if (a & q_) a ^= poly_;
            }
            return r;
        }
        return (a * b) % q_;
    }

private:
    int q_;
    RingKind kind_;
    bool prime_ = false;
    int poly_ = 0;
};

}  // namespace

ConeSystem farkas_cone(const BinaryWords& words) {
    if (words.empty()) throw InputError("word list is empty");
    const std::size_t d = words.front().size();
    BinaryWords sorted = words;
    for (const auto& w : sorted)
        if (w.size() != d) throw InputError("words have different lengths");
    std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
        const auto wx = std::count(x.begin(), x.end(), 1), wy = std::count(y.begin(), y.end(), 1);
        if (wx != wy) return wx < wy;
        return x < y;
    });
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    ConeSystem cone;
    for (const auto& w : sorted) {
        std::vector<std::int64_t> row(d + 1);
        row[0] = -1;
        for (std::size_t i = 0; i < d; ++i) row[i + 1] = -static_cast<std::int64_t>(w[i]);
        cone.a.push_back(std::move(row));
    }
    return cone;
}

IntMatrix dd_extreme_rays(const IntMatrix& a) {
    if (a.empty()) throw InputError("empty constraint system");
    const std::size_t dim = a.front().size();
    const std::size_t m = a.size();
    for (const auto& r : a)
        if (r.size() != dim) throw InputError("constraint rows have different widths");

    const auto basis = independent_rows(a, dim);
    if (basis.size() < dim) throw CodeError("cone is not pointed (constraint matrix is rank deficient)");
    IntMatrix b;
    for (auto r : basis) b.push_back(a[r]);
    auto cols = inverse_columns(b);

    std::vector<Ray> rays;
    for (std::size_t k = 0; k < dim; ++k) {
        Ray ray{std::move(cols[k]), Bits(m)};
        for (std::size_t t = 0; t < dim; ++t)
            if (t != k) ray.zero.set(basis[t]);
        rays.push_back(std::move(ray));
    }

    std::vector<char> in_basis(m, 0);
    for (auto r : basis) in_basis[r] = 1;

    for (std::size_t row = 0; row < m; ++row) {
        if (in_basis[row]) continue;
        const auto& ar = a[row];
        std::vector<BigInt> val(rays.size());
        std::vector<std::size_t> pos, neg, zer;
        for (std::size_t k = 0; k < rays.size(); ++k) {
            val[k] = dot(ar, rays[k].x);
            if (val[k] > 0) pos.push_back(k);
            else if (val[k] < 0) neg.push_back(k);
            else zer.push_back(k);
        }
        if (neg.empty()) {
            for (auto k : zer) rays[k].zero.set(row);
            continue;
        }
        std::vector<Ray> next;
        for (auto p : pos) {
            for (auto n : neg) {
                const Bits common = rays[p].zero & rays[n].zero;
                if (rays[p].zero.count_and(rays[n].zero) + 2 < static_cast<int>(dim)) continue;
                bool adjacent = true;
                for (std::size_t k = 0; k < rays.size() && adjacent; ++k) {
                    if (k == p || k == n) continue;
                    if (common.subset_of(rays[k].zero)) adjacent = false;
                }
                if (!adjacent) continue;
                Ray r{std::vector<BigInt>(dim), common};
                for (std::size_t c = 0; c < dim; ++c) r.x[c] = val[p] * rays[n].x[c] - val[n] * rays[p].x[c];
                make_primitive(r.x);
                r.zero.set(row);
                next.push_back(std::move(r));
            }
        }
        for (auto p : pos) next.push_back(std::move(rays[p]));
        for (auto z : zer) {
            rays[z].zero.set(row);
            next.push_back(std::move(rays[z]));
        }
        rays = std::move(next);
    }

    IntMatrix out;
    out.reserve(rays.size());
    for (const auto& r : rays) out.push_back(to_int64(r.x));
    std::sort(out.begin(), out.end());
    return out;
}

FacetSystem extreme_rays(const BinaryWords& words) {
    if (words.empty()) throw InputError("cannot describe the convex hull of an empty word list");
    const int d = static_cast<int>(words.front().size());
    if (d > kMaxFacetDimension) throw SizeError("facet computation limited to " + std::to_string(kMaxFacetDimension) + " coordinates");
    if (words.size() > kMaxFacetWords) throw SizeError("facet computation limited to 4096 words");
    FacetSystem fs;
    fs.dim = d;
    fs.rays = dd_extreme_rays(farkas_cone(words).a);
    return fs;
}

FacetSystem extreme_rays(const ConstituentCode& code) {
    BinaryWords words;
    for (auto w : code.codewords()) {
        std::vector<std::uint8_t> g(static_cast<std::size_t>(code.length()));
        for (int i = 0; i < code.length(); ++i) g[static_cast<std::size_t>(i)] = (w >> i) & 1U;
        words.push_back(std::move(g));
    }
    return extreme_rays(words);
}

bool facet_check(const FacetSystem& fs, std::span<const double> c, double tol) {
    if (static_cast<int>(c.size()) != fs.dim) throw InputError("point dimension differs from the facet system");
    for (const auto& r : fs.rays) {
        double s = static_cast<double>(r[0]);
        for (std::size_t i = 0; i < c.size(); ++i) s += static_cast<double>(r[i + 1]) * c[i];
        if (s > tol) return false;
    }
    return true;
}

bool facet_check_exact(const FacetSystem& fs, std::span<const Rational> c) {
    if (static_cast<int>(c.size()) != fs.dim) throw InputError("point dimension differs from the facet system");
    for (const auto& r : fs.rays) {
        Rational s = r[0];
        for (std::size_t i = 0; i < c.size(); ++i)
            if (r[i + 1]) s += r[i + 1] * c[i];
        if (s > 0) return false;
    }
    return true;
}

EmbeddedCode nonbinary_embed(int q, RingKind ring, const std::vector<std::vector<int>>& h, int n) {
    const SymbolRing R(q, ring);
    double total = 1.0;
    for (int i = 0; i < n; ++i) total *= q;
    if (n < 1 || total > static_cast<double>(1 << 20)) throw SizeError("q^n exceeds the enumeration limit 2^20");
    for (const auto& row : h) {
        if (static_cast<int>(row.size()) != n) throw InputError("nonbinary parity row has wrong length");
        for (int x : row)
            if (x < 0 || x >= q) throw InputError("parity entry outside the ring");
    }
    EmbeddedCode out;
    out.q = q;
    out.n = n;
    std::vector<int> x(static_cast<std::size_t>(n), 0);
    const long count = static_cast<long>(total);
    for (long t = 0; t < count; ++t) {
        long rem = t;
        for (int i = n - 1; i >= 0; --i) {
            x[static_cast<std::size_t>(i)] = static_cast<int>(rem % q);
            rem /= q;
        }
        bool ok = true;
        for (const auto& row : h) {
            int s = 0;
            for (int i = 0; i < n; ++i) s = R.add(s, R.mul(row[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i)]));
            if (s != 0) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        std::vector<std::uint8_t> b(static_cast<std::size_t>((q - 1) * n), 0);
        for (int i = 0; i < n; ++i)
            if (x[static_cast<std::size_t>(i)] > 0)
                b[static_cast<std::size_t>(i * (q - 1) + x[static_cast<std::size_t>(i)] - 1)] = 1;
        out.binary_codewords.push_back(std::move(b));
    }
    return out;
}

EmbeddedCode spc_gf4_n4() { return nonbinary_embed(4, RingKind::GaloisField, {{1, 1, 1, 1}}, 4); }

std::vector<std::vector<Rational>> vertex_enumerate(const FacetSystem& fs) {
    const int d = fs.dim;
    IntMatrix a;
    std::vector<std::int64_t> t_row(static_cast<std::size_t>(d + 1), 0);
    t_row[0] = 1;
    a.push_back(t_row);
    for (const auto& r : fs.rays) {
        if (static_cast<int>(r.size()) != d + 1) throw InputError("facet row has wrong width");
        std::vector<std::int64_t> row(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) row[i] = -r[i];
        a.push_back(std::move(row));
    }
    const auto rays = dd_extreme_rays(a);
    std::vector<std::vector<Rational>> vertices;
    for (const auto& r : rays) {
        if (r[0] == 0) throw InputError("facet system describes an unbounded set");
        std::vector<Rational> v(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = Rational(r[static_cast<std::size_t>(i) + 1], r[0]);
        vertices.push_back(std::move(v));
    }
    std::sort(vertices.begin(), vertices.end());
    return vertices;
}

IntMatrix parity_inequalities(int d) {
    if (d < 1 || d > kMaxFacetDimension) throw ParameterError("parity inequality length out of range");
    IntMatrix rows;
    for (int i = 0; i < d; ++i) {
        std::vector<std::int64_t> lo(static_cast<std::size_t>(d + 1), 0), hi(static_cast<std::size_t>(d + 1), 0);
        lo[static_cast<std::size_t>(i) + 1] = -1;
        hi[0] = -1;
        hi[static_cast<std::size_t>(i) + 1] = 1;
        rows.push_back(std::move(lo));
        rows.push_back(std::move(hi));
    }
    for (std::uint32_t s = 0; s < (1U << d); ++s) {
        const int k = std::popcount(s);
        if (k % 2 == 0) continue;
        std::vector<std::int64_t> row(static_cast<std::size_t>(d + 1));
        row[0] = -(k - 1);
        for (int i = 0; i < d; ++i) row[static_cast<std::size_t>(i) + 1] = ((s >> i) & 1U) ? 1 : -1;
        rows.push_back(std::move(row));
    }
    return canonical_rows(std::move(rows));
}

std::vector<std::int64_t> primitive(std::vector<std::int64_t> row) {
    std::int64_t g = 0;
    for (auto v : row) g = std::gcd(g, v < 0 ? -v : v);
    if (g > 1)
        for (auto& v : row) v /= g;
    return row;
}

IntMatrix canonical_rows(IntMatrix rows) {
    for (auto& r : rows) r = primitive(std::move(r));
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
}

bool same_row_set(const IntMatrix& a, const IntMatrix& b) { return canonical_rows(a) == canonical_rows(b); }

std::string write_facet_file(const FacetSystem& fs) {
    std::ostringstream os;
    os << "facets " << fs.rays.size() << ' ' << fs.dim + 1 << '\n';
    for (const auto& r : fs.rays) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? " " : "") << r[i];
        os << '\n';
    }
    return os.str();
}

FacetSystem parse_facet_file(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };
    if (!next_line()) throw ParseError(0, "empty facet file");
    std::istringstream hdr(line);
    std::string tag;
    long r = -1, w = -1;
    if (!(hdr >> tag >> r >> w) || tag != "facets" || r < 0 || w < 1)
        throw ParseError(line_no, "header must be 'facets r d+1'");
    FacetSystem fs;
    fs.dim = static_cast<int>(w - 1);
    for (long k = 0; k < r; ++k) {
        if (!next_line()) throw ParseError(line_no, "expected " + std::to_string(r) + " facet rows");
        std::istringstream ls(line);
        std::vector<std::int64_t> row;
        std::int64_t v;
        while (ls >> v) row.push_back(v);
        if (!ls.eof() || static_cast<long>(row.size()) != w)
            throw ParseError(line_no, "facet row must hold " + std::to_string(w) + " integers");
        fs.rays.push_back(std::move(row));
    }
    if (next_line()) throw ParseError(line_no, "unexpected trailing data");
    return fs;
}

FacetSystem load_facet_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open facet file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_facet_file(ss.str());
}

}  // namespace lpdec
