#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lpdec/codes.hpp"

namespace lpdec {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using IntMatrix = std::vector<std::vector<std::int64_t>>;
using BinaryWords = std::vector<std::vector<std::uint8_t>>;

inline constexpr int kMaxFacetDimension = 16;
inline constexpr std::size_t kMaxFacetWords = std::size_t{1} << 12;

/// Homogeneous system {x : A x >= 0}; for a word list the rows are -(1, g).
struct ConeSystem {
    IntMatrix a;
};

/// Inequalities v0 + v . c <= 0, one row (v0, v_1..v_d) per facet.
struct FacetSystem {
    int dim = 0;
    IntMatrix rays;
};

/// Binary images of the codewords of a nonbinary code.
struct EmbeddedCode {
    int q = 0;
    int n = 0;
    BinaryWords binary_codewords;
};

enum class RingKind { GaloisField, Integers };

/// Cone rows -(1, g) for every word, ordered by weight and then lexicographically.
ConeSystem farkas_cone(const BinaryWords& words);

/// Extreme rays of {x : A x >= 0} by the incremental double description method in exact
/// arithmetic. Rows are primitive and sorted. The cone must be pointed.
IntMatrix dd_extreme_rays(const IntMatrix& a);

FacetSystem extreme_rays(const ConstituentCode& code);
/// Facets of the convex hull of an arbitrary list of 0/1 words.
FacetSystem extreme_rays(const BinaryWords& words);

bool facet_check(const FacetSystem& fs, std::span<const double> c, double tol);
/// Exact membership; true iff every facet holds with the rational point.
bool facet_check_exact(const FacetSystem& fs, std::span<const Rational> c);

/// Indicator embedding of {x in R^n : H x = 0} for R = GF(q) or Z_q.
EmbeddedCode nonbinary_embed(int q, RingKind ring, const std::vector<std::vector<int>>& h, int n);
/// Single parity check over GF(4) of length 4, embedded to 12 binary coordinates.
EmbeddedCode spc_gf4_n4();

/// All vertices of {c : v0 + v . c <= 0}; the polytope must be bounded.
std::vector<std::vector<Rational>> vertex_enumerate(const FacetSystem& fs);

/// Parity-polytope inequalities of a length-d single parity check: 2d box rows and one
/// row per odd subset, in canonical order.
IntMatrix parity_inequalities(int d);

/// Divides by the gcd of the absolute values.
std::vector<std::int64_t> primitive(std::vector<std::int64_t> row);
IntMatrix canonical_rows(IntMatrix rows);
bool same_row_set(const IntMatrix& a, const IntMatrix& b);

std::string write_facet_file(const FacetSystem& fs);
FacetSystem parse_facet_file(std::string_view text);
FacetSystem load_facet_file(const std::string& path);

}  // namespace lpdec
