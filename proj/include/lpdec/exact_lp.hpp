#pragma once

#include <optional>
#include <vector>

#include "lpdec/polytope.hpp"

namespace lpdec {

/// min cost . y subject to A y = b, y >= 0, in exact rational arithmetic.
struct StandardLp {
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    std::vector<Rational> cost;
};

struct LpSolution {
    std::vector<Rational> y;  ///< an optimal basic solution
    Rational value;
};

/// Two-phase simplex with Bland's rule. nullopt when infeasible; throws InputError when unbounded.
std::optional<LpSolution> solve_exact_lp(const StandardLp& lp);

}  // namespace lpdec
