#pragma once

#include <vector>

#include "gstft/common.hpp"

namespace gstft {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    Vec argmax;  // empty unless Optimal
};

/// Solves max c·x s.t. A x <= b with x free (no sign constraint).
/// Two-phase dense tableau simplex, Bland's rule for both the entering
/// and the leaving variable, so it cannot cycle. Free variables are
/// split internally as x = x+ - x-.
LpResult lp_solve(const std::vector<Vec>& A, const Vec& b, const Vec& c);

/// Same as lp_solve but enforces the spec contract: throws ConfigError
/// on an infeasible or unbounded program.
LpResult lp_maximize(const std::vector<Vec>& A, const Vec& b, const Vec& c);

}  // namespace gstft
