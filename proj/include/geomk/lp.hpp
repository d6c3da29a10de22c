#pragma once

#include "geomk/common.hpp"

namespace geomk {

// Dense low-dimensional linear programming (Seidel's randomized incremental
// algorithm). Dimensions here are at most kMaxDim+1, constraint counts are a
// few thousand; every use in the library is one of the helpers below.

struct LpConstraint {
    Vec a;     // a·x <= b
    double b;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Vec x;
    double value = 0.0;
};

// maximize c·x subject to constraints and |x_i| <= box.
// "Unbounded" means the box was active at the optimum.
LpResult lp_maximize(const std::vector<LpConstraint>& constraints, const Vec& c,
                     double box = 1e6, std::uint64_t seed = 0x5eede1);

// Chebyshev center of {x : a_i·x <= b_i}: maximizes the inradius r.
// Returns (center, r). r < 0 means empty interior.
std::pair<Vec, double> chebyshev_center(const std::vector<LpConstraint>& constraints, int dim);

// Margin of the most interior point of a slab/halfspace system:
// max t s.t. a_i·x + t <= b_i. Positive iff the interior is nonempty,
// ~0 at tangency, negative iff empty. Normals need not be unit here; the
// margin is then relative, which is all the disjointness tests need.
double interior_margin(const std::vector<LpConstraint>& constraints, int dim);

// Support function h(u) = max {u·x : x in polytope}. A tight box bound
// (when the caller knows one) improves the solver's conditioning; an
// infeasible verdict is retried under fresh shuffle orders before being
// trusted, since callers use this on known-nonempty bodies.
double lp_support(const std::vector<LpConstraint>& constraints, const Vec& u,
                  double box = 1e6);

}  // namespace geomk
