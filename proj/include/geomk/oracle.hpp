#pragma once

#include "geomk/core.hpp"

// Brute-force reference implementations used by the test suites and by the
// CLI --verify mode. Deliberately simple, quadratic where convenient, and
// sharing nothing with the main algorithms beyond the core types.

namespace geomk {
namespace oracle {

// max_p v·p  -  min_p v·p.
double exact_width(const PointSet& s, const Vec& v);

struct PairResult {
    int i = -1;
    int j = -1;
    double dist = 0.0;
};

// O(n^2) farthest pair.
PairResult exact_diameter(const PointSet& s);

// Farthest pair at d=2 by rotating calipers over the convex hull;
// cross-checks exact_diameter.
PairResult calipers_diameter(const PointSet& s);

// O(|r|·|b|) closest red-blue pair (i indexes r, j indexes b).
PairResult exact_bcp(const PointSet& r, const PointSet& b);

// All-halfspace membership scan.
bool exact_membership(const HPolytope& p, const Vec& q, double tol = 1e-12);

// Distance from q to p: 0 inside, else the distance realized by Dykstra's
// alternating projection onto the violated halfspaces.
double exact_distance_to_boundary(const HPolytope& p, const Vec& q);

// Symmetric Hausdorff estimate from m ray-shoot boundary samples of each
// body, measured with exact_distance_to_boundary. Both bodies must contain
// the origin in their interior.
double sampled_hausdorff(const HPolytope& a, const HPolytope& b, int m);

}  // namespace oracle
}  // namespace geomk
