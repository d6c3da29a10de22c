#pragma once

#include "geomk/core.hpp"
#include "geomk/mvee.hpp"

namespace geomk {

// Macbeath region M^lambda(x) = x + lambda((K-x) ∩ (x-K)) over an
// H-polytope K, kept in slab form: {y : |a_i.(y-x)| <= lambda w_i} with
// w_i = b_i - a_i.x.
struct MacbeathRegion {
    Vec center;
    std::vector<std::pair<Vec, double>> slabs;  // (unit a_i, base half-width w_i)
    double scale = 1.0;                         // lambda

    // Same center and slabs at a different lambda.
    MacbeathRegion rescaled(double lambda) const;

    bool contains(const Vec& y, double tol = 1e-12) const;

    // 2m halfspace constraints at the current scale.
    std::vector<LpConstraint> as_constraints() const;
};

// x must be strictly interior (all w_i > 0).
MacbeathRegion macbeath_region(const HPolytope& p, const Vec& x, double lambda);

// Inscribed-ellipsoid fit of the region with the symmetric John factor.
// exported = inner scaled by sqrt(d)(1+tol), so
//   M^lambda(x) ⊆ exported ⊆ M^{lambda sqrt(d)(1+tol)}(x).
struct MacbeathEllipsoid {
    Vec center;
    double lambda = 1.0;
    double outer_factor = 1.0;
    Ellipsoid inner;     // ⊆ M^lambda(x)
    Ellipsoid exported;  // E^lambda(x) = inner scaled by outer_factor
};

MacbeathEllipsoid macbeath_ellipsoid(const HPolytope& p, const Vec& x, double lambda,
                                     double tol = 1e-3);

// Exact pairwise test via LP feasibility on the joint slab system;
// tangency counts as intersecting.
bool regions_intersect(const MacbeathRegion& r1, const MacbeathRegion& r2, double tol = 1e-9);

// Does the segment from the origin to p meet the region?
bool in_shadow(const Ellipsoid& e, const Vec& p);
bool in_shadow(const MacbeathRegion& r, const Vec& p);

// Samplers for the empirical lemma checks. Region sampling draws a random
// chord direction from the center (covers the whole region, non-uniformly);
// shadow sampling pushes a region point outward along its origin ray.
Vec sample_region_point(const MacbeathRegion& r, Rng& rng);
Vec sample_ellipsoid_point(const Ellipsoid& e, Rng& rng);
Vec sample_shadow_point(const HPolytope& p, const MacbeathRegion& r, Rng& rng);
Vec sample_shadow_point(const HPolytope& p, const Ellipsoid& e, Rng& rng);

}  // namespace geomk
