#pragma once

#include "geomk/core.hpp"
#include "geomk/mvee.hpp"

namespace geomk {

// Fattening: affine maps that place a body between the balls of radius
// gamma/2 and 1/2 about the origin.

struct CanonicalPoints {
    PointSet points;  // mapped input
    AffineMap map;    // original -> canonical coordinates
    double gamma = 0.0;
};

struct CanonicalPoly {
    HPolytope poly;  // mapped input
    AffineMap map;   // original -> canonical coordinates
    double gamma = 0.0;
};

// Enclosing-ellipsoid route: fit a (1+tol)-approximate minimum-volume
// enclosing ellipsoid and map it to the ball of radius 1/2. The image hull
// then contains the ball of radius 1/(4d(1+tol)), so gamma = 1/(2d(1+tol)).
// Rejects inputs whose hull is not full-dimensional.
CanonicalPoints canonicalize_points(const PointSet& s, double tol = 1e-3);

// Inscribed-ellipsoid route: symmetrize the slab distances about a Chebyshev
// center, fit the maximum-volume inscribed ellipsoid of the symmetric body,
// map it to the unit ball, then shrink by a certified bounding-box radius so
// the image fits in the ball of radius 1/2. gamma is certified per instance
// from the two containments (inner unit ball, outer box from 2d support LPs).
CanonicalPoly canonicalize_hpoly(const HPolytope& p, double tol = 1e-3);

// Image of an H-polytope under an affine map: a.x <= b becomes
// (T^{-T}a).y <= b + a.(T^{-1}u).
HPolytope transform_hpoly(const HPolytope& p, const AffineMap& map);

}  // namespace geomk
