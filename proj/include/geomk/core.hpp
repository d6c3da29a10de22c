#pragma once

#include "geomk/common.hpp"
#include "geomk/lp.hpp"

#include <optional>

namespace geomk {

// ---------------------------------------------------------------------------
// Halfspace a·x <= b with unit normal. Normalized on ingest so that erosion
// by offset is exact.
// ---------------------------------------------------------------------------
struct Halfspace {
    Vec normal;
    double offset = 0.0;

    Halfspace() = default;
    Halfspace(Vec a, double b);  // normalizes, rejects near-zero normals

    double signed_dist(const Vec& x) const { return normal.dot(x) - offset; }
    bool contains(const Vec& x, double tol = 0.0) const { return signed_dist(x) <= tol; }
};

struct RayHit {
    double t = 0.0;
    int face = -1;
};

// ---------------------------------------------------------------------------
// Convex body as an intersection of halfspaces.
// ---------------------------------------------------------------------------
class HPolytope {
public:
    HPolytope() = default;
    // Normalizes the normals. If check_bounded, certifies boundedness via 2d
    // feasibility LPs (an unbounded recession direction is rejected).
    HPolytope(std::vector<Halfspace> faces, int dim, bool check_bounded = true);

    static HPolytope cube(int dim, double half_side);

    int dim() const { return dim_; }
    const std::vector<Halfspace>& faces() const { return faces_; }
    std::size_t size() const { return faces_.size(); }

    bool contains_origin() const { return contains_origin_; }

    bool contains(const Vec& x, double tol = 1e-12) const;
    // min_i (b_i - a_i·x); negative iff x outside.
    double boundary_distance(const Vec& x) const;

    // From the origin along unit u; requires origin interior.
    RayHit ray_shoot(const Vec& u) const;
    // From an arbitrary interior point.
    RayHit ray_shoot_from(const Vec& start, const Vec& u) const;

    // Inner parallel body P(delta): all offsets reduced by delta.
    HPolytope erode(double delta) const;

    std::vector<LpConstraint> as_constraints() const;

private:
    std::vector<Halfspace> faces_;
    int dim_ = 0;
    bool contains_origin_ = false;
};

struct PointSet {
    std::vector<Vec> pts;
    int dim = 0;

    PointSet() = default;
    PointSet(std::vector<Vec> p, int d);

    std::size_t size() const { return pts.size(); }
    const Vec& operator[](std::size_t i) const { return pts[i]; }
};

// ---------------------------------------------------------------------------
// E = {y : (y-c)^T A (y-c) <= 1}, A symmetric positive definite.
// ---------------------------------------------------------------------------
struct Ellipsoid {
    Vec center;
    Mat shape;

    Ellipsoid() = default;
    Ellipsoid(Vec c, Mat A);  // validates symmetry and positive definiteness

    int dim() const { return static_cast<int>(center.size()); }
    double quad(const Vec& y) const {
        Vec z = y - center;
        return z.dot(shape * z);
    }
    bool contains(const Vec& y, double tol = 1e-9) const { return quad(y) <= 1.0 + tol; }

    // Same center, shape A/lambda^2.
    Ellipsoid scaled(double lambda) const;

    // Semi-axis range, from the eigenvalues of A.
    double max_semi_axis() const;
    double min_semi_axis() const;

    // Intersection of the ray {start + t·u, t >= 0}: [t_lo, t_hi], or nullopt.
    std::optional<std::pair<double, double>> ray_intersect(const Vec& start, const Vec& u) const;

    // Point on the boundary in parameter direction g: c + A^{-1/2} g / |g|.
    Vec boundary_point(const Vec& g) const;
};

// True iff E1 and E2 intersect (tangency counts as intersecting). Decided by
// maximizing the concave function g(t) = min_x [t q1(x) + (1-t) q2(x)] over
// t in (0,1) by golden-section search; the bodies intersect iff max g <= 1.
bool ellipsoids_intersect(const Ellipsoid& e1, const Ellipsoid& e2, double tol = 1e-10);

// Same test with the bounding-ball radii (max/min semi-axes) supplied by the
// caller, so hot loops can cache them instead of re-deriving eigenvalues.
bool ellipsoids_intersect(const Ellipsoid& e1, const Ellipsoid& e2, double r1max,
                          double r1min, double r2max, double r2min, double tol = 1e-10);

// ---------------------------------------------------------------------------
// y = T x + u with cached inverse.
// ---------------------------------------------------------------------------
struct AffineMap {
    Mat linear;
    Vec shift;
    Mat inverse_linear;

    AffineMap() = default;
    AffineMap(Mat T, Vec u);

    static AffineMap identity(int d);

    Vec apply(const Vec& x) const { return linear * x + shift; }
    Vec apply_inverse(const Vec& y) const { return inverse_linear * (y - shift); }
    // Direction covector transport: widths satisfy width_v(S) = |w|·width_{w/|w|}(T(S))
    // with w = T^{-T} v.
    Vec covector(const Vec& v) const { return inverse_linear.transpose() * v; }

    AffineMap compose_after(const AffineMap& inner) const;  // this ∘ inner
};

// ---------------------------------------------------------------------------
// Polar duality about the origin.
// ---------------------------------------------------------------------------
HPolytope polar_points_to_halfspaces(const PointSet& s);
PointSet polar_halfspaces_to_points(const HPolytope& p);

// Radius of a certified origin-centered inner ball (r > 0 required by the
// polar transforms; reported in errors).
double origin_inner_radius(const HPolytope& p);

}  // namespace geomk
