#include "geomk/core.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace geomk {

Halfspace::Halfspace(Vec a, double b) {
    double n = a.norm();
    require(n > 1e-14, "halfspace normal is (near) zero");
    require(std::isfinite(b), "halfspace offset not finite");
    normal = a / n;
    offset = b / n;
}

HPolytope::HPolytope(std::vector<Halfspace> faces, int dim, bool check_bounded)
    : faces_(std::move(faces)), dim_(dim) {
    check_dim(dim);
    require(!faces_.empty(), "polytope needs at least one halfspace");
    for (const auto& f : faces_)
        require(static_cast<int>(f.normal.size()) == dim, "halfspace dimension mismatch");

    contains_origin_ = true;
    for (const auto& f : faces_)
        if (f.offset <= 0) contains_origin_ = false;

    if (check_bounded) {
        // Unbounded iff some u != 0 has a_i·u <= 0 for all i; any such u can be
        // scaled so that one coordinate equals +-1.
        for (int j = 0; j < dim; ++j) {
            for (double sign : {1.0, -1.0}) {
                std::vector<LpConstraint> cons;
                cons.reserve(faces_.size() + 2);
                for (const auto& f : faces_) cons.push_back({f.normal, 0.0});
                Vec ej = Vec::Zero(dim);
                ej[j] = sign;
                cons.push_back({ej, 1.0});
                cons.push_back({-ej, -1.0});  // e_j·u = sign fixed to 1 after sign flip
                Vec obj = Vec::Zero(dim);
                LpResult r = lp_maximize(cons, obj, 1e3);
                if (r.status != LpStatus::Infeasible)
                    throw GeomError("polytope unbounded (recession direction found)");
            }
        }
    }
}

HPolytope HPolytope::cube(int dim, double half_side) {
    std::vector<Halfspace> faces;
    for (int j = 0; j < dim; ++j) {
        Vec e = Vec::Zero(dim);
        e[j] = 1.0;
        faces.emplace_back(e, half_side);
        faces.emplace_back(-e, half_side);
    }
    return HPolytope(std::move(faces), dim, false);
}

bool HPolytope::contains(const Vec& x, double tol) const {
    for (const auto& f : faces_)
        if (f.signed_dist(x) > tol) return false;
    return true;
}

double HPolytope::boundary_distance(const Vec& x) const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& f : faces_) m = std::min(m, -f.signed_dist(x));
    return m;
}

RayHit HPolytope::ray_shoot(const Vec& u) const {
    require(contains_origin_, "ray_shoot requires origin in the interior");
    return ray_shoot_from(Vec::Zero(dim_), u);
}

RayHit HPolytope::ray_shoot_from(const Vec& start, const Vec& u) const {
    RayHit hit;
    hit.t = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < faces_.size(); ++i) {
        double du = faces_[i].normal.dot(u);
        if (du <= 1e-14) continue;
        double t = (faces_[i].offset - faces_[i].normal.dot(start)) / du;
        if (t < hit.t) {
            hit.t = t;
            hit.face = static_cast<int>(i);
        }
    }
    if (hit.face < 0)
        throw GeomError("ray_shoot: unbounded direction (no halfspace faces the ray)");
    return hit;
}

HPolytope HPolytope::erode(double delta) const {
    require(delta >= 0, "erode: negative delta");
    std::vector<Halfspace> faces = faces_;
    bool still_origin = true;
    for (auto& f : faces) {
        f.offset -= delta;
        if (f.offset <= 0) still_origin = false;
    }
    if (contains_origin_ && !still_origin)
        throw GeomError("erode: eroded body no longer contains the origin");
    return HPolytope(std::move(faces), dim_, false);
}

std::vector<LpConstraint> HPolytope::as_constraints() const {
    std::vector<LpConstraint> cons;
    cons.reserve(faces_.size());
    for (const auto& f : faces_) cons.push_back({f.normal, f.offset});
    return cons;
}

PointSet::PointSet(std::vector<Vec> p, int d) : pts(std::move(p)), dim(d) {
    check_dim(d);
    require(!pts.empty(), "point set is empty");
    for (const auto& x : pts) {
        require(static_cast<int>(x.size()) == d, "point dimension mismatch");
        for (int i = 0; i < d; ++i) require(std::isfinite(x[i]), "point coordinate not finite");
    }
}

Ellipsoid::Ellipsoid(Vec c, Mat A) : center(std::move(c)), shape(std::move(A)) {
    require(shape.rows() == shape.cols() && shape.rows() == center.size(),
            "ellipsoid shape/center size mismatch");
    require((shape - shape.transpose()).cwiseAbs().maxCoeff() < 1e-10 * (1 + shape.cwiseAbs().maxCoeff()),
            "ellipsoid shape not symmetric");
    shape = 0.5 * (shape + shape.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(shape);
    require(es.eigenvalues().minCoeff() > 0, "ellipsoid shape not positive definite");
}

Ellipsoid Ellipsoid::scaled(double lambda) const {
    require(lambda > 0, "ellipsoid scale must be positive");
    Ellipsoid e;
    e.center = center;
    e.shape = shape / (lambda * lambda);
    return e;
}

double Ellipsoid::max_semi_axis() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(shape);
    return 1.0 / std::sqrt(es.eigenvalues().minCoeff());
}

double Ellipsoid::min_semi_axis() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(shape);
    return 1.0 / std::sqrt(es.eigenvalues().maxCoeff());
}

std::optional<std::pair<double, double>> Ellipsoid::ray_intersect(const Vec& start,
                                                                  const Vec& u) const {
    Vec z = start - center;
    double a = u.dot(shape * u);
    double b = 2.0 * u.dot(shape * z);
    double c = z.dot(shape * z) - 1.0;
    if (a < 1e-300) return std::nullopt;
    double disc = b * b - 4 * a * c;
    if (disc < 0) return std::nullopt;
    double sq = std::sqrt(disc);
    double t0 = (-b - sq) / (2 * a);
    double t1 = (-b + sq) / (2 * a);
    if (t1 < 0) return std::nullopt;
    return std::make_pair(std::max(t0, 0.0), t1);
}

Vec Ellipsoid::boundary_point(const Vec& g) const {
    Eigen::LLT<Mat> llt(shape);
    // Solve shape = L L^T; boundary point c + y with y^T shape y = 1:
    // y = L^{-T} (g/|L^{-T}... |): take y0 = llt.matrixL().transpose().solve(g), normalize in shape norm.
    Vec y = llt.matrixU().solve(g);
    double q = y.dot(shape * y);
    return center + y / std::sqrt(q);
}

bool ellipsoids_intersect(const Ellipsoid& e1, const Ellipsoid& e2, double tol) {
    return ellipsoids_intersect(e1, e2, e1.max_semi_axis(), e1.min_semi_axis(),
                                e2.max_semi_axis(), e2.min_semi_axis(), tol);
}

bool ellipsoids_intersect(const Ellipsoid& e1, const Ellipsoid& e2, double r1max,
                          double r1min, double r2max, double r2min, double tol) {
    // Quick accepts/rejects via center containment and bounding balls.
    double cd = (e1.center - e2.center).norm();
    if (cd > r1max + r2max) return false;
    if (cd <= r1min + r2min) return true;
    if (e1.contains(e2.center, 0.0) || e2.contains(e1.center, 0.0)) return true;

    auto g = [&](double t) {
        Mat B = t * e1.shape + (1 - t) * e2.shape;
        Vec rhs = t * (e1.shape * e1.center) + (1 - t) * (e2.shape * e2.center);
        Vec x = B.ldlt().solve(rhs);
        Vec z1 = x - e1.center, z2 = x - e2.center;
        return t * z1.dot(e1.shape * z1) + (1 - t) * z2.dot(e2.shape * z2);
    };
    // g is concave on [0,1] with g(0) = g(1) = 0; golden-section maximization.
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = 1.0;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = g(x1);
        }
    }
    double gmax = std::max(f1, f2);
    return gmax <= 1.0 + tol;
}

AffineMap::AffineMap(Mat T, Vec u) : linear(std::move(T)), shift(std::move(u)) {
    require(linear.rows() == linear.cols() && linear.rows() == shift.size(),
            "affine map size mismatch");
    Eigen::FullPivLU<Mat> lu(linear);
    require(lu.isInvertible(), "affine map not invertible");
    inverse_linear = lu.inverse();
}

AffineMap AffineMap::identity(int d) {
    return AffineMap(Mat::Identity(d, d), Vec::Zero(d));
}

AffineMap AffineMap::compose_after(const AffineMap& inner) const {
    return AffineMap(linear * inner.linear, linear * inner.shift + shift);
}

double origin_inner_radius(const HPolytope& p) {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& f : p.faces()) r = std::min(r, f.offset);
    return r;
}

HPolytope polar_points_to_halfspaces(const PointSet& s) {
    std::vector<Halfspace> faces;
    faces.reserve(s.size());
    for (const auto& pt : s.pts) {
        require(pt.norm() > 1e-12, "polar: point at the origin has no dual halfspace");
        faces.emplace_back(pt, 1.0);
    }
    return HPolytope(std::move(faces), s.dim, false);
}

PointSet polar_halfspaces_to_points(const HPolytope& p) {
    double r = origin_inner_radius(p);
    require(r > 1e-12, "polar: origin not interior (inner radius " + std::to_string(r) + ")");
    std::vector<Vec> pts;
    pts.reserve(p.size());
    for (const auto& f : p.faces()) pts.push_back(f.normal / f.offset);
    return PointSet(std::move(pts), p.dim());
}

}  // namespace geomk
