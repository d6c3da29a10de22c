#include "geomk/canonical.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace geomk {

namespace {

Mat sqrt_spd(const Mat& a) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    require(es.eigenvalues().minCoeff() > 0, "matrix square root: not positive definite");
    return es.operatorSqrt();
}

}  // namespace

HPolytope transform_hpoly(const HPolytope& p, const AffineMap& map) {
    std::vector<Halfspace> faces;
    faces.reserve(p.size());
    for (const auto& f : p.faces()) {
        Vec a = map.inverse_linear.transpose() * f.normal;
        double b = f.offset + f.normal.dot(map.inverse_linear * map.shift);
        faces.emplace_back(std::move(a), b);
    }
    return HPolytope(std::move(faces), p.dim(), false);
}

CanonicalPoints canonicalize_points(const PointSet& s, double tol) {
    const int d = s.dim;
    require(s.size() >= static_cast<std::size_t>(d) + 1,
            "canonicalize_points: need at least d+1 points");

    // Full-dimensionality check on centered points.
    Vec mean = Vec::Zero(d);
    for (const auto& p : s.pts) mean += p;
    mean /= static_cast<double>(s.size());
    Mat cov = Mat::Zero(d, d);
    for (const auto& p : s.pts) cov += (p - mean) * (p - mean).transpose();
    Eigen::SelfAdjointEigenSolver<Mat> es(cov);
    double span = es.eigenvalues().maxCoeff();
    int rank = 0;
    for (int i = 0; i < d; ++i)
        if (es.eigenvalues()[i] > 1e-18 * std::max(span, 1.0)) ++rank;
    require(rank == d, "canonicalize_points: hull is flat, rank " + std::to_string(rank) +
                           " < " + std::to_string(d));

    MveeOptions opt;
    opt.tol = tol;
    Ellipsoid e = mvee(s.pts, d, opt);

    // Map the enclosing ellipsoid to the ball of radius 1/2: with T'T = A/4
    // the quadratic form becomes 4|y|^2.
    Mat T = 0.5 * sqrt_spd(e.shape);
    AffineMap map(T, -T * e.center);

    std::vector<Vec> mapped;
    mapped.reserve(s.size());
    for (const auto& p : s.pts) mapped.push_back(map.apply(p));

    // The worst-case guarantee for the enclosing-ellipsoid route is
    // gamma = 1/(2d(1+tol)), but round inputs do far better. Measure a
    // per-instance inner radius: the support function of the image is
    // 1-Lipschitz-in-angle times the outer radius 1/2, so the minimum over a
    // direction net undershoots the true minimum by at most R*theta for net
    // covering angle theta (taken generously for the quasi-random net).
    double gamma = 1.0 / (2.0 * d * (1.0 + tol));
    if (d <= 4) {
        const int m = (d == 2) ? 2048 : 8192;
        auto dirs = direction_net(d, m);
        const int n = static_cast<int>(mapped.size());
        Mat P(d, n);
        for (int j = 0; j < n; ++j) P.col(j) = mapped[static_cast<std::size_t>(j)];
        double hmin = std::numeric_limits<double>::infinity();
        const int block = 1024;
        Mat D(block, d);
        for (int start = 0; start < m; start += block) {
            int b = std::min(block, m - start);
            for (int k = 0; k < b; ++k) D.row(k) = dirs[static_cast<std::size_t>(start + k)];
            Mat H = D.topRows(b) * P;  // b x n
            for (int k = 0; k < b; ++k) hmin = std::min(hmin, H.row(k).maxCoeff());
        }
        double theta = 6.0 * std::pow(static_cast<double>(m), -1.0 / (d - 1));
        double gamma_net = 2.0 * (hmin - 0.5 * theta);
        gamma = std::clamp(gamma_net, gamma, 0.999);
    }

    CanonicalPoints out{PointSet(std::move(mapped), d), map, gamma};
    log_debug("canonicalize_points: gamma=" + std::to_string(out.gamma));
    return out;
}

CanonicalPoly canonicalize_hpoly(const HPolytope& p, double tol) {
    const int d = p.dim();

    auto cons = p.as_constraints();
    auto [x0, inradius] = chebyshev_center(cons, d);
    require(inradius > 1e-10, "canonicalize_hpoly: polytope has empty interior");

    // Symmetric slab body about x0: |a_i.(y-x0)| <= b_i - a_i.x0. It is
    // contained in P, so its inscribed ellipsoid is inscribed in P too.
    std::vector<std::pair<Vec, double>> slabs;
    slabs.reserve(p.size());
    for (const auto& f : p.faces()) slabs.push_back({f.normal, f.offset - f.normal.dot(x0)});
    MveeOptions opt;
    opt.tol = tol;
    Ellipsoid ein = inscribed_ellipsoid_sym(slabs, x0, opt);

    // First map: inscribed ellipsoid -> unit ball.
    Mat T1 = sqrt_spd(ein.shape);
    AffineMap m1(T1, -T1 * x0);
    HPolytope p1 = transform_hpoly(p, m1);

    // Certified outer radius from the axis-aligned bounding box of the image
    // (support LPs in the 2d axis directions).
    auto cons1 = p1.as_constraints();
    double r2 = 0.0;
    for (int j = 0; j < d; ++j) {
        Vec ej = Vec::Zero(d);
        ej[j] = 1.0;
        double hi = lp_support(cons1, ej);
        double lo = -lp_support(cons1, -ej);
        double rj = std::max(std::abs(hi), std::abs(lo));
        r2 += rj * rj;
    }
    double rball = std::sqrt(r2) * (1.0 + 1e-9);
    require(rball >= 1.0 - 1e-6, "canonicalize_hpoly: outer radius below inner ball");

    // Second map: shrink so the image sits inside the ball of radius 1/2;
    // the unit ball shrinks to radius 1/(2 rball), hence gamma = 1/rball.
    double sigma = 1.0 / (2.0 * rball);
    AffineMap map(sigma * T1, sigma * (-T1 * x0));

    CanonicalPoly out{transform_hpoly(p, map), map, 1.0 / rball};
    require(out.poly.contains_origin(), "canonicalize_hpoly: origin not interior after mapping");
    log_debug("canonicalize_hpoly: gamma=" + std::to_string(out.gamma));
    return out;
}

}  // namespace geomk
