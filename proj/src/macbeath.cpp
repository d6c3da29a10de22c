#include "geomk/macbeath.hpp"

#include <cmath>

namespace geomk {

MacbeathRegion MacbeathRegion::rescaled(double lambda) const {
    require(lambda > 0, "macbeath scale must be positive");
    MacbeathRegion r = *this;
    r.scale = lambda;
    return r;
}

bool MacbeathRegion::contains(const Vec& y, double tol) const {
    for (const auto& [a, w] : slabs)
        if (std::abs(a.dot(y - center)) > scale * w + tol) return false;
    return true;
}

std::vector<LpConstraint> MacbeathRegion::as_constraints() const {
    std::vector<LpConstraint> cons;
    cons.reserve(2 * slabs.size());
    for (const auto& [a, w] : slabs) {
        cons.push_back({a, a.dot(center) + scale * w});
        cons.push_back({-a, -a.dot(center) + scale * w});
    }
    return cons;
}

MacbeathRegion macbeath_region(const HPolytope& p, const Vec& x, double lambda) {
    require(lambda > 0, "macbeath scale must be positive");
    MacbeathRegion r;
    r.center = x;
    r.scale = lambda;
    r.slabs.reserve(p.size());
    for (const auto& f : p.faces()) {
        double w = f.offset - f.normal.dot(x);
        require(w > 0, "macbeath_region: center not strictly interior");
        r.slabs.push_back({f.normal, w});
    }
    return r;
}

MacbeathEllipsoid macbeath_ellipsoid(const HPolytope& p, const Vec& x, double lambda,
                                     double tol) {
    const int d = p.dim();
    // Fit at scale 1 and scale the result: the inscribed ellipsoid of the
    // lambda-scaled slab system is exactly the lambda-scaled fit.
    MacbeathRegion base = macbeath_region(p, x, 1.0);
    MveeOptions opt;
    opt.tol = tol;
    Ellipsoid inner1 = inscribed_ellipsoid_sym(base.slabs, x, opt);

    MacbeathEllipsoid e;
    e.center = x;
    e.lambda = lambda;
    e.outer_factor = std::sqrt(static_cast<double>(d)) * (1.0 + tol);
    e.inner = inner1.scaled(lambda);
    e.exported = e.inner.scaled(e.outer_factor);
    return e;
}

bool regions_intersect(const MacbeathRegion& r1, const MacbeathRegion& r2, double tol) {
    auto cons = r1.as_constraints();
    auto c2 = r2.as_constraints();
    cons.insert(cons.end(), c2.begin(), c2.end());
    return interior_margin(cons, static_cast<int>(r1.center.size())) >= -tol;
}

bool in_shadow(const Ellipsoid& e, const Vec& p) {
    auto hit = e.ray_intersect(Vec::Zero(p.size()), p);
    return hit && hit->first <= 1.0 + 1e-12;
}

bool in_shadow(const MacbeathRegion& r, const Vec& p) {
    // Segment {t p : t in [0,1]}; each slab restricts t to an interval.
    double lo = 0.0, hi = 1.0;
    for (const auto& [a, w] : r.slabs) {
        double ap = a.dot(p);
        double c = a.dot(r.center);
        double hw = r.scale * w;
        if (std::abs(ap) < 1e-14) {
            if (std::abs(c) > hw + 1e-12) return false;
            continue;
        }
        double t0 = (c - hw) / ap, t1 = (c + hw) / ap;
        if (t0 > t1) std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
        if (lo > hi + 1e-12) return false;
    }
    return true;
}

Vec sample_region_point(const MacbeathRegion& r, Rng& rng) {
    const int d = static_cast<int>(r.center.size());
    Vec u = random_unit(rng, d);
    double tmax = std::numeric_limits<double>::infinity();
    for (const auto& [a, w] : r.slabs) {
        double au = std::abs(a.dot(u));
        if (au > 1e-14) tmax = std::min(tmax, r.scale * w / au);
    }
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    return r.center + uni(rng) * tmax * u;
}

Vec sample_ellipsoid_point(const Ellipsoid& e, Rng& rng) {
    const int d = e.dim();
    Vec bd = e.boundary_point(random_unit(rng, d));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double s = std::pow(uni(rng), 1.0 / d);
    return e.center + s * (bd - e.center);
}

namespace {

Vec push_to_shadow(const HPolytope& p, const Vec& z, Rng& rng) {
    // z is in the region; every t z with t >= 1 and t z in P is in the shadow.
    double texit = std::numeric_limits<double>::infinity();
    for (const auto& f : p.faces()) {
        double az = f.normal.dot(z);
        if (az > 1e-14) texit = std::min(texit, f.offset / az);
    }
    require(std::isfinite(texit), "shadow sample: unbounded ray");
    texit = std::max(texit, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double t = 1.0 + uni(rng) * (texit - 1.0);
    return t * z;
}

}  // namespace

Vec sample_shadow_point(const HPolytope& p, const MacbeathRegion& r, Rng& rng) {
    return push_to_shadow(p, sample_region_point(r, rng), rng);
}

Vec sample_shadow_point(const HPolytope& p, const Ellipsoid& e, Rng& rng) {
    return push_to_shadow(p, sample_ellipsoid_point(e, rng), rng);
}

}  // namespace geomk
