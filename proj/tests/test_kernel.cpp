#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "geomk/kernel.hpp"
#include "geomk/oracle.hpp"

#include <cmath>

using namespace geomk;

namespace {

Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

PointSet diamond() {
    std::vector<Vec> p = {vec2(0.4, 0), vec2(-0.4, 0), vec2(0, 0.4), vec2(0, -0.4)};
    return PointSet(std::move(p), 2);
}

PointSet ball_uniform(Rng& rng, int d, int n, double radius) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<Vec> p;
    p.reserve(n);
    for (int i = 0; i < n; ++i) {
        double r = radius * std::pow(u01(rng), 1.0 / d);
        p.push_back(r * random_unit(rng, d));
    }
    return PointSet(std::move(p), d);
}

double min_width_ratio(const PointSet& all, const PointSet& sub, int ndirs, Rng& rng) {
    double worst = 1.0;
    for (int i = 0; i < ndirs; ++i) {
        Vec v = random_unit(rng, all.dim);
        double wa = oracle::exact_width(all, v);
        double ws = oracle::exact_width(sub, v);
        if (wa > 1e-12) worst = std::min(worst, ws / wa);
    }
    return worst;
}

PointSet take(const PointSet& s, const std::vector<int>& idx) {
    std::vector<Vec> p;
    p.reserve(idx.size());
    for (int i : idx) p.push_back(s[static_cast<std::size_t>(i)]);
    return PointSet(std::move(p), s.dim);
}

}  // namespace

TEST_CASE("base kernel keeps isolated extreme points and drops the interior") {
    auto s = diamond();
    auto r = base_kernel(s, 0.1);
    CHECK(r.subset == std::vector<int>{0, 1, 2, 3});

    std::vector<Vec> withc = {vec2(0.4, 0), vec2(-0.4, 0), vec2(0, 0.4), vec2(0, -0.4),
                              vec2(0, 0)};
    auto r2 = base_kernel(PointSet(std::move(withc), 2), 0.1);
    for (int i : r2.subset) CHECK(i != 4);
}

TEST_CASE("base kernel on a circle sample: size and width ratio") {
    std::vector<Vec> p;
    for (int i = 0; i < 1000; ++i) {
        double t = 2 * M_PI * i / 1000.0;
        p.push_back(vec2(0.4 * std::cos(t), 0.4 * std::sin(t)));
    }
    PointSet s(std::move(p), 2);
    auto r = base_kernel(s, 0.1);
    CHECK(r.subset.size() >= 4);
    CHECK(r.subset.size() <= std::size_t(64 / std::sqrt(0.1)));
    Rng rng(5);
    CHECK(min_width_ratio(s, take(s, r.subset), 1000, rng) >= 1.0 - 0.1);
}

TEST_CASE("hull to halfspaces over a dense circle sample") {
    std::vector<Vec> pts;
    for (int i = 0; i < 2000; ++i) {
        double t = 2 * M_PI * i / 2000.0;
        pts.push_back(vec2(0.4 * std::cos(t), 0.4 * std::sin(t)));
    }
    PointSet s(std::move(pts), 2);
    const double delta = 0.1;
    auto p = hull_to_hrep(s, delta);
    CHECK(p.size() >= 8);
    CHECK(p.contains_origin());

    // inner: sampled boundary points of P never stick out of conv(s)
    auto dirs = direction_net(2, 500);
    for (const auto& u : dirs) {
        Vec y = p.ray_shoot(u).t * u;
        double overshoot = -1e18;
        for (const auto& v : direction_net(2, 256)) {
            double hs = -1e18;
            for (std::size_t j = 0; j < s.size(); ++j) hs = std::max(hs, v.dot(s[j]));
            overshoot = std::max(overshoot, v.dot(y) - hs);
        }
        CHECK(overshoot <= 1e-9);
    }
    // close: extreme input points stay within delta of P
    for (const auto& v : direction_net(2, 200)) {
        int best = 0;
        for (std::size_t j = 1; j < s.size(); ++j)
            if (v.dot(s[j]) > v.dot(s[best])) best = static_cast<int>(j);
        CHECK(oracle::exact_distance_to_boundary(p, s[best]) <= delta);
    }
    // the inner ball of the canonical body survives, shrunk by delta
    for (const auto& u : direction_net(2, 64)) CHECK(p.contains(0.28 * u));
}

TEST_CASE("hull to halfspaces shrinks a square by a controlled offset") {
    std::vector<Vec> pts = {vec2(0.3, 0.3), vec2(0.3, -0.3), vec2(-0.3, 0.3),
                            vec2(-0.3, -0.3)};
    PointSet s(std::move(pts), 2);
    const double delta = 0.01;
    auto p = hull_to_hrep(s, delta);
    auto cons = p.as_constraints();
    for (int axis = 0; axis < 2; ++axis)
        for (double sign : {1.0, -1.0}) {
            Vec v = Vec::Zero(2);
            v[axis] = sign;
            double h = lp_support(cons, v);
            CHECK(h <= 0.3 - delta / 20);
            CHECK(h >= 0.3 - delta);
        }
}

TEST_CASE("pruning keeps an outer approximation with fewer faces") {
    Rng rng(31);
    std::vector<Halfspace> faces;
    for (int i = 0; i < 120; ++i) faces.emplace_back(random_unit(rng, 2), 0.35);
    HPolytope p(std::move(faces), 2);
    auto pp = prune_hrep(p, 0.05);
    CHECK(pp.size() < p.size());
    // outer: boundary of p stays inside pp
    for (const auto& u : direction_net(2, 1000)) {
        Vec y = p.ray_shoot(u).t * u;
        CHECK(pp.contains(y, 1e-9));
    }
    CHECK(oracle::sampled_hausdorff(p, pp, 2000) <= 0.05 + 1e-9);
}

TEST_CASE("pruning a minimal body is a near no-op") {
    std::vector<Halfspace> faces;
    faces.emplace_back(vec2(0, -1), 0.1);
    faces.emplace_back(vec2(1, 1), 0.2);
    faces.emplace_back(vec2(-1, 1), 0.2);
    HPolytope tri(std::move(faces), 2);
    auto pp = prune_hrep(tri, 0.05);
    CHECK(pp.size() <= tri.size());
    for (const auto& u : direction_net(2, 200)) {
        Vec y = tri.ray_shoot(u).t * u;
        CHECK(pp.contains(y, 1e-9));
    }
}

TEST_CASE("full construction returns every vertex of a diamond") {
    for (double eps : {0.3, 0.1, 0.05}) {
        auto r = build_kernel(diamond(), eps);
        CHECK(r.subset == std::vector<int>{0, 1, 2, 3});
    }
}

TEST_CASE("full construction meets the width contract on a 3-d ball sample") {
    Rng rng(77);
    auto s = ball_uniform(rng, 3, 3000, 0.5);
    const double eps = 0.15;
    auto r = build_kernel(s, eps, {1, 0.5});
    auto q = take(s, r.subset);
    Rng dirs(78);
    CHECK(min_width_ratio(s, q, 1000, dirs) >= 1.0 - eps);
    CHECK(r.subset.size() < s.size());
    CHECK(r.stats.rounds_used >= 1);
    CHECK_FALSE(r.stats.delta_schedule.empty());
}

TEST_CASE("deep interior points are discarded in the shadow split") {
    Rng rng(91);
    std::vector<Vec> pts;
    for (int i = 0; i < 200; ++i) pts.push_back(0.45 * random_unit(rng, 2));
    auto inner = ball_uniform(rng, 2, 1800, 0.1);
    for (const auto& x : inner.pts) pts.push_back(x);
    PointSet s(std::move(pts), 2);
    auto r = build_kernel(s, 0.1, {1, 0.5});
    CHECK(double(r.stats.discarded) >= 0.85 * double(s.size()));
    Rng dirs(92);
    CHECK(min_width_ratio(s, take(s, r.subset), 500, dirs) >= 0.9);
}

TEST_CASE("construction is deterministic") {
    Rng rng(55);
    auto s = ball_uniform(rng, 2, 1500, 0.5);
    auto a = build_kernel(s, 0.1, {1, 0.5});
    auto b = build_kernel(s, 0.1, {1, 0.5});
    CHECK(a.subset == b.subset);
    auto c = base_kernel(s, 0.1);
    auto d = base_kernel(s, 0.1);
    CHECK(c.subset == d.subset);
}

TEST_CASE("tighter eps never shrinks the guarantee") {
    Rng rng(63);
    auto s = ball_uniform(rng, 2, 2000, 0.5);
    Rng d1(64), d2(64);
    auto loose = build_kernel(s, 0.2, {1, 0.5});
    auto tight = build_kernel(s, 0.05, {1, 0.5});
    double rl = min_width_ratio(s, take(s, loose.subset), 500, d1);
    double rt = min_width_ratio(s, take(s, tight.subset), 500, d2);
    CHECK(rt >= rl - 1e-12);
    CHECK(rl >= 1.0 - 0.2);
    CHECK(rt >= 1.0 - 0.05);
}
