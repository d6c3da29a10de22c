#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "geomk/extent.hpp"
#include "geomk/oracle.hpp"

#include <cmath>

using namespace geomk;

namespace {

Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

PointSet ball_cloud(Rng& rng, int d, int n, double radius) {
    std::normal_distribution<double> g(0, 1);
    std::uniform_real_distribution<double> ur(0, 1);
    std::vector<Vec> pts;
    for (int i = 0; i < n; ++i) {
        Vec v(d);
        for (int j = 0; j < d; ++j) v[j] = g(rng);
        v *= radius * std::pow(ur(rng), 1.0 / d) / v.norm();
        pts.push_back(std::move(v));
    }
    return PointSet(std::move(pts), d);
}

PointSet cube_cloud(Rng& rng, int d, int n) {
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<Vec> pts;
    for (int i = 0; i < n; ++i) {
        Vec v(d);
        for (int j = 0; j < d; ++j) v[j] = u(rng);
        pts.push_back(std::move(v));
    }
    return PointSet(std::move(pts), d);
}

}  // namespace

TEST_CASE("diameter of two points is the pair itself") {
    PointSet s({vec2(0, 0), vec2(3, 4)}, 2);
    auto r = diameter(s, 0.1);
    CHECK(r.dist == doctest::Approx(5.0));
    CHECK(((r.i == 0 && r.j == 1) || (r.i == 1 && r.j == 0)));
}

TEST_CASE("diameter of a segment with interior points returns the endpoints") {
    PointSet s({vec2(0, 0), vec2(1, 1), vec2(2, 2), vec2(5, 5), vec2(3, 3)}, 2);
    auto r = diameter(s, 0.1);
    CHECK(r.dist == doctest::Approx(std::sqrt(50.0)));
    CHECK(((r.i == 0 && r.j == 3) || (r.i == 3 && r.j == 0)));
}

TEST_CASE("diameter on a 3-d ball cloud is within the approximation band") {
    Rng rng(301);
    auto s = ball_cloud(rng, 3, 3000, 0.5);
    double eps = 0.1;
    auto r = diameter(s, eps);
    auto exact = oracle::exact_diameter(s);
    CHECK(r.dist <= exact.dist + 1e-12);
    CHECK(r.dist >= (1 - eps) * exact.dist);
    // the reported pair realizes the reported distance
    CHECK((s[static_cast<std::size_t>(r.i)] - s[static_cast<std::size_t>(r.j)]).norm() ==
          doctest::Approx(r.dist));
}

TEST_CASE("width queries on the diamond match hand geometry") {
    PointSet s({vec2(0.4, 0), vec2(-0.4, 0), vec2(0, 0.4), vec2(0, -0.4)}, 2);
    double eps = 0.1;
    auto idx = width_build(s, eps);
    CHECK(idx.apm.stats.nodes > 0);

    double w1 = width_query(idx, vec2(1, 0));
    CHECK(w1 >= (1 - eps) * 0.8);
    CHECK(w1 <= (1 + eps) * 0.8);

    Vec diag = vec2(1, 1) / std::sqrt(2.0);
    double w2 = width_query(idx, diag);
    CHECK(w2 >= (1 - eps) * 0.8 / std::sqrt(2.0));
    CHECK(w2 <= (1 + eps) * 0.8 / std::sqrt(2.0));

    // exact symmetry, and scale invariance in the direction argument
    CHECK(width_query(idx, vec2(-1, 0)) == w1);
    CHECK(width_query(idx, vec2(3, 0)) == doctest::Approx(w1).epsilon(1e-12));
}

TEST_CASE("width queries on a random 3-d cloud meet the relative error bound") {
    Rng rng(307);
    std::uniform_real_distribution<double> u(-1, 1);
    Mat skew(3, 3);
    skew << 2.0, 0.4, 0.0, 0.0, 1.0, 0.2, 0.0, 0.0, 0.5;
    std::vector<Vec> pts;
    for (int i = 0; i < 400; ++i) {
        Vec v(3);
        for (int j = 0; j < 3; ++j) v[j] = u(rng);
        pts.push_back(skew * v);
    }
    PointSet s(std::move(pts), 3);
    double eps = 0.1;
    auto idx = width_build(s, eps);
    for (int t = 0; t < 200; ++t) {
        Vec v = random_unit(rng, 3);
        double approx = width_query(idx, v);
        double exact = oracle::exact_width(s, v);
        CHECK(approx >= (1 - eps) * exact);
        CHECK(approx <= (1 + eps) * exact);
        CHECK(width_query(idx, (-v).eval()) == approx);
    }
}

TEST_CASE("wsann trivial cases") {
    PointSet one({vec2(0, 0)}, 2);
    auto idx = wsann_build(one, 1.0, 0.1);
    CHECK(wsann_query(idx, vec2(3, 3)) == 0);

    PointSet two({vec2(0, 0), vec2(1, 0)}, 2);
    auto idx2 = wsann_build(two, 1.0, 0.1);
    int got = wsann_query(idx2, vec2(0.5, 4.0));  // equidistant: either is valid
    CHECK((got == 0 || got == 1));

    // separation contract: a query touching the bounding box is rejected
    CHECK_THROWS_WITH_AS(wsann_query(idx2, vec2(0.5, 0.5)),
                         doctest::Contains("separation"), GeomError);
}

TEST_CASE("wsann random instances stay within 1+eps of the exact neighbor") {
    Rng rng(311);
    double eps = 0.1, sigma = 1.0;
    for (int rep = 0; rep < 12; ++rep) {
        int d = 2 + rep % 2;
        auto s = cube_cloud(rng, d, 200);
        auto idx = wsann_build(s, sigma, eps);
        std::uniform_real_distribution<double> u(-2.5, 3.5);
        int tried = 0;
        while (tried < 60) {
            Vec q(d);
            for (int j = 0; j < d; ++j) q[j] = u(rng);
            double gap2 = 0;
            for (int j = 0; j < d; ++j) {
                double g = std::max({idx.box_lo[j] - q[j], q[j] - idx.box_hi[j], 0.0});
                gap2 += g * g;
            }
            if (std::sqrt(gap2) < sigma * idx.r * 1.001) continue;
            ++tried;
            int got = wsann_query(idx, q);
            double best = 1e300;
            for (const auto& p : s.pts) best = std::min(best, (q - p).norm());
            CHECK((q - s[static_cast<std::size_t>(got)]).norm() <= (1 + eps) * best + 1e-12);
        }
    }
}

TEST_CASE("bcp trivial pairs") {
    PointSet r({vec2(0, 0)}, 2), b({vec2(3, 4)}, 2);
    auto res = bcp(r, b, 0.1, 1);
    CHECK(res.dist == doctest::Approx(5.0));
    CHECK(res.i == 0);
    CHECK(res.j == 0);

    PointSet r2({vec2(0, 0), vec2(1, 0)}, 2);
    PointSet b2({vec2(0.5, 0.6), vec2(3, 3)}, 2);
    auto res2 = bcp(r2, b2, 0.1, 1);
    CHECK(res2.dist == doctest::Approx(std::sqrt(0.61)));
    CHECK(res2.j == 0);
}

TEST_CASE("bcp on uniform clouds: ratio and estimate contracts, deterministic") {
    Rng rng(313);
    double eps = 0.1;
    for (int d = 2; d <= 3; ++d) {
        auto r = cube_cloud(rng, d, 2000);
        auto b = cube_cloud(rng, d, 2000);
        auto exact = oracle::exact_bcp(r, b);
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            auto res = bcp(r, b, eps, seed);
            CHECK(res.dist >= exact.dist - 1e-12);
            CHECK(res.dist <= (1 + eps) * exact.dist);
            CHECK(res.estimate >= exact.dist - 1e-12);
            CHECK(res.estimate < 2 * exact.dist);
            // reported pair is genuine
            CHECK((r[static_cast<std::size_t>(res.i)] - b[static_cast<std::size_t>(res.j)])
                      .norm() == doctest::Approx(res.dist));
            auto again = bcp(r, b, eps, seed);
            CHECK(again.i == res.i);
            CHECK(again.j == res.j);
            CHECK(again.dist == res.dist);
            CHECK(again.estimate == res.estimate);
        }
    }
}

TEST_CASE("bcp with coincident points returns distance zero") {
    PointSet r({vec2(1, 1), vec2(2, 2)}, 2);
    PointSet b({vec2(2, 2)}, 2);
    auto res = bcp(r, b, 0.1, 7);
    CHECK(res.dist == 0.0);
}
