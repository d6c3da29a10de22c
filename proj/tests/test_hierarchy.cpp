#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "geomk/canonical.hpp"
#include "geomk/hierarchy.hpp"

#include <cmath>

using namespace geomk;

namespace {

Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

// the square {|x_i| <= 0.3} is canonical with gamma = 0.6
const double kSquareGamma = 0.6;

CanonicalPoly random_canonical(Rng& rng, int d, int nfaces) {
    std::uniform_real_distribution<double> uo(0.5, 1.2);
    std::vector<Halfspace> faces;
    for (int i = 0; i < nfaces; ++i) faces.emplace_back(random_unit(rng, d), uo(rng));
    for (int j = 0; j < d; ++j) {
        Vec e = Vec::Zero(d);
        e[j] = 1.0;
        faces.emplace_back(e, 1.2);
        faces.emplace_back(-e, 1.2);
    }
    return canonicalize_hpoly(HPolytope(std::move(faces), d, false));
}

}  // namespace

TEST_CASE("level over the square: coverage and exact disjointness") {
    auto p = HPolytope::cube(2, 0.3);
    auto k = Constants::for_gamma(kSquareGamma, 2);
    auto lev = build_level(p, k.Delta0, k);
    CHECK(lev.centers.size() >= 1);

    // coverage of sampled boundary points of P(delta)
    auto pd = p.erode(k.Delta0);
    Rng rng(107);
    for (int s = 0; s < 1000; ++s) {
        Vec u = random_unit(rng, 2);
        Vec y = pd.ray_shoot(u).t * u;
        bool covered = false;
        for (std::size_t j = 0; j < lev.fits.size() && !covered; ++j) {
            Ellipsoid big = lev.fits[j].inner.scaled(4.0 * std::sqrt(2.0) *
                                                     lev.fits[j].outer_factor);
            if (big.quad(y) <= 1.0 + 1e-9) covered = true;
        }
        CHECK(covered);
    }

    // pairwise LP infeasibility of the lambda0 regions
    for (std::size_t i = 0; i < lev.centers.size(); ++i) {
        auto ri = macbeath_region(p, lev.centers[i], k.lambda0);
        for (std::size_t j = i + 1; j < lev.centers.size(); ++j) {
            auto rj = macbeath_region(p, lev.centers[j], k.lambda0);
            CHECK_FALSE(regions_intersect(ri, rj));
        }
    }
}

TEST_CASE("level size grows at the packing rate when delta halves") {
    auto p = HPolytope::cube(2, 0.3);
    auto k = Constants::for_gamma(kSquareGamma, 2);
    auto a = build_level(p, k.Delta0 / 4, k);
    auto b = build_level(p, k.Delta0 / 8, k);
    double factor = double(b.centers.size()) / double(a.centers.size());
    CHECK(factor >= 1.1);
    CHECK(factor <= std::pow(2.0, 0.5) * 1.5);
}

TEST_CASE("level rejects delta beyond the budget") {
    auto p = HPolytope::cube(2, 0.3);
    auto k = Constants::for_gamma(kSquareGamma, 2);
    CHECK_THROWS_AS(build_level(p, 2 * k.Delta0, k), GeomError);
}

TEST_CASE("dag over the square: levels, depths and descent") {
    auto p = HPolytope::cube(2, 0.3);
    auto k = Constants::for_gamma(kSquareGamma, 2);
    auto dag = build_dag(p, k.Delta0 / 8, k);
    CHECK(dag.depth() == 3);
    for (int i = 0; i + 1 <= dag.depth(); ++i)
        CHECK(dag.levels[i].size() <= dag.levels[i + 1].size());

    // single level at delta_target = Delta0
    auto dag0 = build_dag(p, k.Delta0, k);
    CHECK(dag0.depth() == 0);

    // descent along +x
    auto r = dag.descend(vec2(1, 0));
    CHECK(r.leaf >= 0);
    CHECK(r.visited == dag.depth() + 2);
    CHECK_FALSE(r.fallback);
    auto hit = dag.nodes[r.leaf].ell.ray_intersect(Vec::Zero(2), vec2(1, 0));
    REQUIRE(hit.has_value());
    // the leaf sits near the eroded boundary at depth Delta_ell
    CHECK(dag.nodes[r.leaf].center.norm() > 0.2);

    auto rneg = dag.descend(vec2(-1, 0));
    CHECK(rneg.leaf >= 0);

    Rng rng(109);
    for (int s = 0; s < 10000; ++s) {
        auto rr = dag.descend(random_unit(rng, 2));
        CHECK(rr.leaf >= 0);
        CHECK(rr.visited == dag.depth() + 2);
        CHECK_FALSE(rr.fallback);
    }
}

TEST_CASE("node centers sit exactly on the eroded boundaries") {
    Rng rng(113);
    auto c = random_canonical(rng, 3, 30);
    auto k = Constants::for_gamma(c.gamma, 3);
    auto dag = build_dag(c.poly, k.Delta0 / 32, k);
    CHECK(dag.depth() == 5);
    for (const auto& n : dag.nodes) {
        double depth = c.poly.boundary_distance(n.center);
        CHECK(depth == doctest::Approx(dag.deltas[n.level]).epsilon(1e-7));
        CHECK((n.ell.center - n.center).norm() < 1e-12);
    }
    // descent over the random body
    for (int s = 0; s < 2000; ++s) {
        auto rr = dag.descend(random_unit(rng, 3));
        CHECK(rr.visited == dag.depth() + 2);
        CHECK_FALSE(rr.fallback);
    }
}

TEST_CASE("max out-degree stays bounded as delta shrinks") {
    auto p = HPolytope::cube(2, 0.3);
    auto k = Constants::for_gamma(kSquareGamma, 2);
    int prev = 0;
    std::vector<int> degrees;
    for (int i = 1; i <= 5; ++i) {
        auto dag = build_dag(p, k.Delta0 / std::pow(2.0, i), k);
        degrees.push_back(dag.max_degree);
    }
    // recorded max degree does not keep growing with depth
    int last = degrees.back();
    int peak = *std::max_element(degrees.begin(), degrees.end());
    CHECK(last <= peak);
    CHECK(peak <= 64);
    (void)prev;
}

TEST_CASE("leaf halfspaces support the body at the ray hit") {
    auto p = HPolytope::cube(2, 0.3);
    auto k = Constants::for_gamma(kSquareGamma, 2);
    auto dag = build_dag(p, k.Delta0 / 4, k);
    attach_leaf_halfspaces(dag, p);
    std::set<int> facets;
    for (int id : dag.levels.back()) {
        const auto& n = dag.nodes[id];
        REQUIRE(n.leaf_halfspace >= 0);
        const auto& h = p.faces()[n.leaf_halfspace];
        Vec u = n.center / n.center.norm();
        Vec hitpt = p.ray_shoot(u).t * u;
        CHECK(h.signed_dist(hitpt) == doctest::Approx(0.0).epsilon(1e-9));
        facets.insert(n.leaf_halfspace);
        // a leaf near the +x facet must store x1 <= 0.3
        if ((n.center - vec2(0.28, 0.0)).norm() < 0.03)
            CHECK(h.normal.isApprox(vec2(1, 0), 1e-9));
    }
    // centers on different facets pick up different halfspaces
    CHECK(facets.size() == 4);
}
