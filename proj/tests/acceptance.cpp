// Acceptance gate: one line per criterion, PASS or FAIL with a short
// summary. Exit code is the number of failed criteria.

#include "geomk/apm.hpp"
#include "geomk/canonical.hpp"
#include "geomk/extent.hpp"
#include "geomk/hierarchy.hpp"
#include "geomk/kernel.hpp"
#include "geomk/macbeath.hpp"
#include "geomk/oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace geomk;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("criterion %2d: %s  (%s)\n", criterion, ok ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string hex(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%a", x);
    return buf;
}

PointSet ball_cloud(int d, int n, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> ur(0, 1);
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Vec v = random_unit(rng, d);
        pts.push_back(std::pow(ur(rng), 1.0 / d) * v);
    }
    return PointSet(std::move(pts), d);
}

HPolytope random_polytope(int d, int nfaces, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> uo(0.5, 1.2);
    std::vector<Halfspace> faces;
    for (int i = 0; i < nfaces; ++i) faces.emplace_back(random_unit(rng, d), uo(rng));
    for (int j = 0; j < d; ++j) {
        Vec e = Vec::Zero(d);
        e[j] = 1.0;
        faces.emplace_back(e, 1.2);
        faces.emplace_back(-e, 1.2);
    }
    return HPolytope(std::move(faces), d, false);
}

// ---------------------------------------------------------------------------
// Criteria 1 + 2 (+ output capture for 10)
// ---------------------------------------------------------------------------

struct KernelRunSummary {
    std::string output;            // serialized subsets, for the determinism rerun
    bool correct = true;           // zero width violations
    bool in_budget = true;         // < 60 s per configuration
    double worst_time = 0;
    long violations = 0;
    std::vector<double> d3_eps;    // per-configuration eps at d=3
    std::vector<std::size_t> d3_sizes;
};

KernelRunSummary run_criterion1() {
    KernelRunSummary sum;
    std::ostringstream out;
    const int n = 20000, ndirs = 10000;
    for (int d = 2; d <= 3; ++d) {
        auto s = ball_cloud(d, n, 1000 + static_cast<std::uint64_t>(d));
        Rng drng(2000 + static_cast<std::uint64_t>(d));
        std::vector<Vec> dirs;
        dirs.reserve(ndirs);
        for (int i = 0; i < ndirs; ++i) dirs.push_back(random_unit(drng, d));
        std::vector<double> full(dirs.size());
        for (std::size_t i = 0; i < dirs.size(); ++i)
            full[i] = oracle::exact_width(s, dirs[i]);

        // the 0.4 run feeds the size-scaling fit only
        for (double eps : {0.4, 0.2, 0.1, 0.05}) {
            double t0 = now_s();
            auto kr = build_kernel(s, eps);
            std::vector<Vec> sub;
            sub.reserve(kr.subset.size());
            for (int i : kr.subset) sub.push_back(s[static_cast<std::size_t>(i)]);
            PointSet q(std::move(sub), d);
            long bad = 0;
            for (std::size_t i = 0; i < dirs.size(); ++i)
                if (oracle::exact_width(q, dirs[i]) < (1 - eps) * full[i] - 1e-12) ++bad;
            double el = now_s() - t0;

            out << "d=" << d << " eps=" << hex(eps) << " size=" << kr.subset.size()
                << " idx=";
            for (int i : kr.subset) out << i << ",";
            out << " bad=" << bad << "\n";
            if (d == 3) {
                sum.d3_eps.push_back(eps);
                sum.d3_sizes.push_back(kr.subset.size());
            }
            if (eps >= 0.4 - 1e-12) continue;  // not part of the criterion-1 grid
            sum.violations += bad;
            if (bad) sum.correct = false;
            sum.worst_time = std::max(sum.worst_time, el);
            if (el >= 60.0) sum.in_budget = false;
        }
    }
    sum.output = out.str();
    return sum;
}

double fit_slope(const std::vector<double>& eps, const std::vector<std::size_t>& sizes) {
    double mx = 0, my = 0;
    const std::size_t k = eps.size();
    std::vector<double> xs(k), ys(k);
    for (std::size_t i = 0; i < k; ++i) {
        xs[i] = std::log(1.0 / eps[i]);
        ys[i] = std::log(static_cast<double>(sizes[i]));
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(k);
    my /= static_cast<double>(k);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < k; ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
}

// ---------------------------------------------------------------------------
// Criteria 3 + 4 + 5
// ---------------------------------------------------------------------------

struct ApmRun {
    ApmIndex idx;
    double eps = 0;
    int rounds = 0;
};

struct ApmSummary {
    long inside_rejected = 0;
    long outside_accepted = 0;  // at canonical distance > eps
    long queries = 0;
    int worst_path = 0;
    bool path_ok = true;
    std::vector<ApmRun> runs;
};

ApmSummary run_criteria34() {
    ApmSummary sum;
    const int d = 3;
    int poly_id = 0;
    for (int nfaces : {120, 380}) {
        auto p = random_polytope(d, nfaces, 5000 + static_cast<std::uint64_t>(poly_id));
        auto c = canonicalize_hpoly(p);  // independent frame for the distance oracle
        ++poly_id;
        for (double eps : {0.1, 0.05}) {
            for (int rounds : {0, 1}) {
                ApmRun run;
                run.eps = eps;
                run.rounds = rounds;
                run.idx = build_apm(p, eps, rounds);

                Rng qrng(7000 + static_cast<std::uint64_t>(poly_id * 10 + rounds) +
                         static_cast<std::uint64_t>(eps * 1000));
                std::uniform_real_distribution<double> uf(1.0 - 3 * eps, 1.0 + 8 * eps);
                const double budget =
                    (rounds + 1) * (4 * std::log2(1.0 / eps) + 4);
                for (int t = 0; t < 10000; ++t) {
                    Vec u = random_unit(qrng, d);
                    double tb = c.poly.ray_shoot(u).t;
                    Vec qc = uf(qrng) * tb * u;
                    Vec q = c.map.apply_inverse(qc);
                    auto v = query(run.idx, q);
                    ++sum.queries;
                    sum.worst_path = std::max(sum.worst_path, v.path_length);
                    if (v.path_length > budget) sum.path_ok = false;
                    bool inside = oracle::exact_membership(p, q, 0.0);
                    if (inside && !v.inside) ++sum.inside_rejected;
                    if (!inside && v.inside) {
                        double dist = oracle::exact_distance_to_boundary(c.poly, qc);
                        if (dist > eps * (1 + 1e-9)) ++sum.outside_accepted;
                    }
                }
                sum.runs.push_back(std::move(run));
            }
        }
    }
    return sum;
}

// Criterion 5: structural audit of every DAG built above (top level and all
// nested sub-indices): exact pairwise region disjointness per level, and
// sampled coverage of each eroded boundary by the level's ellipsoids.
struct DagAudit {
    long dags = 0;
    long lp_pairs = 0;
    long overlaps = 0;
    long coverage_misses = 0;
    long samples = 0;
};

void audit_index(const ApmIndex& idx, Rng& rng, int coverage_samples, DagAudit& a) {
    const HPolytope& body = idx.pruned;
    const int d = body.dim();
    ++a.dags;
    for (std::size_t li = 0; li < idx.dag.levels.size(); ++li) {
        const auto& ids = idx.dag.levels[li];
        const std::size_t m = ids.size();
        // bounding balls: each region sits inside its packing ellipsoid
        std::vector<double> radius(m);
        std::vector<MacbeathRegion> region;
        region.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            const auto& nd = idx.dag.nodes[static_cast<std::size_t>(ids[i])];
            radius[i] = nd.ell_small.max_semi_axis();
            region.push_back(macbeath_region(body, nd.center, idx.lambda0));
        }
        for (std::size_t i = 0; i < m; ++i) {
            const Vec& ci = idx.dag.nodes[static_cast<std::size_t>(ids[i])].center;
            for (std::size_t j = i + 1; j < m; ++j) {
                const Vec& cj = idx.dag.nodes[static_cast<std::size_t>(ids[j])].center;
                if ((ci - cj).norm() > radius[i] + radius[j]) continue;
                ++a.lp_pairs;
                if (regions_intersect(region[i], region[j])) ++a.overlaps;
            }
        }
        // coverage of the eroded boundary at this level
        auto pd = body.erode(idx.dag.deltas[li]);
        for (int s = 0; s < coverage_samples; ++s) {
            Vec u = random_unit(rng, d);
            Vec y = pd.ray_shoot(u).t * u;
            bool covered = false;
            for (std::size_t i = 0; i < m && !covered; ++i)
                covered = idx.dag.nodes[static_cast<std::size_t>(ids[i])].ell.contains(
                    y, 1e-9);
            ++a.samples;
            if (!covered) ++a.coverage_misses;
        }
    }
    for (const auto& sub : idx.subs) audit_index(sub, rng, coverage_samples, a);
}

// ---------------------------------------------------------------------------
// Criteria 6 + 7 (+ output capture for 10)
// ---------------------------------------------------------------------------

struct DiameterSummary {
    std::string output;
    bool ratio_ok = true;
    bool in_budget = true;
    double worst_time = 0;
    double worst_ratio = 1.0;
};

DiameterSummary run_criterion6() {
    DiameterSummary sum;
    std::ostringstream out;
    const int d = 3, n = 10000;
    for (double eps : {0.1, 0.05}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            auto s = ball_cloud(d, n, 3000 + seed);
            double t0 = now_s();
            auto r = diameter(s, eps);
            double el = now_s() - t0;
            auto exact = oracle::exact_diameter(s);
            double ratio = r.dist / exact.dist;
            out << "eps=" << hex(eps) << " seed=" << seed << " pair=" << r.i << ","
                << r.j << " dist=" << hex(r.dist) << "\n";
            if (ratio < 1 - eps - 1e-12 || ratio > 1 + 1e-12) sum.ratio_ok = false;
            if (ratio < sum.worst_ratio) sum.worst_ratio = ratio;
            sum.worst_time = std::max(sum.worst_time, el);
            if (el >= 30.0) sum.in_budget = false;
        }
    }
    sum.output = out.str();
    return sum;
}

struct BcpSummary {
    std::string output;
    bool ratio_ok = true;
    bool estimate_ok = true;
    double worst_ratio = 1.0;
};

BcpSummary run_criterion7() {
    BcpSummary sum;
    std::ostringstream out;
    const int n = 10000;
    const double eps = 0.1;
    for (int d = 2; d <= 3; ++d) {
        auto red = ball_cloud(d, n, 4000 + static_cast<std::uint64_t>(d));
        auto blue = ball_cloud(d, n, 4100 + static_cast<std::uint64_t>(d));
        auto exact = oracle::exact_bcp(red, blue);
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            auto r = bcp(red, blue, eps, seed);
            double ratio = r.dist / exact.dist;
            double est = r.estimate / exact.dist;
            out << "d=" << d << " seed=" << seed << " pair=" << r.i << "," << r.j
                << " dist=" << hex(r.dist) << " est=" << hex(r.estimate) << "\n";
            if (ratio < 1 - 1e-12 || ratio > 1 + eps + 1e-12) sum.ratio_ok = false;
            if (est < 1 - 1e-12 || est >= 2) sum.estimate_ok = false;
            if (ratio > sum.worst_ratio) sum.worst_ratio = ratio;
        }
    }
    sum.output = out.str();
    return sum;
}

// ---------------------------------------------------------------------------
// Criterion 8
// ---------------------------------------------------------------------------

void run_criterion8() {
    const int d = 3;
    Rng rng(8800);
    std::uniform_real_distribution<double> u(-1, 1);
    Mat skew(3, 3);
    skew << 1.8, 0.5, 0.0, 0.0, 1.0, 0.3, 0.1, 0.0, 0.45;
    std::vector<Vec> pts;
    for (int i = 0; i < 2000; ++i) {
        Vec v(d);
        for (int j = 0; j < d; ++j) v[j] = u(rng);
        pts.push_back(skew * v);
    }
    PointSet s(std::move(pts), d);

    long bad = 0, asym = 0;
    double worst = 0;
    for (double eps : {0.1, 0.05}) {
        auto idx = width_build(s, eps);
        Rng drng(8900);
        for (int t = 0; t < 1000; ++t) {
            Vec v = random_unit(drng, d);
            double approx = width_query(idx, v);
            double exact = oracle::exact_width(s, v);
            double rel = std::fabs(approx - exact) / exact;
            worst = std::max(worst, rel / eps);
            if (rel > eps) ++bad;
            if (width_query(idx, (-v).eval()) != approx) ++asym;
        }
    }
    std::ostringstream det;
    det << "2000 queries, rel-err violations=" << bad << ", symmetry breaks=" << asym
        << ", worst err/eps=" << worst;
    report(8, bad == 0 && asym == 0, det.str());
}

// ---------------------------------------------------------------------------
// Criterion 9: randomized Macbeath lemma suite over 200 bodies
// ---------------------------------------------------------------------------

void run_criterion9() {
    Rng rng(9900);
    const int samples = 1000;
    long defn_bad = 0, expand_bad = 0, cap_bad = 0, depth_bad = 0;
    long shadow_enclose_bad = 0, shadow_width_bad = 0;
    int expansion_hits = 0, cap_hits = 0;

    for (int body_i = 0; body_i < 200; ++body_i) {
        int d = 2 + body_i % 3;
        auto cp = canonicalize_hpoly(random_polytope(
            d, 15 + body_i % 11, 9000 + static_cast<std::uint64_t>(body_i)));
        const auto& p = cp.poly;
        double gamma = cp.gamma;
        double delta0 = 3 * gamma * gamma / 16;
        double c1 = 8 / (3 * gamma);

        // reflection definition: M(x) = K ∩ (2x − K)
        Vec x = 0.3 * gamma * random_unit(rng, d);
        auto r1 = macbeath_region(p, x, 1.0);
        for (int s = 0; s < samples; ++s) {
            Vec y = sample_region_point(r1, rng);
            if (!p.contains(y, 1e-9) || !p.contains((2 * x - y).eval(), 1e-9))
                ++defn_bad;
        }

        // expansion: intersecting shrunken regions, 4x containment
        {
            std::uniform_real_distribution<double> uni(0, 0.4);
            Vec xa = uni(rng) * gamma * random_unit(rng, d);
            Vec xb = xa + 0.1 * gamma * random_unit(rng, d);
            if (p.contains(xb) && p.boundary_distance(xb) > 1e-6) {
                auto ra = macbeath_region(p, xa, 0.2);
                auto rb = macbeath_region(p, xb, 0.2);
                if (regions_intersect(ra, rb)) {
                    ++expansion_hits;
                    auto ra4 = ra.rescaled(0.8);
                    for (int s = 0; s < samples; ++s)
                        if (!ra4.contains(sample_region_point(rb, rng), 1e-9))
                            ++expand_bad;
                }
            }
        }

        // cap containment: a shrunken region meeting a cap sits in 2x the cap
        {
            Vec a = random_unit(rng, d);
            double hmax = lp_support(p.as_constraints(), a);
            std::uniform_real_distribution<double> uw(0.02, 0.25), ur(0.02, 0.3);
            double width = uw(rng) * hmax;
            Vec u2 = (a + 0.3 * random_unit(rng, d)).normalized();
            double t = p.ray_shoot(u2).t;
            Vec xc = (1.0 - ur(rng)) * t * u2;
            if (p.boundary_distance(xc) > 1e-6) {
                auto m = macbeath_region(p, xc, 0.2);
                auto cons = m.as_constraints();
                cons.push_back({-a, -(hmax - width)});
                if (interior_margin(cons, d) >= 0) {
                    ++cap_hits;
                    for (int s = 0; s < samples; ++s)
                        if (a.dot(sample_region_point(m, rng)) <
                            hmax - 2 * width - 1e-9)
                            ++cap_bad;
                }
            }
        }

        // depth stability inside the shrunken region
        {
            std::uniform_real_distribution<double> ud(0.001, 0.1);
            auto pd = p.erode(ud(rng));
            Vec xe = pd.ray_shoot(random_unit(rng, d)).t * random_unit(rng, d);
            xe = pd.ray_shoot(xe.normalized()).t * xe.normalized();
            double dx = p.boundary_distance(xe);
            if (dx > 1e-9) {
                auto m = macbeath_region(p, xe, 0.2);
                for (int s = 0; s < samples; ++s) {
                    double dxp = p.boundary_distance(sample_region_point(m, rng));
                    if (dxp < 4 * dx / 5 - 1e-9 || dxp > 4 * dx / 3 + 1e-9) ++depth_bad;
                }
            }
        }

        // shadows: enclosed in the 4/gamma region and thin along the support
        {
            std::uniform_real_distribution<double> ud(0.2, 1.0);
            double delta = ud(rng) * delta0;
            auto pd = p.erode(delta);
            Vec us = random_unit(rng, d);
            Vec xs = pd.ray_shoot(us).t * us;
            auto m = macbeath_region(p, xs, 0.2);
            auto mhat = macbeath_region(p, xs, 4.0 / gamma);
            Vec v = p.faces()[static_cast<std::size_t>(p.ray_shoot(us).face)].normal;
            double lo = 1e18, hi = -1e18;
            for (int s = 0; s < samples; ++s) {
                Vec y = sample_shadow_point(p, m, rng);
                if (!mhat.contains(y, 1e-9)) ++shadow_enclose_bad;
                lo = std::min(lo, v.dot(y));
                hi = std::max(hi, v.dot(y));
            }
            if (hi - lo > c1 * delta * (1 + 1e-6)) ++shadow_width_bad;
        }
    }

    std::ostringstream det;
    det << "200 bodies x 1000 samples per lemma; violations: definition=" << defn_bad
        << " expansion=" << expand_bad << "/" << expansion_hits
        << " cap=" << cap_bad << "/" << cap_hits << " depth=" << depth_bad
        << " shadow=" << shadow_enclose_bad << "," << shadow_width_bad;
    report(9, defn_bad + expand_bad + cap_bad + depth_bad + shadow_enclose_bad +
                      shadow_width_bad ==
                  0 && expansion_hits >= 5 && cap_hits >= 10,
           det.str());
}

}  // namespace

int main() {
    // 1 & 2 -----------------------------------------------------------------
    auto k1 = run_criterion1();
    {
        std::ostringstream det;
        det << "violations=" << k1.violations << ", worst config "
            << static_cast<int>(k1.worst_time) << "s";
        report(1, k1.correct && k1.in_budget, det.str());
    }
    {
        double slope = fit_slope(k1.d3_eps, k1.d3_sizes);
        std::ostringstream det;
        det << "d=3 sizes";
        for (auto s : k1.d3_sizes) det << " " << s;
        det << ", slope=" << slope;
        report(2, slope >= 0.7 && slope <= 1.3, det.str());
    }

    // 3, 4, 5 ---------------------------------------------------------------
    auto a34 = run_criteria34();
    {
        std::ostringstream det;
        det << a34.queries << " queries, inside rejected=" << a34.inside_rejected
            << ", outside(>eps) accepted=" << a34.outside_accepted;
        report(3, a34.inside_rejected == 0 && a34.outside_accepted == 0, det.str());
    }
    {
        std::ostringstream det;
        det << "worst path=" << a34.worst_path;
        report(4, a34.path_ok, det.str());
    }
    {
        DagAudit audit;
        Rng arng(5500);
        for (const auto& run : a34.runs) audit_index(run.idx, arng, 1000, audit);
        std::ostringstream det;
        det << audit.dags << " dags, lp pairs=" << audit.lp_pairs
            << ", overlaps=" << audit.overlaps << ", boundary samples="
            << audit.samples << ", misses=" << audit.coverage_misses;
        report(5, audit.overlaps == 0 && audit.coverage_misses == 0, det.str());
    }
    a34.runs.clear();

    // 6, 7 ------------------------------------------------------------------
    auto d6 = run_criterion6();
    {
        std::ostringstream det;
        det << "worst ratio=" << d6.worst_ratio << ", worst time "
            << static_cast<int>(d6.worst_time) << "s";
        report(6, d6.ratio_ok && d6.in_budget, det.str());
    }
    auto b7 = run_criterion7();
    {
        std::ostringstream det;
        det << "worst ratio=" << b7.worst_ratio;
        report(7, b7.ratio_ok && b7.estimate_ok, det.str());
    }

    // 8, 9 ------------------------------------------------------------------
    run_criterion8();
    run_criterion9();

    // 10: full reruns of 1, 6, 7 must reproduce byte-identical outputs ------
    {
        bool same1 = run_criterion1().output == k1.output;
        bool same6 = run_criterion6().output == d6.output;
        bool same7 = run_criterion7().output == b7.output;
        std::ostringstream det;
        det << "rerun identical: kernel=" << (same1 ? "yes" : "no")
            << " diameter=" << (same6 ? "yes" : "no")
            << " bcp=" << (same7 ? "yes" : "no");
        report(10, same1 && same6 && same7, det.str());
    }

    return g_failures;
}
