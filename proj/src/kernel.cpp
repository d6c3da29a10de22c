#include "geomk/kernel.hpp"

#include "geomk/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <unordered_map>

namespace geomk {

namespace {

// Direction-net densities. kBaseNetC tunes the sphere net of the base
// construction (angular resolution ~ sqrt(eps)/kBaseNetC); kHullNetC tunes
// the supporting-halfspace net of hull_to_hrep. Both are validated by the
// width/Hausdorff oracles in the test suite.
constexpr double kBaseNetC = 12.0;
constexpr double kHullNetC = 10.0;
constexpr int kNetCap = 200000;

int net_count(double c, double eps, int d, int lo) {
    double raw = std::ceil(std::pow(c / std::sqrt(eps), d - 1));
    return std::max(lo, static_cast<int>(std::min(raw, double(kNetCap))));
}

// Nearest input point to each probe, by blocks of matrix products.
std::vector<int> nearest_points(const std::vector<Vec>& pts, const std::vector<Vec>& probes) {
    const int d = static_cast<int>(pts[0].size());
    const int n = static_cast<int>(pts.size());
    Mat P(d, n);
    for (int j = 0; j < n; ++j) P.col(j) = pts[j];
    Vec norms(n);
    for (int j = 0; j < n; ++j) norms[j] = P.col(j).squaredNorm();

    std::vector<int> out(probes.size());
    const int block = 256;
    Mat Z(d, block);
    for (std::size_t start = 0; start < probes.size(); start += block) {
        int b = static_cast<int>(std::min(probes.size() - start, std::size_t(block)));
        for (int k = 0; k < b; ++k) Z.col(k) = probes[start + k];
        Mat dots = P.transpose() * Z.leftCols(b);  // n x b
        for (int k = 0; k < b; ++k) {
            int best = 0;
            double bestval = norms[0] - 2.0 * dots(0, k);
            for (int j = 1; j < n; ++j) {
                double v = norms[j] - 2.0 * dots(j, k);
                if (v < bestval) {
                    bestval = v;
                    best = j;
                }
            }
            out[start + k] = best;
        }
    }
    return out;
}

using CellKey = std::array<std::int64_t, kMaxDim>;

CellKey cell_of(const Vec& x, double side) {
    CellKey key{};
    for (int i = 0; i < x.size(); ++i)
        key[static_cast<std::size_t>(i)] =
            static_cast<std::int64_t>(std::floor(x[i] / side));
    return key;
}

double support_of(const std::vector<Vec>& pts, const Vec& u) {
    double h = u.dot(pts[0]);
    for (std::size_t j = 1; j < pts.size(); ++j) h = std::max(h, u.dot(pts[j]));
    return h;
}

}  // namespace

KernelResult base_kernel(const PointSet& s, double eps) {
    check_dim(s.dim);
    require(s.size() > 0, "base_kernel: empty point set");
    require(eps > 0 && eps < 1, "base_kernel: eps must be in (0,1)");
    const int d = s.dim;

    // one representative (first seen) per grid cell of diameter eps/4
    const double side = eps / (4.0 * std::sqrt(double(d)));
    std::map<CellKey, int> cells;
    std::vector<int> reps;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (cells.emplace(cell_of(s[i], side), static_cast<int>(i)).second)
            reps.push_back(static_cast<int>(i));

    // deterministic sphere net at radius 2
    const int m = net_count(kBaseNetC, eps, d, 64);
    auto dirs = direction_net(d, m);
    std::vector<Vec> probes;
    probes.reserve(dirs.size());
    for (auto& u : dirs) probes.push_back(2.0 * u);

    std::vector<Vec> reppts;
    reppts.reserve(reps.size());
    for (int i : reps) reppts.push_back(s[i]);
    auto nearest = nearest_points(reppts, probes);

    std::vector<char> picked(reps.size(), 0);
    for (int j : nearest) picked[static_cast<std::size_t>(j)] = 1;

    KernelResult out;
    out.eps = eps;
    out.stats.input_size = s.size();
    for (std::size_t j = 0; j < reps.size(); ++j)
        if (picked[j]) out.subset.push_back(reps[j]);
    std::sort(out.subset.begin(), out.subset.end());
    return out;
}

HPolytope hull_to_hrep(const PointSet& s, double delta) {
    check_dim(s.dim);
    require(delta > 0 && delta < 1, "hull_to_hrep: delta must be in (0,1)");
    const int d = s.dim;

    auto kr = base_kernel(s, std::min(0.45, delta / 2));
    std::vector<Vec> hullpts;
    hullpts.reserve(kr.subset.size());
    for (int i : kr.subset) hullpts.push_back(s[i]);

    int mnet = net_count(kHullNetC, delta, d, 256);
    double epsd = std::min(0.45, delta / 2);
    std::string last_err = "accuracy not reached";
    for (int attempt = 0; attempt < 3; ++attempt) {
        // supporting halfspaces over a dense direction net
        auto dirs = direction_net(d, mnet);
        std::vector<double> height(dirs.size());
        std::vector<Vec> dual(dirs.size());
        double dualmax = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            height[i] = support_of(hullpts, dirs[i]);
            if (height[i] < 1e-9) {
                ok = false;
                break;
            }
            dual[i] = dirs[i] / height[i];
            dualmax = std::max(dualmax, dual[i].norm());
        }
        require(ok, "hull_to_hrep: hull does not contain the origin (input not canonical)");

        // keep the faces whose dual points survive a dual-side kernel
        double sf = 0.5 / dualmax;
        std::vector<Vec> scaled;
        scaled.reserve(dual.size());
        for (auto& y : dual) scaled.push_back(sf * y);
        auto dk = base_kernel(PointSet(std::move(scaled), d), epsd);

        std::vector<Halfspace> faces;
        faces.reserve(dk.subset.size());
        for (int i : dk.subset) faces.emplace_back(dirs[i], height[i]);

        try {
            HPolytope outer(std::move(faces), d, true);

            // certify the overshoot on a disjoint verification net
            int mv = static_cast<int>(std::max<std::size_t>(2000, 4 * outer.size()));
            auto vdirs = direction_net(d, mv, mnet);
            auto cons = outer.as_constraints();
            double e = 0.0;
            for (const auto& v : vdirs)
                e = std::max(e, lp_support(cons, v, 4.0) - support_of(hullpts, v));
            log_info("hull_to_hrep attempt " + std::to_string(attempt) + ": net " +
                     std::to_string(mnet) + ", faces " + std::to_string(outer.size()) +
                     ", overshoot " + std::to_string(e) + " (budget " +
                     std::to_string(delta / 4) + ")");
            if (e <= delta / 4) {
                double t_in = 1.25 * std::max(e, 0.0) + delta / 8;
                HPolytope inner = outer.erode(t_in);
                require(inner.contains_origin(),
                        "hull_to_hrep: body too thin for the requested delta");
                return inner;
            }
            last_err = "overshoot " + std::to_string(e) + " above budget";
        } catch (const GeomError& ge) {
            last_err = ge.what();
        }
        mnet = std::min(3 * mnet, 2 * kNetCap);
        epsd = std::max(epsd / 2, 1e-3);
    }
    throw GeomError(std::string("hull_to_hrep: could not certify an inner "
                                "approximation: ") + last_err);
}

HPolytope prune_hrep(const HPolytope& p, double eps) {
    check_dim(p.dim());
    require(eps > 0 && eps < 1, "prune_hrep: eps must be in (0,1)");
    require(p.contains_origin(), "prune_hrep: body must contain the origin");

    std::vector<Vec> dual;
    dual.reserve(p.size());
    double dualmax = 0.0;
    for (const auto& h : p.faces()) {
        require(h.offset > 1e-9, "prune_hrep: origin must be interior");
        dual.push_back(h.normal / h.offset);
        dualmax = std::max(dualmax, dual.back().norm());
    }
    const double r0 = 1.0 / dualmax;  // certified inner ball radius

    auto pcons = p.as_constraints();
    double epsd = std::clamp(eps * r0, 1e-4, 0.45);
    for (int attempt = 0; attempt < 3; ++attempt) {
        double sf = 0.5 / dualmax;
        std::vector<Vec> scaled;
        scaled.reserve(dual.size());
        for (auto& y : dual) scaled.push_back(sf * y);
        auto dk = base_kernel(PointSet(std::move(scaled), p.dim()), epsd);

        std::vector<Halfspace> faces;
        faces.reserve(dk.subset.size());
        for (int i : dk.subset) faces.push_back(p.faces()[static_cast<std::size_t>(i)]);
        try {
            HPolytope pruned(std::move(faces), p.dim(), true);
            int mv = static_cast<int>(std::max<std::size_t>(2000, 4 * pruned.size()));
            auto vdirs = direction_net(p.dim(), mv);
            auto cons = pruned.as_constraints();
            double e = 0.0;
            for (const auto& v : vdirs)
                e = std::max(e, lp_support(cons, v) - lp_support(pcons, v));
            if (e <= eps) return pruned;
        } catch (const GeomError&) {
            // unbounded face subset; retry denser
        }
        epsd /= 2;
    }
    log_info("prune_hrep: certification failed, keeping all faces");
    return p;
}

ShadowAssignment assign_to_shadows(const PointSet& s, const Dag& dag) {
    const auto& leaves = dag.levels.back();
    std::unordered_map<int, int> leafpos;
    for (std::size_t j = 0; j < leaves.size(); ++j)
        leafpos[leaves[j]] = static_cast<int>(j);

    ShadowAssignment out;
    out.per_leaf.resize(leaves.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Vec& pnt = s[i];
        double nrm = pnt.norm();
        if (nrm < 1e-9) {
            out.discarded.push_back(static_cast<int>(i));
            continue;
        }
        Dag::DescendResult r;
        try {
            r = dag.descend(pnt / nrm);
        } catch (const InvariantError&) {
            // sampled coverage can leave gaps off the verification nets;
            // keeping the point verbatim is always width-safe
            out.unrouted.push_back(static_cast<int>(i));
            continue;
        }
        const auto& node = dag.nodes[static_cast<std::size_t>(r.leaf)];
        if (in_shadow(node.ell, pnt))
            out.per_leaf[static_cast<std::size_t>(leafpos.at(r.leaf))].push_back(
                static_cast<int>(i));
        else
            out.discarded.push_back(static_cast<int>(i));
    }
    return out;
}

KernelResult build_kernel(const PointSet& s, double eps, const BootstrapConfig& cfg) {
    check_dim(s.dim);
    require(eps > 0 && eps < 1, "build_kernel: eps must be in (0,1)");
    require(s.size() >= static_cast<std::size_t>(s.dim) + 1,
            "build_kernel: need at least d+1 points");
    const int d = s.dim;
    const double epsi = eps / 2;  // internal budget, absorbs tolerance inflation

    KernelResult out;
    out.eps = eps;
    out.stats.input_size = s.size();

    auto c = canonicalize_points(s);

    if (cfg.rounds <= 0 || eps >= cfg.base_eps_floor) {
        auto kr = base_kernel(c.points, epsi);
        out.subset = std::move(kr.subset);
        return out;
    }

    // gamma degrades slightly when the hull is replaced by its eroded
    // halfspace approximation; 0.8 absorbs that with room to spare
    // (the erosion is at most Delta0 <= 0.19 * gamma/2).
    auto k = Constants::for_gamma(0.8 * c.gamma, d, 0.0);
    // coarse Macbeath scale: the shadow decomposition only needs the packing
    // and coverage properties the builder verifies, and the width guarantee
    // itself is enforced per leaf, so the smaller node count is free accuracy-wise
    k.lambda0 = coarse_lambda(d);
    double delta = std::min(std::cbrt(epsi), k.Delta0);
    k.c3 = 1.0 / (4.0 * k.c1);

    auto body = hull_to_hrep(c.points, delta);
    auto dag = build_dag(body, delta, k);
    auto asn = assign_to_shadows(c.points, dag);

    const double eps_leaf = std::clamp(k.c3 * epsi / delta, 1e-6, 0.9);
    BootstrapConfig subcfg = cfg;
    subcfg.rounds = cfg.rounds - 1;

    std::vector<std::vector<int>> picked(asn.per_leaf.size());
    std::vector<KernelStats> substats(asn.per_leaf.size());
    parallel_for(asn.per_leaf.size(), 0, [&](std::size_t g) {
        const auto& group = asn.per_leaf[g];
        if (group.empty()) return;
        if (group.size() <= static_cast<std::size_t>(d) + 1) {
            picked[g] = group;
            return;
        }
        std::vector<Vec> pts;
        pts.reserve(group.size());
        for (int i : group) pts.push_back(c.points[static_cast<std::size_t>(i)]);
        try {
            auto sub = build_kernel(PointSet(std::move(pts), d), eps_leaf, subcfg);
            picked[g].reserve(sub.subset.size());
            for (int j : sub.subset) picked[g].push_back(group[static_cast<std::size_t>(j)]);
            substats[g] = std::move(sub.stats);
        } catch (const GeomError&) {
            // flat or tiny shadow group: keep everything
            picked[g] = group;
        }
    });

    for (auto& grp : picked)
        out.subset.insert(out.subset.end(), grp.begin(), grp.end());
    out.subset.insert(out.subset.end(), asn.unrouted.begin(), asn.unrouted.end());
    std::sort(out.subset.begin(), out.subset.end());
    if (out.subset.empty()) {
        // every point was discarded (degenerate coverage); fall back to base
        auto kr = base_kernel(c.points, epsi);
        out.subset = std::move(kr.subset);
        return out;
    }

    out.stats.discarded = asn.discarded.size();
    for (const auto& grp : asn.per_leaf)
        if (!grp.empty()) ++out.stats.leaves;
    out.stats.delta_schedule.push_back(delta);
    int sub_rounds = 0;
    for (const auto& st : substats) {
        if (st.delta_schedule.size() > out.stats.delta_schedule.size() - 1) {
            out.stats.delta_schedule.resize(1);
            out.stats.delta_schedule.insert(out.stats.delta_schedule.end(),
                                            st.delta_schedule.begin(),
                                            st.delta_schedule.end());
        }
        sub_rounds = std::max(sub_rounds, st.rounds_used);
    }
    out.stats.rounds_used = 1 + sub_rounds;
    return out;
}

}  // namespace geomk
