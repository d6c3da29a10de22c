#include "geomk/extent.hpp"

#include "geomk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace geomk {

// ---------------------------------------------------------------------------
// Diameter
// ---------------------------------------------------------------------------

DiameterResult diameter(const PointSet& s, double eps) {
    require(s.size() >= 2, "diameter: need at least 2 points");
    require(eps > 0 && eps < 1, "diameter: eps must be in (0,1)");
    const int d = s.dim;

    std::vector<int> subset;
    if (s.size() <= static_cast<std::size_t>(d) + 1) {
        subset.resize(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) subset[i] = static_cast<int>(i);
    } else {
        try {
            subset = build_kernel(s, eps / 3.0).subset;
        } catch (const GeomError&) {
            // flat input (a lower-dimensional hull): every direction net
            // extreme pair is computed over the full set, which stays exact
            subset.resize(s.size());
            for (std::size_t i = 0; i < s.size(); ++i) subset[i] = static_cast<int>(i);
        }
    }

    // Net fine enough that the nearest direction to the diametral one costs
    // at most a (1 - eps/3) factor through the cos(theta) loss.
    int m = static_cast<int>(std::ceil(24.0 / std::pow(eps, 0.5 * (d - 1))));
    m = std::clamp(m, 64, 200000);
    auto net = direction_net(d, m);

    DiameterResult best;
    for (const auto& u : net) {
        int imax = subset[0], imin = subset[0];
        double hmax = u.dot(s[static_cast<std::size_t>(subset[0])]);
        double hmin = hmax;
        for (int id : subset) {
            double h = u.dot(s[static_cast<std::size_t>(id)]);
            if (h > hmax) {
                hmax = h;
                imax = id;
            }
            if (h < hmin) {
                hmin = h;
                imin = id;
            }
        }
        double dist =
            (s[static_cast<std::size_t>(imax)] - s[static_cast<std::size_t>(imin)]).norm();
        if (dist > best.dist) {
            best.dist = dist;
            best.i = imax;
            best.j = imin;
        }
    }
    log_info("diameter: eps=" + std::to_string(eps) + ", kernel " +
             std::to_string(subset.size()) + " points, " + std::to_string(m) + " directions");
    return best;
}

// ---------------------------------------------------------------------------
// Directional width
// ---------------------------------------------------------------------------

WidthIndex width_build(const PointSet& s, double eps) {
    require(eps > 0 && eps < 1, "width_build: eps must be in (0,1)");
    auto c = canonicalize_points(s);
    WidthIndex idx;
    idx.map = c.map;
    idx.gamma = c.gamma;
    idx.eps = eps;
    idx.polar_scale = c.gamma / 4.0;
    idx.center = Vec::Zero(s.dim);

    // Kernel subset of the canonical cloud; its polar is the dualized kernel.
    // The width budget splits between this subset and the polar pruning.
    double eps_base = std::clamp(eps * c.gamma / 16.0, 1e-4, 0.4);
    auto base = base_kernel(c.points, eps_base);
    std::vector<Halfspace> faces;
    faces.reserve(base.subset.size());
    for (int id : base.subset)
        faces.emplace_back(c.points[static_cast<std::size_t>(id)], idx.polar_scale);
    HPolytope ph(std::move(faces), s.dim, false);
    // The scaled polar sits between the balls gamma/2 and 1/2, so pruning
    // applies directly; its keep-all fallback is always safe here.
    idx.polar = prune_hrep(ph, std::clamp(eps * c.gamma * c.gamma / 16.0, 1e-4, 0.4));
    idx.apm = build_apm(idx.polar, std::max(eps, 0.15), 0);
    log_info("width_build: polar " + std::to_string(idx.polar.size()) + " faces");
    return idx;
}

namespace {

// polar_scale / (exit length of the ray u), i.e. the canonical support of
// the kernel subset in direction u. Bracketed with membership queries first
// (a structural cross-check), then resolved exactly on the pruned face list.
double half_support(const WidthIndex& idx, const Vec& u) {
    double band = idx.apm.eps;
    double lo = 0.9 * idx.gamma / 2.0;
    double hi = 0.55;
    for (int it = 0; it < 40 && hi - lo > band; ++it) {
        double mid = 0.5 * (lo + hi);
        if (query(idx.apm, mid * u).inside)
            lo = mid;
        else
            hi = mid;
    }
    double t = idx.polar.ray_shoot(u).t;
    double slack = 3.0 * band / idx.gamma + 1e-9;
    if (t < lo - slack || t > hi + slack)
        throw InvariantError("width_query: membership bracket disagrees with the exact ray");
    return idx.polar_scale / t;
}

}  // namespace

double width_query(const WidthIndex& idx, const Vec& v) {
    require(v.size() == idx.polar.dim(), "width_query: direction has the wrong dimension");
    double vn = v.norm();
    require(vn > 0, "width_query: zero direction");
    Vec w = idx.map.covector(v / vn);
    double wn = w.norm();
    Vec u = w / wn;
    return wn * (half_support(idx, u) + half_support(idx, -u));
}

// ---------------------------------------------------------------------------
// Well-separated approximate nearest neighbor
// ---------------------------------------------------------------------------

WsannIndex wsann_build(const PointSet& s, double sigma, double eps) {
    require(s.size() >= 1, "wsann_build: empty point set");
    require(sigma > 0, "wsann_build: sigma must be positive");
    require(eps > 0 && eps < 1, "wsann_build: eps must be in (0,1)");
    const int d = s.dim;
    WsannIndex idx;
    idx.pts = s;
    idx.sigma = sigma;
    idx.eps = eps;
    idx.box_lo = s[0];
    idx.box_hi = s[0];
    for (const auto& p : s.pts) {
        idx.box_lo = idx.box_lo.cwiseMin(p);
        idx.box_hi = idx.box_hi.cwiseMax(p);
    }
    idx.r = (idx.box_hi - idx.box_lo).maxCoeff();

    auto keep_all = [&] {
        idx.subset.resize(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) idx.subset[i] = static_cast<int>(i);
    };
    if (s.size() <= 4 * static_cast<std::size_t>(d + 2) || idx.r <= 0 || d + 1 > kMaxDim) {
        keep_all();  // brute scan is already exact at these sizes
        return idx;
    }

    // Paraboloid lift of the normalized points: the nearest neighbor of q
    // minimizes |q|^2 + (-2q, 1) . (p, |p|^2), a linear function of the lift,
    // so a width-preserving subset of the lift preserves the minimum up to
    // eps2 times the lifted width. The separation sigma lower-bounds the
    // distance scale, which turns that into a relative 1 + eps guarantee.
    Vec ctr = 0.5 * (idx.box_lo + idx.box_hi);
    std::vector<Vec> lifted;
    lifted.reserve(s.size());
    for (const auto& p : s.pts) {
        Vec x = (p - ctr) / idx.r;
        Vec y(d + 1);
        y.head(d) = x;
        y[d] = x.squaredNorm();
        lifted.push_back(std::move(y));
    }
    double eps2 = eps * sigma * sigma /
                  ((2.0 * sigma + 2.0 * std::sqrt(d) + 1.0) * (0.5 * d + 1.0));
    eps2 = std::clamp(eps2, 1e-4, 0.4);
    try {
        auto c = canonicalize_points(PointSet(std::move(lifted), d + 1));
        idx.subset = base_kernel(c.points, eps2).subset;
    } catch (const GeomError&) {
        keep_all();  // degenerate lift (e.g. collinear input)
        return idx;
    }
    log_info("wsann_build: kept " + std::to_string(idx.subset.size()) + " of " +
             std::to_string(s.size()) + " points");
    return idx;
}

int wsann_query(const WsannIndex& idx, const Vec& q) {
    require(q.size() == idx.pts.dim, "wsann_query: query has the wrong dimension");
    double box_dist2 = 0.0;
    for (int j = 0; j < idx.pts.dim; ++j) {
        double gap = std::max({idx.box_lo[j] - q[j], q[j] - idx.box_hi[j], 0.0});
        box_dist2 += gap * gap;
    }
    require(std::sqrt(box_dist2) >= idx.sigma * idx.r * (1.0 - 1e-9),
            "wsann_query: query violates the separation contract");
    int best = idx.subset[0];
    double bd = (q - idx.pts[static_cast<std::size_t>(best)]).squaredNorm();
    for (int id : idx.subset) {
        double dd = (q - idx.pts[static_cast<std::size_t>(id)]).squaredNorm();
        if (dd < bd) {
            bd = dd;
            best = id;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Bichromatic closest pair
// ---------------------------------------------------------------------------

namespace {

struct CellKey {
    std::array<long, kMaxDim> c{};
};

std::size_t cell_hash(const std::array<long, kMaxDim>& c, int d) {
    std::size_t h = 1469598103934665603ull;
    for (int j = 0; j < d; ++j) {
        h ^= static_cast<std::size_t>(c[static_cast<std::size_t>(j)]) + 0x9e3779b97f4a7c15ull;
        h *= 1099511628211ull;
    }
    return h;
}

class PointGrid {
public:
    PointGrid(const PointSet& pts, double cell, const Vec& shift)
        : pts_(&pts), cell_(cell), shift_(shift) {
        for (std::size_t i = 0; i < pts.size(); ++i)
            cells_[key(pts[i])].push_back(static_cast<int>(i));
    }

    std::array<long, kMaxDim> coords(const Vec& x) const {
        std::array<long, kMaxDim> c{};
        for (int j = 0; j < pts_->dim; ++j)
            c[static_cast<std::size_t>(j)] =
                static_cast<long>(std::floor((x[j] - shift_[j]) / cell_));
        return c;
    }

    const std::vector<int>* bucket(const std::array<long, kMaxDim>& c) const {
        auto it = cells_.find(cell_hash(c, pts_->dim));
        return it == cells_.end() ? nullptr : &it->second;
    }

    // Visit every point in the 3^d ring around x; visitor returns true to stop.
    template <typename F>
    bool ring(const Vec& x, F&& visit) const {
        const int d = pts_->dim;
        auto base = coords(x);
        std::array<long, kMaxDim> cur{};
        return ring_walk(0, d, base, cur, visit);
    }

    const auto& cells() const { return cells_; }
    double cell() const { return cell_; }
    const Vec& shift() const { return shift_; }

private:
    std::size_t key(const Vec& x) const { return cell_hash(coords(x), pts_->dim); }

    template <typename F>
    bool ring_walk(int j, int d, const std::array<long, kMaxDim>& base,
                   std::array<long, kMaxDim>& cur, F&& visit) const {
        if (j == d) {
            if (const auto* b = bucket(cur))
                for (int id : *b)
                    if (visit(id)) return true;
            return false;
        }
        for (long off = -1; off <= 1; ++off) {
            cur[static_cast<std::size_t>(j)] = base[static_cast<std::size_t>(j)] + off;
            if (ring_walk(j + 1, d, base, cur, visit)) return true;
        }
        return false;
    }

    const PointSet* pts_;
    double cell_;
    Vec shift_;
    std::unordered_map<std::size_t, std::vector<int>> cells_;
};

}  // namespace

BcpResult bcp(const PointSet& red, const PointSet& blue, double eps, std::uint64_t seed) {
    require(red.size() >= 1 && blue.size() >= 1, "bcp: both sets must be nonempty");
    require(red.dim == blue.dim, "bcp: dimension mismatch");
    require(eps > 0 && eps < 1, "bcp: eps must be in (0,1)");
    const int d = red.dim;
    Rng rng(seed);

    Vec lo = red[0], hi = red[0];
    for (const auto& p : red.pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    for (const auto& p : blue.pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    double diam0 = (hi - lo).norm();

    std::uniform_real_distribution<double> ush(0.0, 1.0);
    auto shifted_grid = [&](double cell) {
        Vec shift(d);
        for (int j = 0; j < d; ++j) shift[j] = cell * ush(rng);
        return PointGrid(red, cell, shift);
    };

    // Pass over the blues that keeps, per blue, the nearest red within the
    // 3^d ring; first_only stops at the first red seen instead.
    auto scan = [&](const PointGrid& g, bool first_only) {
        BcpResult r;
        r.dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < blue.size(); ++j) {
            g.ring(blue[j], [&](int i) {
                double dist = (red[static_cast<std::size_t>(i)] - blue[j]).norm();
                if (dist < r.dist) {
                    r.dist = dist;
                    r.i = i;
                    r.j = static_cast<int>(j);
                }
                return first_only;
            });
        }
        return r;
    };

    if (diam0 <= 0.0) {  // all points coincide
        BcpResult r;
        r.i = 0;
        r.j = 0;
        r.dist = 0.0;
        r.estimate = 0.0;
        return r;
    }

    // Stage 1: doubling sieve. Halve the randomly shifted grid until no blue
    // sees a red in its ring (so bcp > cell); the last hit bounds bcp from
    // above, and a ring pass at that size captures the true pair exactly,
    // because any pair within one cell length of a blue lies in its ring.
    double cell = 1.001 * diam0;
    BcpResult last_hit;
    last_hit.dist = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 120; ++it) {
        auto g = shifted_grid(cell);
        BcpResult r = scan(g, true);
        if (r.i < 0) break;  // empty ring everywhere: bcp > cell
        last_hit = r;
        if (r.dist == 0.0) {
            r.estimate = 0.0;
            return r;
        }
        cell *= 0.5;
    }
    auto gcap = shifted_grid(last_hit.dist * 1.001);
    BcpResult exact1 = scan(gcap, false);
    double a = exact1.dist;
    log_info("bcp: sieve estimate a=" + std::to_string(a));

    // Stage 2: partition the reds at cell diameter a/4.
    double part_cell = a / (4.0 * std::sqrt(static_cast<double>(d)));
    Vec pshift(d);
    for (int j = 0; j < d; ++j) pshift[j] = part_cell * ush(rng);
    PointGrid part(red, part_cell, pshift);
    double heavy_threshold = std::pow(1.0 / eps, 0.25 * d);

    // Stage 3: nearest-neighbor indices for the heavy cells, ties light.
    std::unordered_map<std::size_t, WsannIndex> heavy;
    for (const auto& [key, ids] : part.cells()) {
        if (static_cast<double>(ids.size()) <= heavy_threshold) continue;
        std::vector<Vec> cell_pts;
        cell_pts.reserve(ids.size());
        for (int id : ids) cell_pts.push_back(red[static_cast<std::size_t>(id)]);
        heavy.emplace(key, wsann_build(PointSet(std::move(cell_pts), d), 1.0, eps));
    }

    // Stage 4: per blue, inspect the cells meeting the annulus of radii
    // a/2 .. a; their count is a constant depending only on d.
    BcpResult best = exact1;
    best.estimate = a;
    const long span = static_cast<long>(std::ceil(a / part_cell)) + 1;
    const std::size_t width = static_cast<std::size_t>(2 * span + 1);
    // per-axis squared near/far distances from q to each candidate cell slab
    std::vector<double> g2(static_cast<std::size_t>(d) * width);
    std::vector<double> f2(static_cast<std::size_t>(d) * width);
    std::array<long, kMaxDim> cur{};
    for (std::size_t j = 0; j < blue.size(); ++j) {
        const Vec& q = blue[j];
        auto base = part.coords(q);
        for (int t = 0; t < d; ++t) {
            for (long off = -span; off <= span; ++off) {
                double clo = pshift[t] + part_cell * static_cast<double>(
                                             base[static_cast<std::size_t>(t)] + off);
                double chi = clo + part_cell;
                double gap = std::max({clo - q[t], q[t] - chi, 0.0});
                double far = std::max(std::abs(q[t] - clo), std::abs(q[t] - chi));
                std::size_t slot = static_cast<std::size_t>(t) * width +
                                   static_cast<std::size_t>(off + span);
                g2[slot] = gap * gap;
                f2[slot] = far * far;
            }
        }
        auto visit_cells = [&](auto&& self, int axis, double near2, double far2) -> void {
            if (near2 > a * a) return;  // subtree entirely beyond the annulus
            if (axis == d) {
                if (far2 < 0.25 * a * a) return;  // entirely inside radius a/2
                const auto* ids = part.bucket(cur);
                if (!ids) return;
                if (static_cast<double>(ids->size()) <= heavy_threshold) {
                    for (int id : *ids) {
                        double dist = (red[static_cast<std::size_t>(id)] - q).norm();
                        if (dist < best.dist) {
                            best.dist = dist;
                            best.i = id;
                            best.j = static_cast<int>(j);
                        }
                    }
                } else {
                    const WsannIndex& w = heavy.at(cell_hash(cur, d));
                    int local;
                    if (std::sqrt(near2) >= w.sigma * w.r) {
                        local = wsann_query(w, q);
                    } else {
                        // too close for the separation contract: brute scan
                        local = 0;
                        double bd = (w.pts[0] - q).squaredNorm();
                        for (std::size_t t = 1; t < w.pts.size(); ++t) {
                            double dd = (w.pts[t] - q).squaredNorm();
                            if (dd < bd) {
                                bd = dd;
                                local = static_cast<int>(t);
                            }
                        }
                    }
                    int id = (*ids)[static_cast<std::size_t>(local)];
                    double dist = (red[static_cast<std::size_t>(id)] - q).norm();
                    if (dist < best.dist) {
                        best.dist = dist;
                        best.i = id;
                        best.j = static_cast<int>(j);
                    }
                }
                return;
            }
            for (long off = -span; off <= span; ++off) {
                cur[static_cast<std::size_t>(axis)] = base[static_cast<std::size_t>(axis)] + off;
                std::size_t slot = static_cast<std::size_t>(axis) * width +
                                   static_cast<std::size_t>(off + span);
                self(self, axis + 1, near2 + g2[slot], far2 + f2[slot]);
            }
        };
        visit_cells(visit_cells, 0, 0.0, 0.0);
    }
    return best;
}

}  // namespace geomk
