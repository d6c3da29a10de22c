#include "geomk/hierarchy.hpp"

#include "geomk/parallel.hpp"

#include <cmath>
#include <unordered_map>

namespace geomk {

Constants Constants::for_gamma(double gamma, int dim, double c3) {
    require(gamma > 0 && gamma < 1, "constants: gamma must be in (0,1)");
    check_dim(dim);
    Constants k;
    k.gamma = gamma;
    k.lambda0 = 1.0 / (20.0 * dim);
    k.Delta0 = 3.0 * gamma * gamma / 16.0;
    k.c1 = 8.0 / (3.0 * gamma);
    k.c2 = 160.0 / (3.0 * gamma * gamma);
    k.c3 = c3;
    require(k.Delta0 < gamma / 2, "constants: Delta0 >= gamma/2");
    return k;
}

double coarse_lambda(int dim) { return std::min(1.0 / (4.2 * dim), 0.2); }

namespace {

// Uniform hash grid over node centers; prunes pairwise ellipsoid tests to
// neighbors within one cell ring. Rebuilt if an inserted radius outgrows it.
class CenterGrid {
public:
    CenterGrid() = default;
    CenterGrid(int dim, double cell) : dim_(dim), cell_(std::max(cell, 1e-9)) {}

    double cell() const { return cell_; }

    void insert(const Vec& x, int id) { cells_[key(x)].push_back(id); }

    // Visit every id within one cell ring of x; allocation-free hot path.
    // The visitor returns true to stop early (and so does this function).
    template <typename F>
    bool for_neighbors(const Vec& x, F&& visit) const {
        std::array<long, kMaxDim> base{}, cur{};
        for (int j = 0; j < dim_; ++j) base[static_cast<std::size_t>(j)] = coord(x[j]);
        return walk(0, base, cur, visit);
    }

private:
    long coord(double v) const { return static_cast<long>(std::floor(v / cell_)); }

    std::size_t key_of(const std::array<long, kMaxDim>& c) const {
        std::size_t h = 1469598103934665603ull;
        for (int j = 0; j < dim_; ++j) {
            h ^= static_cast<std::size_t>(c[static_cast<std::size_t>(j)]) +
                 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }

    std::size_t key(const Vec& x) const {
        std::array<long, kMaxDim> c{};
        for (int j = 0; j < dim_; ++j) c[static_cast<std::size_t>(j)] = coord(x[j]);
        return key_of(c);
    }

    template <typename F>
    bool walk(int j, const std::array<long, kMaxDim>& base, std::array<long, kMaxDim>& cur,
              F&& visit) const {
        if (j == dim_) {
            auto it = cells_.find(key_of(cur));
            if (it == cells_.end()) return false;
            for (int id : it->second)
                if (visit(id)) return true;
            return false;
        }
        for (long dv = -1; dv <= 1; ++dv) {
            cur[static_cast<std::size_t>(j)] = base[static_cast<std::size_t>(j)] + dv;
            if (walk(j + 1, base, cur, visit)) return true;
        }
        return false;
    }

    int dim_ = 0;
    double cell_ = 1.0;
    std::unordered_map<std::size_t, std::vector<int>> cells_;
};

// (y - c)^T A (y - c) without temporaries; the hot loop of coverage tests.
double quad_flat(const Ellipsoid& e, const double* y) {
    const int d = e.dim();
    double q = 0.0;
    for (int i = 0; i < d; ++i) {
        double zi = y[i] - e.center[i];
        double row = 0.0;
        for (int j = 0; j < d; ++j) row += e.shape(i, j) * (y[j] - e.center[j]);
        q += zi * row;
    }
    return q;
}

// Static hash grid over a flat point buffer; supports box queries. Used to
// mark, node-major, which boundary samples each accepted ellipsoid covers.
class SampleGrid {
public:
    SampleGrid() = default;
    SampleGrid(const std::vector<double>& xyz, int dim, double cell)
        : dim_(dim), cell_(std::max(cell, 1e-9)) {
        const int n = static_cast<int>(xyz.size()) / dim;
        std::array<long, kMaxDim> c{};
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < dim_; ++j)
                c[static_cast<std::size_t>(j)] = coord(xyz[i * dim_ + j]);
            cells_[key_of(c)].push_back(i);
        }
    }

    // Visit every sample id whose cell overlaps the box [lo, hi].
    template <typename F>
    void for_box(const Vec& lo, const Vec& hi, F&& visit) const {
        std::array<long, kMaxDim> clo{}, chi{}, cur{};
        for (int j = 0; j < dim_; ++j) {
            clo[static_cast<std::size_t>(j)] = coord(lo[j]);
            chi[static_cast<std::size_t>(j)] = coord(hi[j]);
        }
        walk(0, clo, chi, cur, visit);
    }

private:
    long coord(double v) const { return static_cast<long>(std::floor(v / cell_)); }

    std::size_t key_of(const std::array<long, kMaxDim>& c) const {
        std::size_t h = 1469598103934665603ull;
        for (int j = 0; j < dim_; ++j) {
            h ^= static_cast<std::size_t>(c[static_cast<std::size_t>(j)]) +
                 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }

    template <typename F>
    void walk(int j, const std::array<long, kMaxDim>& lo, const std::array<long, kMaxDim>& hi,
              std::array<long, kMaxDim>& cur, F&& visit) const {
        if (j == dim_) {
            auto it = cells_.find(key_of(cur));
            if (it == cells_.end()) return;
            for (int id : it->second) visit(id);
            return;
        }
        for (long v = lo[static_cast<std::size_t>(j)]; v <= hi[static_cast<std::size_t>(j)];
             ++v) {
            cur[static_cast<std::size_t>(j)] = v;
            walk(j + 1, lo, hi, cur, visit);
        }
    }

    int dim_ = 0;
    double cell_ = 1.0;
    std::unordered_map<std::size_t, std::vector<int>> cells_;
};

int candidate_count(int dim, double ratio) {
    double n = 512.0 * std::pow(ratio, 0.5 * (dim - 1));
    return static_cast<int>(std::min(n, 200000.0));
}

// Mutable state of one level under construction: packing grid over the
// lambda0 ellipsoids, coverage grid over the 4*lambda0*sqrt(d) ellipsoids.
class LevelState {
public:
    LevelState(const HPolytope& p, double delta, const Constants& k)
        : p_(&p), delta_(delta), k_(k) {
        const int d = p.dim();
        lam_big_ = 4.0 * k.lambda0 * std::sqrt(static_cast<double>(d));
        pd_ = p.erode(delta);
        require(pd_.contains_origin(), "build_level: eroded body lost the origin");
    }

    const HPolytope& eroded() const { return pd_; }

    Vec boundary_point(const Vec& u) const { return pd_.ray_shoot(u).t * u; }

    MacbeathEllipsoid fit(const Vec& x) const {
        // A loose fit tolerance: the inner containment is exact by
        // construction and the outer factor sqrt(d)(1+tol) scales with it,
        // so accuracy here trades only constant factors for speed.
        return macbeath_ellipsoid(*p_, x, k_.lambda0, 0.02);
    }

    Ellipsoid big_of(const MacbeathEllipsoid& f) const {
        return f.inner.scaled(lam_big_ / k_.lambda0 * f.outer_factor);
    }

    // Register a flat sample buffer; every current and future node marks the
    // samples its big ellipsoid contains. Node-major, so the grid stays
    // uniform (it indexes points, not wildly anisotropic ellipsoids).
    void bind_samples(const std::vector<double>* xyz, std::vector<char>* flags,
                      const SampleGrid* grid) {
        samples_ = xyz;
        sflags_ = flags;
        sgrid_ = grid;
        for (const auto& e : big_) mark(e);
    }

    void unbind_samples() {
        samples_ = nullptr;
        sflags_ = nullptr;
        sgrid_ = nullptr;
    }

    // Median bounding-ball radius of the accepted big ellipsoids; a good
    // sample-grid cell is a fraction of this.
    double typical_big_radius() const {
        if (rb_.empty()) return 1.0;
        std::vector<double> r = rb_;
        std::nth_element(r.begin(), r.begin() + r.size() / 2, r.end());
        return r[r.size() / 2];
    }

    // Greedy packing accept: lambda0 ellipsoids must not intersect.
    bool try_accept(const Vec& x, const MacbeathEllipsoid& f) {
        double rmax = f.exported.max_semi_axis();
        double rmin = f.exported.min_semi_axis();
        bool blocked = pack_grid_.for_neighbors(x, [&](int id) {
            return ellipsoids_intersect(fits_[id].exported, f.exported, sm_rmax_[id],
                                        sm_rmin_[id], rmax, rmin);
        });
        if (blocked) return false;
        push(x, f, rmax, rmin);
        return true;
    }

    // Repair accept: the point was seen uncovered, so its lambda0 region is
    // provably disjoint from every accepted one; confirm with exact LPs.
    bool try_repair(const Vec& y) {
        auto f = fit(y);
        double rmax = f.exported.max_semi_axis();
        double rmin = f.exported.min_semi_axis();
        auto ry = macbeath_region(*p_, y, k_.lambda0);
        bool blocked = pack_grid_.for_neighbors(y, [&](int id) {
            if (!ellipsoids_intersect(fits_[id].exported, f.exported, sm_rmax_[id],
                                      sm_rmin_[id], rmax, rmin))
                return false;
            auto rx = macbeath_region(*p_, centers_[id], k_.lambda0);
            return regions_intersect(rx, ry);
        });
        if (blocked) {
            log_debug("level repair: point blocked by an accepted region");
            return false;
        }
        push(y, f, rmax, rmin);
        return true;
    }

    std::size_t size() const { return centers_.size(); }
    const std::vector<Vec>& centers() const { return centers_; }
    const std::vector<MacbeathEllipsoid>& fits() const { return fits_; }
    const std::vector<Ellipsoid>& bigs() const { return big_; }

private:
    void push(const Vec& x, const MacbeathEllipsoid& f, double rs, double rs_min) {
        Ellipsoid big = big_of(f);
        double ratio = lam_big_ / k_.lambda0 * f.outer_factor;
        int id = static_cast<int>(centers_.size());
        centers_.push_back(x);
        fits_.push_back(f);
        big_.push_back(big);
        sm_rmax_.push_back(rs);
        sm_rmin_.push_back(rs_min);
        rb_.push_back(rs * ratio);
        if (centers_.size() == 1 || pack_grid_.cell() < 2 * rs) {
            rebuild(std::max(rs, pack_grid_.cell() / 2));
        } else {
            pack_grid_.insert(x, id);
        }
        if (sgrid_) mark(big_.back());
    }

    void mark(const Ellipsoid& e) {
        const int d = p_->dim();
        // axis-aligned bounding box of {z : z^T A z <= 1}: half-width_j =
        // sqrt((A^{-1})_jj)
        Mat inv = e.shape.inverse();
        Vec lo(d), hi(d);
        for (int j = 0; j < d; ++j) {
            double b = std::sqrt(std::max(inv(j, j), 0.0));
            lo[j] = e.center[j] - b;
            hi[j] = e.center[j] + b;
        }
        const double* xyz = samples_->data();
        sgrid_->for_box(lo, hi, [&](int id) {
            if ((*sflags_)[static_cast<std::size_t>(id)]) return;
            const double* y = xyz + static_cast<std::size_t>(id) * d;
            for (int j = 0; j < d; ++j)
                if (y[j] < lo[j] || y[j] > hi[j]) return;
            // stricter than the containment the consumers rely on: points in
            // the outer 5% shell trigger a repair attempt, which either adds
            // a node there or proves the lambda0 regions already meet (and so
            // the point is covered with margin to spare)
            if (quad_flat(e, y) <= 0.9)
                (*sflags_)[static_cast<std::size_t>(id)] = 1;
        });
    }

    void rebuild(double rs) {
        pack_grid_ = CenterGrid(p_->dim(), 2 * rs * 1.2);
        for (std::size_t i = 0; i < centers_.size(); ++i)
            pack_grid_.insert(centers_[i], static_cast<int>(i));
    }

    const HPolytope* p_;
    double delta_;
    Constants k_;
    double lam_big_;
    HPolytope pd_;
    std::vector<Vec> centers_;
    std::vector<MacbeathEllipsoid> fits_;
    std::vector<Ellipsoid> big_;
    std::vector<double> sm_rmax_;  // bounding-ball radii of the exported
    std::vector<double> sm_rmin_;  // lambda0 ellipsoids, cached for hot loops
    std::vector<double> rb_;       // bounding-ball radii of the big ellipsoids
    CenterGrid pack_grid_;
    const std::vector<double>* samples_ = nullptr;
    std::vector<char>* sflags_ = nullptr;
    const SampleGrid* sgrid_ = nullptr;
};

// Candidate seeding + global verify-and-repair sweep for one level.
LevelState build_level_state(const HPolytope& p, double delta, const Constants& k,
                             int threads, LevelStats& stats) {
    const int d = p.dim();
    LevelState st(p, delta, k);

    int ncand = candidate_count(d, k.Delta0 / delta);
    auto dirs = direction_net(d, ncand);
    std::vector<Vec> cand(ncand);
    std::vector<MacbeathEllipsoid> cand_fit(ncand);
    parallel_for(ncand, threads, [&](std::size_t i) {
        cand[i] = st.boundary_point(dirs[i]);
        cand_fit[i] = st.fit(cand[i]);
    });
    stats.candidates = ncand;
    for (int i = 0; i < ncand; ++i) st.try_accept(cand[i], cand_fit[i]);

    // global sweep: every sampled boundary point must land in a big ellipsoid
    auto sweep = [&](int n, int skip, int& misses) {
        auto cov_dirs = direction_net(d, n, skip);
        std::vector<double> sxyz(static_cast<std::size_t>(n) * d);
        parallel_for(n, threads, [&](std::size_t i) {
            Vec y = st.boundary_point(cov_dirs[i]);
            for (int j = 0; j < d; ++j) sxyz[i * d + j] = y[j];
        });
        SampleGrid grid(sxyz, d, st.typical_big_radius() / 4.0);
        std::vector<char> flags(n, 0);
        st.bind_samples(&sxyz, &flags, &grid);
        Vec y(d);
        int repaired = 0;
        misses = 0;
        for (int i = 0; i < n; ++i) {
            if (flags[static_cast<std::size_t>(i)]) continue;
            ++misses;
            for (int j = 0; j < d; ++j) y[j] = sxyz[static_cast<std::size_t>(i) * d + j];
            if (st.try_repair(y)) ++repaired;
        }
        st.unbind_samples();
        return repaired;
    };

    int ncov = std::max(4 * ncand, 4000);
    int skip = ncand;
    int misses = 0;
    stats.repairs += sweep(ncov, skip, misses);
    skip += ncov;
    // verify with fresh, doubling nets until one comes back fully covered;
    // gaps live near the eroded body's edges, where the regions are tiny
    int nver = ncov;
    for (int round = 0; round < 8; ++round) {
        int rep = sweep(nver, skip, misses);
        skip += nver;
        stats.repairs += rep;
        // a round that adds no node is clean: every flagged sample was either
        // blocked (proving its lambda0 region meets an accepted one, so it is
        // covered) or never flagged at all
        if (rep == 0) break;
        nver = std::min(2 * nver, 1 << 18);
    }
    stats.accepted = static_cast<int>(st.size());
    return st;
}

}  // namespace

LevelResult build_level(const HPolytope& p, double delta, const Constants& k, int threads) {
    require(delta > 0 && delta <= k.Delta0 + 1e-15, "build_level: need 0 < delta <= Delta0");
    LevelResult out;
    auto st = build_level_state(p, delta, k, threads, out.stats);
    out.centers = st.centers();
    out.fits = st.fits();
    log_info("build_level delta=" + std::to_string(delta) + ": " +
             std::to_string(out.stats.accepted) + " nodes (" +
             std::to_string(out.stats.candidates) + " candidates, " +
             std::to_string(out.stats.repairs) + " repairs)");
    return out;
}

Dag build_dag(const HPolytope& p, double delta_target, const Constants& k, int threads) {
    const int d = p.dim();
    require(delta_target > 0 && delta_target <= k.Delta0 + 1e-15,
            "build_dag: need 0 < delta_target <= Delta0");
    int ell = 0;
    while (k.Delta0 / std::pow(2.0, ell) > delta_target * (1 + 1e-12)) ++ell;

    Dag dag;
    dag.delta_target = delta_target;
    std::vector<LevelState> states;
    states.reserve(ell + 1);
    for (int i = 0; i <= ell; ++i) {
        double delta = k.Delta0 / std::pow(2.0, i);
        LevelStats stats;
        auto st = build_level_state(p, delta, k, threads, stats);

        if (i > 0) {
            // Descent invariant: any origin ray through a level-(i-1)
            // ellipsoid must meet a level-i ellipsoid. Sample rays through
            // each parent ellipsoid and repair this level where they miss.
            const auto& parents = states.back();
            const int rays = 96;
            std::size_t ns = parents.size() * rays;
            std::vector<double> sxyz(ns * d);
            std::vector<char> flags(ns, 0);
            parallel_for(parents.size(), threads, [&](std::size_t u) {
                Rng rng(0x9e0cull * (u + 1) + 77 * i);
                for (int s = 0; s < rays; ++s) {
                    std::size_t id = u * rays + s;
                    Vec z = sample_ellipsoid_point(parents.bigs()[u], rng);
                    double zn = z.norm();
                    if (zn < 1e-12) {
                        flags[id] = 1;  // degenerate ray, nothing to check
                        for (int j = 0; j < d; ++j) sxyz[id * d + j] = 0.0;
                        continue;
                    }
                    Vec y = st.boundary_point(z / zn);
                    for (int j = 0; j < d; ++j) sxyz[id * d + j] = y[j];
                }
            });
            SampleGrid grid(sxyz, d, st.typical_big_radius() / 4.0);
            st.bind_samples(&sxyz, &flags, &grid);
            Vec y(d);
            for (std::size_t id = 0; id < ns; ++id) {
                if (flags[id]) continue;
                for (int j = 0; j < d; ++j) y[j] = sxyz[id * d + j];
                if (st.try_repair(y)) ++stats.repairs;
            }
            st.unbind_samples();
            stats.accepted = static_cast<int>(st.size());
        }

        dag.deltas.push_back(delta);
        dag.stats.push_back(stats);
        log_info("dag level " + std::to_string(i) + " delta=" + std::to_string(delta) + ": " +
                 std::to_string(stats.accepted) + " nodes (" +
                 std::to_string(stats.repairs) + " repairs)");
        states.push_back(std::move(st));
    }

    // materialize nodes
    for (int i = 0; i <= ell; ++i) {
        std::vector<int> ids;
        const auto& st = states[i];
        for (std::size_t j = 0; j < st.size(); ++j) {
            DagNode node;
            node.level = i;
            node.center = st.centers()[j];
            node.ell_small = st.fits()[j].exported;
            node.ell = st.bigs()[j];
            ids.push_back(static_cast<int>(dag.nodes.size()));
            dag.nodes.push_back(std::move(node));
        }
        dag.levels.push_back(std::move(ids));
    }

    // --- child links via direction-cone overlap (over-approximates the
    // "some origin ray meets both ellipsoids" test; over-linking is safe)
    struct Cone {
        Vec dir;
        double theta;
    };
    auto cone_of = [&](const DagNode& n) {
        Cone c;
        double rho = n.ell.max_semi_axis();
        double nc = n.center.norm();
        if (nc <= rho) {
            c.dir = Vec::Zero(d);
            c.theta = M_PI;  // sees every direction
        } else {
            c.dir = n.center / nc;
            c.theta = std::asin(rho / nc);
        }
        return c;
    };
    std::vector<Cone> cones(dag.nodes.size());
    for (std::size_t i = 0; i < dag.nodes.size(); ++i) cones[i] = cone_of(dag.nodes[i]);

    for (int i = 0; i + 1 <= ell; ++i) {
        const auto& parents = dag.levels[i];
        const auto& kids = dag.levels[i + 1];
        parallel_for(parents.size(), threads, [&](std::size_t pi) {
            int u = parents[pi];
            for (int v : kids) {
                double ang;
                if (cones[u].theta >= M_PI || cones[v].theta >= M_PI)
                    ang = 0.0;
                else
                    ang = std::acos(std::clamp(cones[u].dir.dot(cones[v].dir), -1.0, 1.0));
                if (ang <= cones[u].theta + cones[v].theta + 1e-12)
                    dag.nodes[u].children.push_back(v);
            }
        });
    }
    for (const auto& n : dag.nodes)
        dag.max_degree = std::max(dag.max_degree, static_cast<int>(n.children.size()));
    log_info("build_dag: " + std::to_string(dag.nodes.size()) + " nodes, " +
             std::to_string(ell + 1) + " levels, max degree " + std::to_string(dag.max_degree));
    return dag;
}

Dag::DescendResult Dag::descend(const Vec& u) const {
    DescendResult r;
    r.visited = 1;  // root
    const int d = static_cast<int>(u.size());
    Vec origin = Vec::Zero(d);
    auto hits = [&](int id) {
        auto t = nodes[id].ell.ray_intersect(origin, u);
        return t.has_value();
    };
    const std::vector<int>* frontier = &levels[0];
    int cur = -1;
    for (int i = 0; i <= depth(); ++i) {
        int found = -1;
        for (int id : *frontier) {
            if (hits(id)) {
                found = id;
                break;
            }
        }
        if (found < 0) {
            // coverage miss: fall back to a scan of the whole level
            r.fallback = true;
            for (int id : levels[i]) {
                if (hits(id)) {
                    found = id;
                    break;
                }
            }
        }
        if (found < 0) throw InvariantError("descend: no ellipsoid intersects the ray");
        cur = found;
        ++r.visited;
        if (i < depth()) frontier = &nodes[cur].children;
    }
    r.leaf = cur;
    return r;
}

void attach_leaf_halfspaces(Dag& dag, const HPolytope& p) {
    for (int id : dag.levels.back()) {
        auto& n = dag.nodes[id];
        Vec u = n.center / n.center.norm();
        n.leaf_halfspace = p.ray_shoot(u).face;
    }
}

}  // namespace geomk
