#include "geomk/apm.hpp"

#include "geomk/kernel.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace geomk {

namespace {

Constants apm_constants(double gamma, int d, bool coarse) {
    Constants k = Constants::for_gamma(gamma, d);
    k.c3 = k.gamma / (2.0 * k.c2 * d);
    if (coarse) k.lambda0 = coarse_lambda(d);
    return k;
}

void fill_stats(ApmIndex& idx) {
    idx.stats.pruned_faces = idx.pruned.size();
    idx.stats.nodes = idx.dag.nodes.size();
    idx.stats.levels = static_cast<int>(idx.dag.levels.size());
    idx.stats.total_nodes = idx.stats.nodes;
    idx.stats.sub_indices = idx.subs.size();
    for (const auto& s : idx.subs) {
        idx.stats.total_nodes += s.stats.total_nodes;
        idx.stats.sub_indices += s.stats.sub_indices;
    }
}

// Shared absolute-mode builder. band is the slack the leaf-halfspace test
// must answer within; coarse sub-indices instead use the fixed top depth
// (their negative answers are exact, so no band is required of them).
ApmIndex absolute_core(const AffineMap& map, HPolytope body, double gamma, double eps,
                       double band, bool coarse) {
    ApmIndex idx;
    idx.map = map;
    idx.mode = ApmMode::Absolute;
    idx.gamma = gamma;
    idx.eps = eps;
    idx.beta = 1.0;
    idx.rounds = 0;
    Constants k = apm_constants(gamma, body.dim(), coarse);
    idx.lambda0 = k.lambda0;
    // band * gamma / (2 c1) = band * Delta0
    idx.delta = coarse ? k.Delta0 : std::clamp(band * k.Delta0, 1e-5, k.Delta0);
    idx.dag = build_dag(body, idx.delta, k);
    attach_leaf_halfspaces(idx.dag, body);
    idx.pruned = std::move(body);
    fill_stats(idx);
    return idx;
}

ApmIndex bootstrapped_core(const AffineMap& map, HPolytope body, double gamma, double eps,
                           double beta, int rounds) {
    const int d = body.dim();
    ApmIndex idx;
    idx.map = map;
    idx.mode = ApmMode::Bootstrapped;
    idx.gamma = gamma;
    idx.eps = eps;
    idx.beta = beta;
    idx.rounds = rounds;
    Constants k = apm_constants(gamma, d, true);
    idx.lambda0 = k.lambda0;
    idx.delta = std::min(std::pow(eps, beta / (1.0 + beta)), k.Delta0);
    idx.dag = build_dag(body, idx.delta, k);

    const auto& leaf_ids = idx.dag.levels.back();
    idx.leaves.resize(leaf_ids.size());
    double sub_eps = std::min(k.c3 * eps / idx.delta, 0.9);
    for (std::size_t slot = 0; slot < leaf_ids.size(); ++slot) {
        DagNode& n = idx.dag.nodes[static_cast<std::size_t>(leaf_ids[slot])];
        n.leaf_sub = static_cast<int>(slot);
        ApmLeaf& lf = idx.leaves[slot];

        // Minimum enclosing axis box R of the 4/gamma Macbeath ellipsoid of
        // the leaf center, clipped to a box that contains the whole body.
        Ellipsoid er = n.ell_small.scaled((4.0 / gamma) / k.lambda0);
        Mat inv = er.shape.inverse();
        lf.box_lo = Vec(d);
        lf.box_hi = Vec(d);
        for (int j = 0; j < d; ++j) {
            double hw = std::sqrt(std::max(inv(j, j), 0.0));
            lf.box_lo[j] = std::max(n.center[j] - hw, -0.55);
            lf.box_hi[j] = std::min(n.center[j] + hw, 0.55);
        }

        // Clipped body: the (already pruned) face list plus the 2d box faces.
        std::vector<Halfspace> faces = body.faces();
        for (int j = 0; j < d; ++j) {
            Vec e = Vec::Zero(d);
            e[j] = 1.0;
            faces.emplace_back(e, lf.box_hi[j]);
            faces.emplace_back(-e, -lf.box_lo[j]);
        }
        HPolytope clipped(std::move(faces), d, false);
        auto [cc, cr] = chebyshev_center(clipped.as_constraints(), d);
        if (cr < 1e-9) {
            lf.trivially_outside = true;
            ++idx.stats.trivial_leaves;
            continue;
        }
        auto cs = canonicalize_hpoly(clipped);
        if (rounds - 1 == 0)
            idx.subs.push_back(absolute_core(cs.map, std::move(cs.poly), cs.gamma, sub_eps,
                                             sub_eps, true));
        else
            idx.subs.push_back(bootstrapped_core(cs.map, std::move(cs.poly), cs.gamma, sub_eps,
                                                 beta / (1.0 + beta), rounds - 1));
        lf.sub = static_cast<int>(idx.subs.size()) - 1;
    }
    idx.pruned = std::move(body);
    fill_stats(idx);
    return idx;
}

QueryVerdict query_canonical(const ApmIndex& idx, const Vec& q) {
    const int d = idx.pruned.dim();
    double qn = q.norm();
    QueryVerdict v;
    if (qn < 1e-14) {
        v.inside = true;
        v.path_length = 2;
        return v;
    }
    Vec u = q / qn;
    auto r = idx.dag.descend(u);
    v.path_length = r.visited;
    const DagNode& n = idx.dag.nodes[static_cast<std::size_t>(r.leaf)];

    // Segment test: the leaf ellipsoid lies inside the body, so any q on the
    // chord from the origin through it is inside outright.
    auto hit = n.ell.ray_intersect(Vec::Zero(d), u);
    if (hit && qn <= hit->second + 1e-12) {
        v.inside = true;
        return v;
    }

    if (idx.mode == ApmMode::Absolute) {
        v.inside = idx.pruned.faces()[static_cast<std::size_t>(n.leaf_halfspace)].contains(q, 1e-9);
        return v;
    }

    const ApmLeaf& lf = idx.leaves[static_cast<std::size_t>(n.leaf_sub)];
    if (lf.trivially_outside) {
        v.inside = false;
        return v;
    }
    bool in_box = true;
    for (int j = 0; j < d && in_box; ++j)
        in_box = q[j] >= lf.box_lo[j] - 1e-12 && q[j] <= lf.box_hi[j] + 1e-12;
    if (in_box && lf.sub >= 0) {
        const ApmIndex& sub = idx.subs[static_cast<std::size_t>(lf.sub)];
        QueryVerdict sv = query_canonical(sub, sub.map.apply(q));
        v.path_length += sv.path_length;
        if (!sv.inside) {
            // Exact: the point is outside some face of the clipped body while
            // inside the clip box, hence outside the body.
            v.inside = false;
            return v;
        }
    }
    // Confirmation scan over the pruned face list: keeps acceptance exact in
    // the body regardless of how coarse the sub-index is.
    v.inside = idx.pruned.contains(q, 1e-9);
    return v;
}

}  // namespace

ApmIndex build_absolute_apm(const HPolytope& p, double eps) {
    require(eps > 0 && eps < 1, "build_absolute_apm: eps must be in (0,1)");
    auto c = canonicalize_hpoly(p);
    ApmIndex idx = absolute_core(c.map, std::move(c.poly), c.gamma, eps, eps, false);
    idx.stats.input_faces = p.size();
    log_info("build_absolute_apm: eps=" + std::to_string(eps) + ", " +
             std::to_string(idx.stats.nodes) + " nodes");
    return idx;
}

QueryVerdict query_absolute(const ApmIndex& idx, const Vec& q_original) {
    require(idx.mode == ApmMode::Absolute, "query_absolute: index is not in absolute mode");
    Vec q = idx.map.apply(q_original);
    double qn = q.norm();
    QueryVerdict v;
    if (qn < 1e-14) {
        v.inside = true;
        v.path_length = 2;
        return v;
    }
    auto r = idx.dag.descend(q / qn);
    const DagNode& n = idx.dag.nodes[static_cast<std::size_t>(r.leaf)];
    v.inside = idx.pruned.faces()[static_cast<std::size_t>(n.leaf_halfspace)].contains(q, 1e-9);
    v.path_length = r.visited;
    return v;
}

ApmIndex build_apm(const HPolytope& p, double eps, int rounds) {
    require(eps > 0 && eps < 1, "build_apm: eps must be in (0,1)");
    require(rounds >= 0, "build_apm: rounds must be >= 0");
    auto c = canonicalize_hpoly(p);
    HPolytope pruned = prune_hrep(c.poly, eps / 4.0);
    // The structure answers for the pruned body at 0.7*eps; with the pruning
    // distance eps/4 that leaves a 5% margin inside the overall band.
    double eps_int = 0.7 * eps;
    // Pruning keeps a face subset, so the body can overshoot the enclosing
    // ball slightly; discount gamma to keep the depth constants valid.
    double gamma_eff = c.gamma / (1.0 + 0.5 * eps);
    ApmIndex idx;
    if (rounds == 0) {
        idx = absolute_core(c.map, std::move(pruned), gamma_eff, eps, eps_int, false);
    } else {
        idx = bootstrapped_core(c.map, std::move(pruned), gamma_eff, eps_int, 1.0, rounds);
        idx.eps = eps;
    }
    idx.rounds = rounds;
    idx.stats.input_faces = p.size();
    log_info("build_apm: eps=" + std::to_string(eps) + ", rounds=" + std::to_string(rounds) +
             ", " + std::to_string(idx.stats.total_nodes) + " nodes total, " +
             std::to_string(idx.stats.sub_indices) + " sub-indices");
    return idx;
}

QueryVerdict query(const ApmIndex& idx, const Vec& q_original) {
    return query_canonical(idx, idx.map.apply(q_original));
}

// ---------------------------------------------------------------------------
// Persistence: "APMX" magic, u16 version, u16 dimension, then the recursive
// index record with little-endian integers and 64-bit floats.
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'A', 'P', 'M', 'X'};
constexpr std::uint16_t kVersion = 1;
constexpr std::uint64_t kMaxCount = 1ull << 32;  // sanity cap on any stored count

class Writer {
public:
    explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
        require(out_.good(), "save_apm: cannot open " + path);
    }
    void raw(const void* p, std::size_t n) {
        out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    }
    void u8(std::uint8_t v) { raw(&v, 1); }
    void u16(std::uint16_t v) { raw(&v, 2); }
    void u32(std::uint32_t v) { raw(&v, 4); }
    void u64(std::uint64_t v) { raw(&v, 8); }
    void i32(std::int32_t v) { raw(&v, 4); }
    void f64(double v) { raw(&v, 8); }
    void vec(const Vec& v) {
        for (int j = 0; j < v.size(); ++j) f64(v[j]);
    }
    void mat(const Mat& m) {
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) f64(m(i, j));
    }
    bool good() const { return out_.good(); }

private:
    std::ofstream out_;
};

class Reader {
public:
    explicit Reader(const std::string& path) : in_(path, std::ios::binary) {
        require(in_.good(), "load_apm: cannot open " + path);
    }
    void raw(void* p, std::size_t n) {
        in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        require(in_.gcount() == static_cast<std::streamsize>(n), "load_apm: truncated file");
    }
    std::uint8_t u8() {
        std::uint8_t v;
        raw(&v, 1);
        return v;
    }
    std::uint16_t u16() {
        std::uint16_t v;
        raw(&v, 2);
        return v;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, 4);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        raw(&v, 8);
        require(v < kMaxCount, "load_apm: implausible count, corrupt file");
        return v;
    }
    std::int32_t i32() {
        std::int32_t v;
        raw(&v, 4);
        return v;
    }
    double f64() {
        double v;
        raw(&v, 8);
        return v;
    }
    Vec vec(int d) {
        Vec v(d);
        for (int j = 0; j < d; ++j) v[j] = f64();
        return v;
    }
    Mat mat(int r, int c) {
        Mat m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(i, j) = f64();
        return m;
    }

private:
    std::ifstream in_;
};

void write_index(Writer& w, const ApmIndex& idx, int d) {
    w.u8(static_cast<std::uint8_t>(idx.mode));
    w.u32(static_cast<std::uint32_t>(idx.rounds));
    w.f64(idx.eps);
    w.f64(idx.delta);
    w.f64(idx.beta);
    w.f64(idx.gamma);
    w.mat(idx.map.linear);
    w.vec(idx.map.shift);

    w.u64(idx.pruned.size());
    for (const auto& f : idx.pruned.faces()) {
        w.vec(f.normal);
        w.f64(f.offset);
    }

    w.f64(idx.dag.delta_target);
    w.u32(static_cast<std::uint32_t>(idx.dag.max_degree));
    w.u64(idx.dag.nodes.size());
    for (const auto& n : idx.dag.nodes) {
        w.u32(static_cast<std::uint32_t>(n.level));
        w.vec(n.center);
        w.vec(n.ell.center);
        w.mat(n.ell.shape);
        w.vec(n.ell_small.center);
        w.mat(n.ell_small.shape);
        w.i32(n.leaf_halfspace);
        w.i32(n.leaf_sub);
        w.u64(n.children.size());
        for (int c : n.children) w.u32(static_cast<std::uint32_t>(c));
    }
    w.u64(idx.dag.levels.size());
    for (const auto& lvl : idx.dag.levels) {
        w.u64(lvl.size());
        for (int id : lvl) w.u32(static_cast<std::uint32_t>(id));
    }
    w.u64(idx.dag.deltas.size());
    for (double v : idx.dag.deltas) w.f64(v);

    w.u64(idx.leaves.size());
    for (const auto& lf : idx.leaves) {
        w.i32(lf.sub);
        w.u8(lf.trivially_outside ? 1 : 0);
        w.vec(lf.box_lo.size() == d ? lf.box_lo : Vec::Zero(d).eval());
        w.vec(lf.box_hi.size() == d ? lf.box_hi : Vec::Zero(d).eval());
    }

    w.u64(idx.subs.size());
    for (const auto& s : idx.subs) write_index(w, s, d);
}

ApmIndex read_index(Reader& r, int d) {
    ApmIndex idx;
    std::uint8_t mode = r.u8();
    require(mode <= 1, "load_apm: bad mode byte");
    idx.mode = static_cast<ApmMode>(mode);
    idx.rounds = static_cast<int>(r.u32());
    idx.eps = r.f64();
    idx.delta = r.f64();
    idx.beta = r.f64();
    idx.gamma = r.f64();
    Mat lin = r.mat(d, d);
    Vec shift = r.vec(d);
    idx.map = AffineMap(std::move(lin), std::move(shift));

    std::uint64_t nf = r.u64();
    std::vector<Halfspace> faces;
    faces.reserve(nf);
    for (std::uint64_t i = 0; i < nf; ++i) {
        Vec a = r.vec(d);
        double b = r.f64();
        faces.emplace_back(std::move(a), b);
    }
    idx.pruned = HPolytope(std::move(faces), d, false);

    idx.dag.delta_target = r.f64();
    idx.dag.max_degree = static_cast<int>(r.u32());
    std::uint64_t nn = r.u64();
    idx.dag.nodes.resize(nn);
    for (std::uint64_t i = 0; i < nn; ++i) {
        DagNode& n = idx.dag.nodes[i];
        n.level = static_cast<int>(r.u32());
        n.center = r.vec(d);
        n.ell.center = r.vec(d);
        n.ell.shape = r.mat(d, d);
        n.ell_small.center = r.vec(d);
        n.ell_small.shape = r.mat(d, d);
        n.leaf_halfspace = r.i32();
        n.leaf_sub = r.i32();
        std::uint64_t nc = r.u64();
        n.children.resize(nc);
        for (std::uint64_t c = 0; c < nc; ++c) {
            n.children[c] = static_cast<int>(r.u32());
            require(n.children[c] >= 0 && static_cast<std::uint64_t>(n.children[c]) < nn,
                    "load_apm: child id out of range");
        }
    }
    std::uint64_t nl = r.u64();
    idx.dag.levels.resize(nl);
    for (std::uint64_t i = 0; i < nl; ++i) {
        std::uint64_t c = r.u64();
        idx.dag.levels[i].resize(c);
        for (std::uint64_t j = 0; j < c; ++j) {
            idx.dag.levels[i][j] = static_cast<int>(r.u32());
            require(static_cast<std::uint64_t>(idx.dag.levels[i][j]) < nn,
                    "load_apm: level id out of range");
        }
    }
    std::uint64_t nd = r.u64();
    idx.dag.deltas.resize(nd);
    for (std::uint64_t i = 0; i < nd; ++i) idx.dag.deltas[i] = r.f64();

    std::uint64_t nleaf = r.u64();
    idx.leaves.resize(nleaf);
    for (std::uint64_t i = 0; i < nleaf; ++i) {
        ApmLeaf& lf = idx.leaves[i];
        lf.sub = r.i32();
        lf.trivially_outside = r.u8() != 0;
        lf.box_lo = r.vec(d);
        lf.box_hi = r.vec(d);
    }

    std::uint64_t ns = r.u64();
    idx.subs.reserve(ns);
    for (std::uint64_t i = 0; i < ns; ++i) idx.subs.push_back(read_index(r, d));
    for (const auto& lf : idx.leaves)
        require(lf.sub < static_cast<int>(ns), "load_apm: sub-index id out of range");
    fill_stats(idx);
    return idx;
}

}  // namespace

void save_apm(const std::string& path, const ApmIndex& idx) {
    Writer w(path);
    w.raw(kMagic, 4);
    w.u16(kVersion);
    w.u16(static_cast<std::uint16_t>(idx.pruned.dim()));
    write_index(w, idx, idx.pruned.dim());
    require(w.good(), "save_apm: write failed for " + path);
}

ApmIndex load_apm(const std::string& path) {
    Reader r(path);
    char magic[4];
    r.raw(magic, 4);
    require(std::memcmp(magic, kMagic, 4) == 0, "load_apm: bad magic, not an index file");
    std::uint16_t version = r.u16();
    require(version == kVersion,
            "load_apm: unsupported version " + std::to_string(version));
    int d = r.u16();
    check_dim(d);
    ApmIndex idx = read_index(r, d);
    idx.stats.input_faces = idx.pruned.size();
    return idx;
}

}  // namespace geomk
