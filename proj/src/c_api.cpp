#include "geomk.h"

#include "geomk/apm.hpp"
#include "geomk/extent.hpp"
#include "geomk/io.hpp"
#include "geomk/kernel.hpp"
#include "geomk/oracle.hpp"
#include "geomk/parallel.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <new>
#include <string>

using namespace geomk;

struct geomk_points {
    PointSet s;
};
struct geomk_poly {
    HPolytope p;
};
struct geomk_apm {
    ApmIndex idx;
};
struct geomk_width {
    WidthIndex idx;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
geomk_status guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return GEOMK_OK;
    } catch (const InvariantError& e) {
        g_last_error = e.what();
        return GEOMK_ERR_INTERNAL;
    } catch (const GeomError& e) {
        g_last_error = e.what();
        return GEOMK_ERR_INPUT;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return GEOMK_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return GEOMK_ERR_INTERNAL;
    }
}

geomk_status input_error(const char* msg) {
    g_last_error = msg;
    return GEOMK_ERR_INPUT;
}

}  // namespace

extern "C" {

const char* geomk_last_error(void) { return g_last_error.c_str(); }

/* -------------------------------------------------------------------- points */

geomk_status geomk_points_create(int dim, const double* coords, size_t n,
                                 geomk_points** out) {
    if (!out) return input_error("out is null");
    *out = nullptr;
    if (!coords && n > 0) return input_error("coords is null");
    return guarded([&] {
        std::vector<Vec> pts;
        pts.reserve(n);
        for (size_t i = 0; i < n; ++i) {
            Vec v(dim);
            for (int j = 0; j < dim; ++j) v[j] = coords[i * static_cast<size_t>(dim) + j];
            pts.push_back(std::move(v));
        }
        *out = new geomk_points{PointSet(std::move(pts), dim)};
    });
}

geomk_status geomk_points_read(const char* path, geomk_points** out) {
    if (!out) return input_error("out is null");
    *out = nullptr;
    if (!path) return input_error("path is null");
    return guarded([&] { *out = new geomk_points{read_points(path)}; });
}

geomk_status geomk_points_write(const char* path, const geomk_points* pts) {
    if (!path) return input_error("path is null");
    if (!pts) return input_error("pts is null");
    return guarded([&] { write_points(path, pts->s); });
}

int geomk_points_dim(const geomk_points* pts) { return pts ? pts->s.dim : 0; }

size_t geomk_points_size(const geomk_points* pts) { return pts ? pts->s.size() : 0; }

geomk_status geomk_points_get(const geomk_points* pts, size_t i, double* coords) {
    if (!pts) return input_error("pts is null");
    if (!coords) return input_error("coords is null");
    if (i >= pts->s.size()) return input_error("point index out of range");
    const Vec& v = pts->s[i];
    for (int j = 0; j < pts->s.dim; ++j) coords[j] = v[j];
    g_last_error.clear();
    return GEOMK_OK;
}

void geomk_points_free(geomk_points* pts) { delete pts; }

/* ----------------------------------------------------------------- polytopes */

geomk_status geomk_poly_create(int dim, const double* rows, size_t n, int check_bounded,
                               geomk_poly** out) {
    if (!out) return input_error("out is null");
    *out = nullptr;
    if (!rows && n > 0) return input_error("rows is null");
    return guarded([&] {
        std::vector<Halfspace> faces;
        faces.reserve(n);
        const size_t stride = static_cast<size_t>(dim) + 1;
        for (size_t i = 0; i < n; ++i) {
            Vec a(dim);
            for (int j = 0; j < dim; ++j) a[j] = rows[i * stride + j];
            faces.emplace_back(std::move(a), rows[i * stride + stride - 1]);
        }
        *out = new geomk_poly{HPolytope(std::move(faces), dim, check_bounded != 0)};
    });
}

geomk_status geomk_poly_read(const char* path, geomk_poly** out) {
    if (!out) return input_error("out is null");
    *out = nullptr;
    if (!path) return input_error("path is null");
    return guarded([&] { *out = new geomk_poly{read_halfspaces(path)}; });
}

int geomk_poly_dim(const geomk_poly* p) { return p ? p->p.dim() : 0; }

size_t geomk_poly_size(const geomk_poly* p) { return p ? p->p.size() : 0; }

void geomk_poly_free(geomk_poly* p) { delete p; }

/* -------------------------------------------------------------------- kernel */

geomk_status geomk_kernel_stats_run(const geomk_points* pts, double eps, int rounds,
                                    int32_t** out_indices, size_t* out_n,
                                    geomk_kernel_stats* stats) {
    if (!out_indices || !out_n) return input_error("output pointer is null");
    *out_indices = nullptr;
    *out_n = 0;
    if (!pts) return input_error("pts is null");
    return guarded([&] {
        BootstrapConfig cfg;
        if (rounds >= 0) cfg.rounds = rounds;
        KernelResult r = build_kernel(pts->s, eps, cfg);
        auto* idx = new int32_t[r.subset.size()];
        for (size_t i = 0; i < r.subset.size(); ++i) idx[i] = r.subset[i];
        *out_indices = idx;
        *out_n = r.subset.size();
        if (stats) {
            std::memset(stats, 0, sizeof(*stats));
            stats->input_size = r.stats.input_size;
            stats->discarded = r.stats.discarded;
            stats->leaves = r.stats.leaves;
            stats->rounds_used = r.stats.rounds_used;
            stats->delta_count = static_cast<int>(
                std::min<size_t>(r.stats.delta_schedule.size(), GEOMK_MAX_ROUNDS));
            for (int i = 0; i < stats->delta_count; ++i)
                stats->delta_schedule[i] = r.stats.delta_schedule[static_cast<size_t>(i)];
        }
    });
}

geomk_status geomk_kernel(const geomk_points* pts, double eps, int rounds,
                          int32_t** out_indices, size_t* out_n) {
    return geomk_kernel_stats_run(pts, eps, rounds, out_indices, out_n, nullptr);
}

void geomk_indices_free(int32_t* indices) { delete[] indices; }

void geomk_set_threads(int threads) { set_default_threads(threads); }

/* -------------------------------------------------------------------- extent */

geomk_status geomk_diameter(const geomk_points* pts, double eps, int32_t* i, int32_t* j,
                            double* dist) {
    if (!pts) return input_error("pts is null");
    if (!i || !j || !dist) return input_error("output pointer is null");
    return guarded([&] {
        DiameterResult r = diameter(pts->s, eps);
        *i = r.i;
        *j = r.j;
        *dist = r.dist;
    });
}

geomk_status geomk_bcp(const geomk_points* red, const geomk_points* blue, double eps,
                       uint64_t seed, int32_t* i, int32_t* j, double* dist,
                       double* estimate) {
    if (!red || !blue) return input_error("point set is null");
    if (!i || !j || !dist || !estimate) return input_error("output pointer is null");
    return guarded([&] {
        BcpResult r = bcp(red->s, blue->s, eps, seed);
        *i = r.i;
        *j = r.j;
        *dist = r.dist;
        *estimate = r.estimate;
    });
}

geomk_status geomk_width_build(const geomk_points* pts, double eps, geomk_width** out) {
    if (!out) return input_error("out is null");
    *out = nullptr;
    if (!pts) return input_error("pts is null");
    return guarded([&] { *out = new geomk_width{width_build(pts->s, eps)}; });
}

geomk_status geomk_width_query(const geomk_width* idx, const double* v, double* value) {
    if (!idx) return input_error("idx is null");
    if (!v || !value) return input_error("pointer is null");
    return guarded([&] {
        const int d = idx->idx.map.linear.rows();
        Vec dir(d);
        for (int j = 0; j < d; ++j) dir[j] = v[j];
        *value = width_query(idx->idx, dir);
    });
}

void geomk_width_free(geomk_width* idx) { delete idx; }

/* ---------------------------------------------------------------- membership */

geomk_status geomk_apm_build(const geomk_poly* p, double eps, int rounds, geomk_apm** out) {
    if (!out) return input_error("out is null");
    *out = nullptr;
    if (!p) return input_error("p is null");
    return guarded([&] { *out = new geomk_apm{build_apm(p->p, eps, rounds)}; });
}

geomk_status geomk_apm_query(const geomk_apm* idx, const double* q, int* inside,
                             int* path_length) {
    if (!idx) return input_error("idx is null");
    if (!q || !inside) return input_error("pointer is null");
    return guarded([&] {
        const int d = idx->idx.map.linear.rows();
        Vec qq(d);
        for (int j = 0; j < d; ++j) qq[j] = q[j];
        QueryVerdict v = query(idx->idx, qq);
        *inside = v.inside ? 1 : 0;
        if (path_length) *path_length = v.path_length;
    });
}

geomk_status geomk_apm_save(const geomk_apm* idx, const char* path) {
    if (!idx) return input_error("idx is null");
    if (!path) return input_error("path is null");
    return guarded([&] { save_apm(path, idx->idx); });
}

geomk_status geomk_apm_load(const char* path, geomk_apm** out) {
    if (!out) return input_error("out is null");
    *out = nullptr;
    if (!path) return input_error("path is null");
    return guarded([&] { *out = new geomk_apm{load_apm(path)}; });
}

int geomk_apm_dim(const geomk_apm* idx) {
    return idx ? static_cast<int>(idx->idx.map.linear.rows()) : 0;
}

geomk_status geomk_apm_stats(const geomk_apm* idx, uint64_t* total_nodes,
                             uint64_t* sub_indices, int* rounds, double* eps) {
    if (!idx) return input_error("idx is null");
    if (total_nodes) *total_nodes = idx->idx.stats.total_nodes;
    if (sub_indices) *sub_indices = idx->idx.stats.sub_indices;
    if (rounds) *rounds = static_cast<int>(idx->idx.rounds);
    if (eps) *eps = idx->idx.eps;
    g_last_error.clear();
    return GEOMK_OK;
}

void geomk_apm_free(geomk_apm* idx) { delete idx; }

/* -------------------------------------------------------------------- oracle */

geomk_status geomk_exact_diameter(const geomk_points* pts, int32_t* i, int32_t* j,
                                  double* dist) {
    if (!pts) return input_error("pts is null");
    if (!i || !j || !dist) return input_error("output pointer is null");
    return guarded([&] {
        auto r = oracle::exact_diameter(pts->s);
        *i = r.i;
        *j = r.j;
        *dist = r.dist;
    });
}

geomk_status geomk_exact_bcp(const geomk_points* red, const geomk_points* blue, int32_t* i,
                             int32_t* j, double* dist) {
    if (!red || !blue) return input_error("point set is null");
    if (!i || !j || !dist) return input_error("output pointer is null");
    return guarded([&] {
        auto r = oracle::exact_bcp(red->s, blue->s);
        *i = r.i;
        *j = r.j;
        *dist = r.dist;
    });
}

geomk_status geomk_exact_width(const geomk_points* pts, const double* v, double* value) {
    if (!pts) return input_error("pts is null");
    if (!v || !value) return input_error("pointer is null");
    return guarded([&] {
        Vec dir(pts->s.dim);
        for (int j = 0; j < pts->s.dim; ++j) dir[j] = v[j];
        *value = oracle::exact_width(pts->s, dir);
    });
}

}  // extern "C"
