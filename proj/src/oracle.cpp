#include "geomk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geomk {
namespace oracle {

double exact_width(const PointSet& s, const Vec& v) {
    require(s.size() > 0, "exact_width: empty point set");
    double lo = v.dot(s[0]), hi = lo;
    for (std::size_t i = 1; i < s.size(); ++i) {
        double t = v.dot(s[i]);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    return hi - lo;
}

PairResult exact_diameter(const PointSet& s) {
    require(s.size() >= 2, "exact_diameter: need at least two points");
    PairResult best;
    double best2 = -1.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            double d2 = (s[i] - s[j]).squaredNorm();
            if (d2 > best2) {
                best2 = d2;
                best.i = static_cast<int>(i);
                best.j = static_cast<int>(j);
            }
        }
    best.dist = std::sqrt(best2);
    return best;
}

namespace {

double cross2(const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; returns hull vertex indices in ccw order.
std::vector<int> hull_2d(const PointSet& s) {
    const int n = static_cast<int>(s.size());
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (s[a][0] != s[b][0]) return s[a][0] < s[b][0];
        return s[a][1] < s[b][1];
    });
    std::vector<int> h(2 * n);
    int k = 0;
    for (int ii = 0; ii < n; ++ii) {
        int i = idx[ii];
        while (k >= 2 && cross2(s[h[k - 2]], s[h[k - 1]], s[i]) <= 0) --k;
        h[k++] = i;
    }
    for (int ii = n - 2, lower = k + 1; ii >= 0; --ii) {
        int i = idx[ii];
        while (k >= lower && cross2(s[h[k - 2]], s[h[k - 1]], s[i]) <= 0) --k;
        h[k++] = i;
    }
    h.resize(k > 1 ? k - 1 : k);  // last point equals the first
    return h;
}

}  // namespace

PairResult calipers_diameter(const PointSet& s) {
    require(s.dim == 2, "calipers_diameter: d=2 only");
    require(s.size() >= 2, "calipers_diameter: need at least two points");
    auto h = hull_2d(s);
    const int m = static_cast<int>(h.size());
    PairResult best;
    double best2 = -1.0;
    auto consider = [&](int a, int b) {
        double d2 = (s[a] - s[b]).squaredNorm();
        if (d2 > best2) {
            best2 = d2;
            best.i = a;
            best.j = b;
        }
    };
    if (m <= 2) {
        consider(h[0], h[m - 1]);
        best.dist = std::sqrt(std::max(best2, 0.0));
        return best;
    }
    int j = 1;
    for (int i = 0; i < m; ++i) {
        int ni = (i + 1) % m;
        // advance j while the triangle area against edge (i, i+1) grows
        while (true) {
            int nj = (j + 1) % m;
            double cur = std::abs(cross2(s[h[i]], s[h[ni]], s[h[j]]));
            double nxt = std::abs(cross2(s[h[i]], s[h[ni]], s[h[nj]]));
            if (nxt > cur) {
                j = nj;
            } else {
                break;
            }
        }
        consider(h[i], h[j]);
        consider(h[ni], h[j]);
    }
    best.dist = std::sqrt(best2);
    return best;
}

PairResult exact_bcp(const PointSet& r, const PointSet& b) {
    require(r.size() > 0 && b.size() > 0, "exact_bcp: empty side");
    PairResult best;
    double best2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            double d2 = (r[i] - b[j]).squaredNorm();
            if (d2 < best2) {
                best2 = d2;
                best.i = static_cast<int>(i);
                best.j = static_cast<int>(j);
            }
        }
    best.dist = std::sqrt(best2);
    return best;
}

bool exact_membership(const HPolytope& p, const Vec& q, double tol) {
    for (const auto& h : p.faces())
        if (h.signed_dist(q) > tol) return false;
    return true;
}

double exact_distance_to_boundary(const HPolytope& p, const Vec& q) {
    if (exact_membership(p, q)) return 0.0;
    // Dykstra's alternating projection onto the halfspaces.
    const auto& faces = p.faces();
    const int m = static_cast<int>(faces.size());
    Vec x = q;
    std::vector<Vec> corr(m, Vec::Zero(p.dim()));
    const double tol = 1e-10;
    for (int sweep = 0; sweep < 10000; ++sweep) {
        double worst = 0.0;
        for (int i = 0; i < m; ++i) {
            Vec y = x + corr[i];
            double viol = faces[i].signed_dist(y);
            Vec xn = viol > 0 ? Vec(y - viol * faces[i].normal) : y;
            corr[i] = y - xn;
            x = xn;
        }
        for (int i = 0; i < m; ++i) worst = std::max(worst, faces[i].signed_dist(x));
        if (worst <= tol) break;
    }
    return (x - q).norm();
}

double sampled_hausdorff(const HPolytope& a, const HPolytope& b, int m) {
    require(a.contains_origin() && b.contains_origin(),
            "sampled_hausdorff: both bodies must contain the origin");
    auto dirs = direction_net(a.dim(), m);
    double worst = 0.0;
    for (const auto& u : dirs) {
        Vec pa = a.ray_shoot(u).t * u;
        Vec pb = b.ray_shoot(u).t * u;
        worst = std::max(worst, exact_distance_to_boundary(b, pa));
        worst = std::max(worst, exact_distance_to_boundary(a, pb));
    }
    return worst;
}

}  // namespace oracle
}  // namespace geomk
