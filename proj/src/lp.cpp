#include "geomk/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace geomk {

namespace {

constexpr double kEps = 1e-9;

struct SeidelProblem {
    std::vector<LpConstraint> cons;
    Vec c;
    double box;
};

LpResult seidel(const SeidelProblem& p, Rng& rng);

// Restrict the problem to the hyperplane a·x = b and solve in dimension d-1.
// Returns the lifted solution.
LpResult solve_on_hyperplane(const SeidelProblem& p, std::size_t ncons,
                             const Vec& a, double b, Rng& rng) {
    const int d = static_cast<int>(p.c.size());
    int k = 0;
    a.cwiseAbs().maxCoeff(&k);
    if (std::abs(a[k]) < 1e-14) return {LpStatus::Infeasible, Vec(), 0.0};

    // x_k = (b - sum_{j!=k} a_j x_j) / a_k
    auto reduce_vec = [&](const Vec& v) {
        Vec r(d - 1);
        int idx = 0;
        for (int j = 0; j < d; ++j)
            if (j != k) r[idx++] = v[j] - v[k] * a[j] / a[k];
        return r;
    };

    SeidelProblem sub;
    sub.box = p.box;
    sub.c = reduce_vec(p.c);
    double c_shift = p.c[k] * b / a[k];
    sub.cons.reserve(ncons + 2);
    for (std::size_t i = 0; i < ncons; ++i) {
        const auto& ci = p.cons[i];
        Vec ra = reduce_vec(ci.a);
        double rb = ci.b - ci.a[k] * b / a[k];
        if (ra.cwiseAbs().maxCoeff() < 1e-14) {
            if (rb < -kEps) return {LpStatus::Infeasible, Vec(), 0.0};
            continue;
        }
        sub.cons.push_back({std::move(ra), rb});
    }
    // Box bounds on the eliminated variable become ordinary constraints:
    // |x_k| <= box  ->  +-(b - sum a_j x_j)/a_k <= box
    {
        Vec ra(d - 1);
        int idx = 0;
        for (int j = 0; j < d; ++j)
            if (j != k) ra[idx++] = -a[j] / a[k];
        sub.cons.push_back({ra, p.box - b / a[k]});
        sub.cons.push_back({-ra, p.box + b / a[k]});
    }

    LpResult r = seidel(sub, rng);
    if (r.status == LpStatus::Infeasible) return r;
    Vec x(d);
    int idx = 0;
    double xk = b / a[k];
    for (int j = 0; j < d; ++j) {
        if (j == k) continue;
        x[j] = r.x[idx];
        xk -= a[j] * r.x[idx] / a[k];
        ++idx;
    }
    x[k] = xk;
    LpResult out;
    out.status = LpStatus::Optimal;
    out.x = std::move(x);
    out.value = r.value + c_shift;
    (void)c_shift;
    out.value = p.c.dot(out.x);
    return out;
}

LpResult seidel_1d(const SeidelProblem& p) {
    double lo = -p.box, hi = p.box;
    for (const auto& c : p.cons) {
        double a = c.a[0];
        if (std::abs(a) < 1e-14) {
            if (c.b < -kEps) return {LpStatus::Infeasible, Vec(), 0.0};
            continue;
        }
        if (a > 0) hi = std::min(hi, c.b / a);
        else lo = std::max(lo, c.b / a);
    }
    if (lo > hi + kEps) return {LpStatus::Infeasible, Vec(), 0.0};
    if (lo > hi) lo = hi = 0.5 * (lo + hi);
    LpResult r;
    r.status = LpStatus::Optimal;
    r.x = Vec(1);
    r.x[0] = (p.c[0] >= 0) ? hi : lo;
    r.value = p.c[0] * r.x[0];
    return r;
}

LpResult seidel(const SeidelProblem& p, Rng& rng) {
    const int d = static_cast<int>(p.c.size());
    if (d == 1) return seidel_1d(p);

    std::vector<std::size_t> order(p.cons.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    SeidelProblem work;
    work.c = p.c;
    work.box = p.box;
    work.cons.reserve(p.cons.size());

    Vec x(d);
    for (int j = 0; j < d; ++j) x[j] = (p.c[j] >= 0) ? p.box : -p.box;

    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& ci = p.cons[order[i]];
        work.cons.push_back(ci);
        double scale = std::max(1.0, ci.a.cwiseAbs().maxCoeff() * p.box);
        if (ci.a.dot(x) <= ci.b + kEps * scale) continue;
        LpResult r = solve_on_hyperplane(work, work.cons.size() - 1, ci.a, ci.b, rng);
        if (r.status == LpStatus::Infeasible) return r;
        x = r.x;
    }
    LpResult out;
    out.status = LpStatus::Optimal;
    out.x = x;
    out.value = p.c.dot(x);
    return out;
}

}  // namespace

LpResult lp_maximize(const std::vector<LpConstraint>& constraints, const Vec& c,
                     double box, std::uint64_t seed) {
    SeidelProblem p{constraints, c, box};
    Rng rng(seed);
    LpResult r = seidel(p, rng);
    if (r.status == LpStatus::Optimal) {
        for (int j = 0; j < c.size(); ++j) {
            if (std::abs(std::abs(r.x[j]) - box) < 1e-6 * box) {
                // box active: only meaningful to callers that care
                if (std::abs(c[j]) > 1e-12) r.status = LpStatus::Unbounded;
            }
        }
        if (r.status == LpStatus::Unbounded) return r;
    }
    return r;
}

std::pair<Vec, double> chebyshev_center(const std::vector<LpConstraint>& constraints, int dim) {
    // vars (x, r), maximize r with a_i·x + |a_i| r <= b_i
    std::vector<LpConstraint> cons;
    cons.reserve(constraints.size());
    for (const auto& c : constraints) {
        Vec a(dim + 1);
        a.head(dim) = c.a;
        a[dim] = c.a.norm();
        cons.push_back({a, c.b});
    }
    Vec obj = Vec::Zero(dim + 1);
    obj[dim] = 1.0;
    LpResult r = lp_maximize(cons, obj, 1e6);
    if (r.status == LpStatus::Infeasible) return {Vec::Zero(dim), -1.0};
    return {r.x.head(dim), r.x[dim]};
}

double interior_margin(const std::vector<LpConstraint>& constraints, int dim) {
    std::vector<LpConstraint> cons;
    cons.reserve(constraints.size());
    for (const auto& c : constraints) {
        Vec a(dim + 1);
        a.head(dim) = c.a;
        a[dim] = 1.0;
        cons.push_back({a, c.b});
    }
    Vec obj = Vec::Zero(dim + 1);
    obj[dim] = 1.0;
    LpResult r = lp_maximize(cons, obj, 1e6);
    if (r.status == LpStatus::Infeasible) return -1e6;
    return r.x[dim];
}

double lp_support(const std::vector<LpConstraint>& constraints, const Vec& u, double box) {
    LpResult r;
    for (std::uint64_t k = 0; k < 3; ++k) {
        r = lp_maximize(constraints, u, box, 0x5eede1 + k);
        if (r.status != LpStatus::Infeasible) break;
    }
    if (r.status == LpStatus::Infeasible)
        throw GeomError("lp_support: empty polytope");
    if (r.status == LpStatus::Unbounded)
        throw GeomError("lp_support: unbounded in direction");
    return r.value;
}

}  // namespace geomk
