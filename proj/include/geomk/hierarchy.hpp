#pragma once

#include "geomk/macbeath.hpp"

namespace geomk {

// Derived constants of a canonical body. Delta0 is the depth budget that
// keeps every lemma constraint satisfiable at once: the binding one is that
// a shadow of width c1*delta, blown up by 2/gamma, must stay below gamma/4,
// giving Delta0 = 3 gamma^2 / 16 (< gamma/2).
struct Constants {
    double gamma = 0.0;
    double lambda0 = 0.0;  // 1/(20d)
    double Delta0 = 0.0;   // 3 gamma^2 / 16
    double c1 = 0.0;       // 8/(3 gamma)
    double c2 = 0.0;       // 160/(3 gamma^2)
    double c3 = 0.0;       // per-build shadow-kernel constant (set by callers)

    static Constants for_gamma(double gamma, int dim, double c3 = 0.0);
};

// A larger Macbeath scale for bootstrap-style hierarchies: node counts drop
// by the square of the ratio to 1/(20d) while every containment the builder
// verifies still holds. The binding constraints are lambda <= 1/5 (a region
// meeting an accepted region stays inside the 4x expansion) and
// 4*lambda*d*(1+tol) <= 1 (the stored covering ellipsoid stays in the body).
double coarse_lambda(int dim);

struct DagNode {
    int level = 0;
    Vec center;          // on the boundary of P(Delta_i)
    Ellipsoid ell;       // E^{4 lambda0 sqrt(d)}(x), the covering ellipsoid
    Ellipsoid ell_small; // E^{lambda0}(x), the packing ellipsoid
    std::vector<int> children;
    int leaf_halfspace = -1;  // face index of P (absolute membership mode)
    int leaf_sub = -1;        // sub-index id (bootstrapped mode)
};

struct LevelStats {
    int candidates = 0;
    int accepted = 0;
    int repairs = 0;
};

struct Dag {
    std::vector<DagNode> nodes;
    std::vector<std::vector<int>> levels;  // node ids per level 0..ell
    std::vector<double> deltas;            // Delta_i per level
    std::vector<LevelStats> stats;
    double delta_target = 0.0;
    int max_degree = 0;

    int depth() const { return static_cast<int>(levels.size()) - 1; }

    struct DescendResult {
        int leaf = -1;
        int visited = 0;   // nodes on the root-to-leaf path, root included
        bool fallback = false;  // a level scan was needed (coverage miss)
    };
    // Walk from the root to a leaf whose ellipsoid meets the ray {t u, t>=0}.
    DescendResult descend(const Vec& u) const;
};

struct LevelResult {
    std::vector<Vec> centers;
    std::vector<MacbeathEllipsoid> fits;  // one per center, at lambda0
    LevelStats stats;
};

// One hierarchy level: centers on the boundary of P(delta) whose lambda0
// Macbeath regions are pairwise disjoint and whose 4*lambda0*sqrt(d)
// ellipsoids cover that boundary. Candidates come from a deterministic
// direction net; a verify-and-repair sweep inserts centers for any sampled
// boundary point left uncovered (such a point is provably disjoint from all
// accepted regions, so insertion keeps the packing property).
LevelResult build_level(const HPolytope& p, double delta, const Constants& k,
                        int threads = 0);

// Levels i = 0..ell with Delta_i = Delta0/2^i, ell minimal with
// Delta_ell <= delta_target. Children: v at level i+1 is linked to u at
// level i when the direction cones of their bounding balls overlap, which
// over-approximates "some origin ray meets both ellipsoids".
Dag build_dag(const HPolytope& p, double delta_target, const Constants& k,
              int threads = 0);

// Store with each leaf the face of p supporting the boundary point hit by
// the ray through the leaf center.
void attach_leaf_halfspaces(Dag& dag, const HPolytope& p);

}  // namespace geomk
