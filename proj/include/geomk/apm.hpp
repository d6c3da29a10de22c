#pragma once

#include "geomk/canonical.hpp"
#include "geomk/hierarchy.hpp"

#include <string>

namespace geomk {

// Approximate polytope membership. A query q gets a verdict that is exact
// for points of P (inside is never rejected) and never accepts a point
// farther than eps from P; the band in between may resolve either way.

enum class ApmMode { Absolute = 0, Bootstrapped = 1 };

struct ApmStats {
    std::size_t input_faces = 0;
    std::size_t pruned_faces = 0;
    std::size_t nodes = 0;        // this index's DAG only
    std::size_t total_nodes = 0;  // including every sub-index
    int levels = 0;
    std::size_t sub_indices = 0;
    std::size_t trivial_leaves = 0;
};

// Per-leaf payload of a bootstrapped index, parallel to dag.levels.back().
struct ApmLeaf {
    int sub = -1;                    // index into ApmIndex::subs
    Vec box_lo, box_hi;              // clipping hyperrectangle R
    bool trivially_outside = false;  // clipped body had empty interior
};

struct ApmIndex {
    AffineMap map;      // original -> canonical coordinates of this index
    HPolytope pruned;   // the polytope the index answers for (canonical)
    ApmMode mode = ApmMode::Absolute;
    Dag dag;
    std::vector<ApmLeaf> leaves;  // bootstrapped mode only
    std::vector<ApmIndex> subs;   // one bootstrap round fewer each
    double eps = 0.0;
    double delta = 0.0;  // DAG depth target actually used
    double beta = 1.0;   // bootstrap exponent; after k rounds 1/(k+1)
    int rounds = 0;
    double gamma = 0.0;
    double lambda0 = 0.0;  // Macbeath scale used for this DAG's regions;
                           // set on build only (0 after load), used by
                           // structural audits
    ApmStats stats;
};

struct QueryVerdict {
    bool inside = false;
    int path_length = 0;  // nodes visited across every recursion level, >= 2
};

// Membership structure answering within an absolute band: canonicalize,
// build the hierarchy down to delta = eps * gamma / (2 c1) (= eps * Delta0),
// and store with each leaf the supporting face hit by its center ray.
ApmIndex build_absolute_apm(const HPolytope& p, double eps);

// Descend on q's direction; the verdict is the leaf's halfspace test.
// Exact for q in P; any accepted q is within eps of P.
QueryVerdict query_absolute(const ApmIndex& idx, const Vec& q_original);

// Full construction. rounds = 0: prune to O(1/eps^{(d-1)/2}) faces and build
// the absolute structure on the pruned body. rounds >= 1: a coarse top
// hierarchy whose leaves each carry the enclosing box R of the leaf's 4/gamma
// Macbeath ellipsoid and a sub-index for the pruned body clipped to R, built
// with one round fewer. Sub-index rejections are exact (the point is outside
// a face of the clipped body); acceptances are confirmed against the pruned
// face list, so both soundness directions hold with zero tolerance.
ApmIndex build_apm(const HPolytope& p, double eps, int rounds = 1);

// Segment test first: descend, take y = exit of the ray through the leaf
// ellipsoid; |q| <= |y| is inside outright. Otherwise the leaf resolves:
// halfspace test (absolute) or clip-box routing into the sub-index
// (bootstrapped), with path_length accumulated across recursion.
QueryVerdict query(const ApmIndex& idx, const Vec& q_original);

// Binary index persistence ("APMX", version, little-endian doubles); layout
// in docs/index-format.md. Loading validates magic, version and dimension.
void save_apm(const std::string& path, const ApmIndex& idx);
ApmIndex load_apm(const std::string& path);

}  // namespace geomk
