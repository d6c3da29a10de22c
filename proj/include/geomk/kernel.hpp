#pragma once

#include "geomk/canonical.hpp"
#include "geomk/hierarchy.hpp"

namespace geomk {

// Subset selection that preserves every directional width up to a factor
// 1 - eps, with the Dudley-style base construction and the bootstrapped
// shadow-decomposition algorithm on top of the ellipsoid hierarchy.

struct KernelStats {
    std::size_t input_size = 0;
    std::size_t discarded = 0;  // points assigned to no shadow
    std::size_t leaves = 0;     // leaf groups that received points
    int rounds_used = 0;
    std::vector<double> delta_schedule;  // outermost round first
};

struct KernelResult {
    std::vector<int> subset;  // sorted unique indices into the input set
    double eps = 0.0;
    KernelStats stats;
};

struct BootstrapConfig {
    int rounds = 2;               // recursion depth of the shadow decomposition
    double base_eps_floor = 0.5;  // at eps >= this, run the base construction directly
};

// Dudley's construction over a canonical point set: snap to a grid of cell
// diameter eps/4, place a deterministic direction net on the sphere of
// radius 2, keep the nearest snapped representative per sphere sample.
KernelResult base_kernel(const PointSet& s, double eps);

// Inner halfspace approximation of conv(s) for canonical s: supporting
// halfspaces of a base-kernel hull over a dense direction net, pruned to
// O(1/delta^{(d-1)/2}) faces through the dual-side kernel, then translated
// inward by a measured overshoot bound so that P is certified to lie inside
// conv(s) with Hausdorff distance <= delta.
HPolytope hull_to_hrep(const PointSet& s, double delta);

// Outer halfspace approximation keeping a subset of p's faces: the faces
// whose dual points survive a base kernel on the polar point set. P' >= p
// always; Hausdorff(p, P') <= eps is certified by sampled support
// differences (falls back to returning p unchanged if certification fails).
HPolytope prune_hrep(const HPolytope& p, double eps);

struct ShadowAssignment {
    // parallel to dag.levels.back(): input indices grouped per leaf
    std::vector<std::vector<int>> per_leaf;
    std::vector<int> discarded;
    // points whose descent found no covering ellipsoid; kept verbatim in the
    // output subset (always safe, only costs size)
    std::vector<int> unrouted;
};

// Route each point to the leaf found by descending on its direction and keep
// it only if the segment from the origin to the point meets the leaf
// ellipsoid (the shadow test). Points failing the test are deep interior.
ShadowAssignment assign_to_shadows(const PointSet& s, const Dag& dag);

// Full construction: canonicalize, build the hierarchy over an inner
// halfspace approximation at delta = eps^{1/3} (clamped to the depth
// budget), split the points among the leaf shadows, and recurse per shadow
// with parameter c3*eps/delta and one round fewer.
KernelResult build_kernel(const PointSet& s, double eps, const BootstrapConfig& cfg = {});

}  // namespace geomk
