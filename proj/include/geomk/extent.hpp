#pragma once

#include "geomk/apm.hpp"
#include "geomk/kernel.hpp"

namespace geomk {

// Extent applications built on the kernel and membership machinery:
// approximate diameter, directional-width queries, well-separated
// approximate nearest neighbor, and bichromatic closest pair.

struct DiameterResult {
    int i = -1;
    int j = -1;
    double dist = 0.0;
};

// Farthest-pair approximation: the extreme pair of an eps/3-kernel along
// each direction of a deterministic net. The result is an actual input pair
// (so dist <= diam(S)) with dist >= (1 - eps) * diam(S).
DiameterResult diameter(const PointSet& s, double eps);

// Directional-width queries over the polar of conv(S): for a direction v,
// width_v(S) = |w| * (h(u) + h(-u)) with w the canonical covector of v and
// h(u) = polar_scale / (exit length of the ray u through the polar body).
struct WidthIndex {
    AffineMap map;            // original -> canonical point coordinates
    double gamma = 0.0;       // canonical fatness of the point set
    double polar_scale = 0.0; // polar stored as {y : s_i . y <= polar_scale}
    HPolytope polar;          // pruned polar body, canonical coordinates
    ApmIndex apm;             // membership structure over the polar body
    Vec center;               // interior evaluation point (the origin)
    double eps = 0.0;
};

WidthIndex width_build(const PointSet& s, double eps);
// Returned value is within a factor 1 +- eps of the exact directional width;
// value(v) == value(-v) exactly (the same two ray resolutions, swapped).
double width_query(const WidthIndex& idx, const Vec& v);

// sigma-well-separated approximate nearest neighbor: queries must keep a
// distance of at least sigma * r from the bounding box of S (side r). Build
// lifts the points to the paraboloid in dimension d+1 and keeps a kernel
// subset of the lift; the subset's exact nearest neighbor is then within a
// factor 1 + eps of the true one for every well-separated query.
struct WsannIndex {
    PointSet pts;             // the input points
    std::vector<int> subset;  // indices surviving the lifted kernel
    Vec box_lo, box_hi;       // bounding box of S
    double r = 0.0;           // box side (largest extent)
    double sigma = 0.0;
    double eps = 0.0;
};

WsannIndex wsann_build(const PointSet& s, double sigma, double eps);
// Returns an index into the input set; throws if q violates the separation
// contract.
int wsann_query(const WsannIndex& idx, const Vec& q);

struct BcpResult {
    int i = -1;  // red index
    int j = -1;  // blue index
    double dist = 0.0;
    double estimate = 0.0;  // stage-1 estimate a, with bcp <= a < 2 * bcp
};

// Bichromatic closest pair: a randomly-shifted-grid doubling sieve localizes
// the scale and yields the estimate a, then a grid partition of the red
// points at cell diameter a/4 answers per-blue annulus queries (brute force
// in light cells, nearest-neighbor indices in heavy ones). The returned pair
// satisfies dist <= (1 + eps) * exact.
BcpResult bcp(const PointSet& red, const PointSet& blue, double eps, std::uint64_t seed);

}  // namespace geomk
