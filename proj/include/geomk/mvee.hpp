#pragma once

#include "geomk/core.hpp"

namespace geomk {

// Khachiyan multiplicative-weights ellipsoid fitting.

struct MveeOptions {
    double tol = 1e-3;          // relative tolerance on the optimality measure
    int max_iter_per_tol = 10;  // iteration cap = max_iter_per_tol * dim / tol
};

// Minimum-volume origin-centered ellipsoid of the symmetric set {±q_i}.
// Returns E ⊇ conv{±q_i} with E/sqrt(d(1+tol)) ⊆ conv{±q_i}.
Ellipsoid mvee_central(const std::vector<Vec>& points, int dim, const MveeOptions& opt = {});

// General minimum-volume enclosing ellipsoid (lifted Khachiyan).
// Returns E ⊇ conv(points); the concentric copy shrunk by d(1+tol) is
// contained in conv(points) (John).
Ellipsoid mvee(const std::vector<Vec>& points, int dim, const MveeOptions& opt = {});

// Maximum-volume inscribed ellipsoid of the symmetric slab body
//   {y : |a_i·(y-x)| <= w_i},
// by polarity: the polar of the slab body is conv{±a_i/w_i}, whose central
// MVEE dualizes to the inscribed ellipsoid. Satisfies
//   E_in ⊆ M  and  M ⊆ sqrt(d)(1+tol)·E_in   (scaling about x).
Ellipsoid inscribed_ellipsoid_sym(const std::vector<std::pair<Vec, double>>& slabs,
                                  const Vec& x, const MveeOptions& opt = {});

}  // namespace geomk
