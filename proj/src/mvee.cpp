#include "geomk/mvee.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace geomk {

namespace {

// Khachiyan multiplicative weights with Wolfe-Atwood away steps on the k x n
// point matrix Q. Returns M(u) = Q diag(u) Q^T once max_i q_i^T M^{-1} q_i
// <= k(1+tol).
Mat khachiyan_dense(const Mat& Q, const MveeOptions& opt, double* kappa_max_out) {
    const int k = static_cast<int>(Q.rows());
    const int n = static_cast<int>(Q.cols());
    require(n >= k, "mvee: need at least dim points");

    Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / n);
    const long max_iter = static_cast<long>(opt.max_iter_per_tol * k / opt.tol) + 100;

    Mat M(k, k);
    Eigen::VectorXd kappa(n);
    double kmax = 0;
    long iter = 0;
    for (;; ++iter) {
        if (iter >= max_iter)
            throw GeomError("mvee: no convergence after iteration cap, residual " +
                            std::to_string(kmax / k - 1.0));
        M = Q * u.asDiagonal() * Q.transpose();
        Eigen::LDLT<Mat> ldlt(M);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
            throw GeomError("mvee: weight matrix singular (degenerate input)");
        Mat Sol = ldlt.solve(Q);
        kappa = (Q.array() * Sol.array()).colwise().sum();

        int jmax = 0, jmin = -1;
        kmax = kappa.maxCoeff(&jmax);
        double kmin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (u[i] > 1e-12 && kappa[i] < kmin) {
                kmin = kappa[i];
                jmin = i;
            }
        }
        if (kmax <= k * (1.0 + opt.tol)) break;

        if (jmin >= 0 && (k - kmin) > (kmax - k) && kappa[jmin] > 1.0 + 1e-12) {
            // away step: shift weight off the most over-weighted point
            double beta = std::min(u[jmin] / (1.0 - u[jmin] + 1e-300),
                                   (k - kappa[jmin]) / (k * (kappa[jmin] - 1.0)));
            u *= (1.0 + beta);
            u[jmin] -= beta;
            if (u[jmin] < 0) u[jmin] = 0;
            u /= u.sum();
        } else {
            double beta = (kmax - k) / (k * (kmax - 1.0));
            u *= (1.0 - beta);
            u[jmax] += beta;
        }
    }
    if (kappa_max_out) *kappa_max_out = kmax;
    return Q * u.asDiagonal() * Q.transpose();
}

// Kumar-Yildirim style seed: greedily pick points extreme along directions
// orthogonal to the span of those already picked.
std::vector<int> ky_seed(const Mat& Q) {
    const int k = static_cast<int>(Q.rows());
    const int n = static_cast<int>(Q.cols());
    std::vector<int> picked;
    Mat basis(k, 0);
    for (int j = 0; j < k && static_cast<int>(picked.size()) < n; ++j) {
        Vec dir;
        if (basis.cols() == 0) {
            dir = Vec::Zero(k);
            dir[0] = 1.0;
        } else {
            // any direction orthogonal to the current span
            Eigen::HouseholderQR<Mat> qr(basis);
            Mat Qfull = qr.householderQ();
            dir = Qfull.col(basis.cols());
        }
        Eigen::VectorXd proj = (Q.transpose() * dir).cwiseAbs();
        int best = 0;
        proj.maxCoeff(&best);
        if (std::find(picked.begin(), picked.end(), best) == picked.end()) {
            picked.push_back(best);
            basis.conservativeResize(k, basis.cols() + 1);
            basis.col(basis.cols() - 1) = Q.col(best);
        }
    }
    return picked;
}

// Active-set driver: fit on a working subset, pull in the worst violators,
// repeat. Keeps per-iteration cost independent of n for large inputs.
Mat khachiyan(const Mat& Q, const MveeOptions& opt, double* kappa_max_out) {
    const int k = static_cast<int>(Q.rows());
    const int n = static_cast<int>(Q.cols());
    if (n <= 16 * k || n <= 64) return khachiyan_dense(Q, opt, kappa_max_out);

    std::vector<int> active = ky_seed(Q);
    // top up with a deterministic spread
    for (int i = 0; static_cast<int>(active.size()) < std::min(n, 4 * k); ++i) {
        int cand = static_cast<int>((static_cast<long>(i) * 2654435761u) % n);
        if (std::find(active.begin(), active.end(), cand) == active.end())
            active.push_back(cand);
    }

    for (int round = 0; round < 100; ++round) {
        Mat Qa(k, active.size());
        for (std::size_t i = 0; i < active.size(); ++i) Qa.col(i) = Q.col(active[i]);
        double kmax_sub = 0;
        MveeOptions sub_opt = opt;
        sub_opt.tol = opt.tol * 0.5;
        Mat M = khachiyan_dense(Qa, sub_opt, &kmax_sub);

        Eigen::LDLT<Mat> ldlt(M);
        Mat Sol = ldlt.solve(Q);
        Eigen::VectorXd kappa = (Q.array() * Sol.array()).colwise().sum();
        double kmax = kappa.maxCoeff();
        if (kmax <= k * (1.0 + opt.tol)) {
            if (kappa_max_out) *kappa_max_out = kmax;
            return M;
        }
        // add the worst violators
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::partial_sort(idx.begin(), idx.begin() + std::min(n, 2 * k), idx.end(),
                          [&](int a, int b) { return kappa[a] > kappa[b]; });
        bool grew = false;
        for (int i = 0; i < std::min(n, 2 * k); ++i) {
            if (kappa[idx[i]] <= k * (1.0 + opt.tol)) break;
            if (std::find(active.begin(), active.end(), idx[i]) == active.end()) {
                active.push_back(idx[i]);
                grew = true;
            }
        }
        if (!grew) {
            if (kappa_max_out) *kappa_max_out = kmax;
            return M;
        }
    }
    throw GeomError("mvee: active-set driver failed to converge");
}

}  // namespace

Ellipsoid mvee_central(const std::vector<Vec>& points, int dim, const MveeOptions& opt) {
    Mat Q(dim, points.size());
    for (std::size_t i = 0; i < points.size(); ++i) Q.col(i) = points[i];
    double kmax = 0;
    Mat M = khachiyan(Q, opt, &kmax);
    Mat A = M.ldlt().solve(Mat::Identity(dim, dim)) / kmax;
    return Ellipsoid(Vec::Zero(dim), 0.5 * (A + A.transpose()));
}

Ellipsoid mvee(const std::vector<Vec>& points, int dim, const MveeOptions& opt) {
    const int k = dim + 1;
    Mat Q(k, points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        Q.col(i).head(dim) = points[i];
        Q(dim, i) = 1.0;
    }
    double kmax = 0;
    Mat M = khachiyan(Q, opt, &kmax);
    Mat X = M.topLeftCorner(dim, dim);
    Vec c = M.topRightCorner(dim, 1);
    // (p_i - c)^T (X - c c^T)^{-1} (p_i - c) = kappa_i - 1 <= kmax - 1
    Mat S = X - c * c.transpose();
    Mat A = S.ldlt().solve(Mat::Identity(dim, dim)) / (kmax - 1.0);
    return Ellipsoid(c, 0.5 * (A + A.transpose()));
}

Ellipsoid inscribed_ellipsoid_sym(const std::vector<std::pair<Vec, double>>& slabs,
                                  const Vec& x, const MveeOptions& opt) {
    const int d = static_cast<int>(x.size());
    require(!slabs.empty(), "inscribed_ellipsoid_sym: empty slab system");
    Mat Q(d, slabs.size());
    for (std::size_t i = 0; i < slabs.size(); ++i) {
        require(slabs[i].second > 0, "inscribed_ellipsoid_sym: nonpositive slab half-width");
        Q.col(i) = slabs[i].first / slabs[i].second;
    }
    double kmax = 0;
    Mat M;
    try {
        // A rank-deficient normal system is exactly the unbounded-slab case.
        M = khachiyan(Q, opt, &kmax);
    } catch (const GeomError& e) {
        throw GeomError(std::string("inscribed_ellipsoid_sym: ") + e.what());
    }
    // The central MVEE of the polar points has shape M^{-1}/kmax; dualizing
    // gives the inscribed ellipsoid of the slab body, shape kmax·M.
    Mat A = kmax * M;
    return Ellipsoid(x, 0.5 * (A + A.transpose()));
}

}  // namespace geomk
