#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace geomk {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Runtime dimension, 2..8.
inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 8;

// Thrown on contract violations (bad input, degeneracy, non-convergence).
class GeomError : public std::runtime_error {
public:
    explicit GeomError(const std::string& what) : std::runtime_error(what) {}
};

// Internal invariant failures (runtime-verified lemma checks tripping).
class InvariantError : public std::runtime_error {
public:
    explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw GeomError(msg);
}

inline void check_dim(int d) {
    require(d >= kMinDim && d <= kMaxDim, "dimension must be in [2,8], got " + std::to_string(d));
}

using Rng = std::mt19937_64;

// Uniform direction on S^{d-1}.
Vec random_unit(Rng& rng, int d);

// Deterministic quasi-uniform direction set on S^{d-1} (Halton + Box-Muller).
// Index-addressable so nets of any size are reproducible bit-for-bit.
// skip discards that many leading directions, giving disjoint nets.
std::vector<Vec> direction_net(int d, int count, int skip = 0);

// Log levels, controlled by GEOMK_LOG in {error,info,debug}.
enum class LogLevel { Error = 0, Info = 1, Debug = 2 };
LogLevel log_level();
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace geomk
