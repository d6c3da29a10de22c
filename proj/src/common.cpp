#include "geomk/common.hpp"

#include "geomk/parallel.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <mutex>

namespace geomk {

Vec random_unit(Rng& rng, int d) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(d);
    double n2 = 0;
    do {
        for (int i = 0; i < d; ++i) v[i] = gauss(rng);
        n2 = v.squaredNorm();
    } while (n2 < 1e-300);
    return v / std::sqrt(n2);
}

namespace {

constexpr int kPrimes[16] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double halton(std::uint64_t index, int base) {
    double f = 1.0, r = 0.0;
    std::uint64_t i = index;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

}  // namespace

std::vector<Vec> direction_net(int d, int count, int skip) {
    check_dim(d);
    // Box-Muller needs pairs; use an even number of Halton coordinates.
    const int pairs = (d + 1) / 2;
    std::vector<Vec> out;
    out.reserve(count + skip);
    std::uint64_t idx = 1;  // skip the all-zero point
    while (static_cast<int>(out.size()) < count + skip) {
        Vec v(d);
        bool ok = true;
        for (int p = 0; p < pairs; ++p) {
            double u1 = halton(idx, kPrimes[2 * p]);
            double u2 = halton(idx, kPrimes[2 * p + 1]);
            if (u1 < 1e-12) { ok = false; break; }
            double r = std::sqrt(-2.0 * std::log(u1));
            double g1 = r * std::cos(2.0 * M_PI * u2);
            double g2 = r * std::sin(2.0 * M_PI * u2);
            v[2 * p] = g1;
            if (2 * p + 1 < d) v[2 * p + 1] = g2;
        }
        ++idx;
        if (!ok) continue;
        double n = v.norm();
        if (n < 1e-12) continue;
        out.push_back(v / n);
    }
    if (skip > 0) out.erase(out.begin(), out.begin() + skip);
    return out;
}

LogLevel log_level() {
    static LogLevel lvl = [] {
        const char* env = std::getenv("GEOMK_LOG");
        if (env == nullptr) return LogLevel::Error;
        if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
        if (std::strcmp(env, "info") == 0) return LogLevel::Info;
        return LogLevel::Error;
    }();
    return lvl;
}

namespace {
std::mutex g_log_mutex;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::Info) {
        std::lock_guard<std::mutex> lock(g_log_mutex);
        std::cerr << "[geomk] " << msg << "\n";
    }
}

void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::Debug) {
        std::lock_guard<std::mutex> lock(g_log_mutex);
        std::cerr << "[geomk:debug] " << msg << "\n";
    }
}

}  // namespace geomk

namespace geomk {

namespace {
std::atomic<int> g_default_threads{0};
}

void set_default_threads(int threads) { g_default_threads.store(threads); }
int default_threads() { return g_default_threads.load(); }

}  // namespace geomk
