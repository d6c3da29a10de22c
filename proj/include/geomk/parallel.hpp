#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace geomk {

// Process-wide default for parallel_for callers passing threads <= 0.
// 0 means "use hardware concurrency". Results never depend on this; it is
// purely a resource knob.
void set_default_threads(int threads);
int default_threads();

// Deterministic parallel index loop: work items are addressed by index and
// must write only to their own slots, so the result is identical for any
// thread count. Exceptions are rethrown on the calling thread.
template <typename F>
void parallel_for(std::size_t n, int threads, F&& body) {
    if (threads <= 0) threads = default_threads();
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (threads == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::once_flag err_once;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::call_once(err_once, [&] { err = std::current_exception(); });
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads - 1; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace geomk
