#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace momnoise {

/// Run fn(i) for i in [0, count) on up to `threads` workers (hardware
/// concurrency by default). Results must be written to disjoint slots by
/// index; the first exception thrown by any worker is rethrown here.
inline void parallel_for(int count, const std::function<void(int)>& fn, int threads = 0) {
    if (count <= 0) return;
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min(workers, count);
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }

    std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (int i = w; i < count; i += workers) fn(i);
            } catch (...) {
                errors[static_cast<size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

}  // namespace momnoise
