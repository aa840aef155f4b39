#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace cvchar {

// run fn(i) for i in [0, n) on up to `workers` threads; deterministic work
// assignment (contiguous blocks), first exception rethrown
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    workers = std::clamp(workers, 1, n > 0 ? n : 1);
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace cvchar
