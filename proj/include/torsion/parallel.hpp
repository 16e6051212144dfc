#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace torsion {

/// Process-wide worker cap set by the CLI --threads flag; 0 means serial.
inline int& worker_cap() {
    static int cap = 0;
    return cap;
}

/// Static-chunked parallel loop. Each index writes only its own slot in the
/// caller's output, so the result is identical for every thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const int cap = worker_cap();
    const std::size_t workers =
        cap > 1 ? std::min<std::size_t>(static_cast<std::size_t>(cap), n) : 1;
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

} // namespace torsion
