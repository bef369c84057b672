#include "tps/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace tps {

std::size_t thread_budget() {
    if (const char* env = std::getenv("TPS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<std::size_t>(v);
        return 1;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

namespace {
thread_local bool g_inside_parallel = false;
}

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t budget = thread_budget();
    // Nested regions run inline; the outermost level owns the pool.
    if (g_inside_parallel || budget <= 1 || n == 1) {
        fn(0, n);
        return;
    }

    const std::size_t workers = std::min(budget, n);
    const std::size_t chunk = (n + workers - 1) / workers;

    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, w, begin, end] {
            g_inside_parallel = true;
            try {
                fn(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
            g_inside_parallel = false;
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace tps
