#include "dostrace/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace dostrace::parallel {

namespace {
std::atomic<int> g_workers{0};
}

int workers() {
    int w = g_workers.load();
    if (w > 0) return w;
    if (const char* env = std::getenv("DOSTRACE_WORKERS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void set_workers(int n) { g_workers.store(n); }

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
    if (n <= 0) return;
    int nw = workers();
    if (nw <= 1 || n == 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (nw > n) nw = static_cast<int>(n);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    std::int64_t chunk = (n + nw - 1) / nw;
    for (int w = 0; w < nw; ++w) {
        std::int64_t lo = w * chunk;
        std::int64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace dostrace::parallel
