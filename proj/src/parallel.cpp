#include "banachlab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace banachlab::par {

namespace {
std::atomic<bool> g_parallel{true};

int env_thread_cap() {
    const char* s = std::getenv("BANACHLAB_THREADS");
    if (!s) return 0;
    try {
        int v = std::stoi(s);
        return v > 0 ? v : 1;
    } catch (...) {
        return 0;
    }
}
} // namespace

int max_threads() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    int cap = env_thread_cap();
    if (cap > 0 && cap < n) n = cap;
    return n < 1 ? 1 : n;
}

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }

void set_parallel_enabled(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

} // namespace banachlab::par
