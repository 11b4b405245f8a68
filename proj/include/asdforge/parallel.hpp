#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace asdforge {

/// Degree of parallelism, taken from ASDFORGE_WORKERS (default 1). Results of
/// parallel loops are index-addressed, so worker count never affects output.
inline int worker_count() {
    const char* env = std::getenv("ASDFORGE_WORKERS");
    if (env == nullptr) return 1;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) return 1;
    return static_cast<int>(v > 256 ? 256 : v);
}

/// Runs fn(i) for i in [lo, hi) across workers in contiguous chunks. fn must
/// only write to slots it owns (e.g. the i-th element of a pre-sized vector).
template <typename Fn>
void parallel_for(long lo, long hi, Fn&& fn, int workers = worker_count()) {
    long count = hi - lo;
    if (count <= 0) return;
    if (workers <= 1 || count < 2 * workers) {
        for (long i = lo; i < hi; ++i) fn(i);
        return;
    }
    long chunk = (count + workers - 1) / workers;
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        long a = lo + w * chunk;
        long b = std::min(hi, a + chunk);
        if (a >= b) break;
        threads.emplace_back([a, b, &fn] {
            for (long i = a; i < b; ++i) fn(i);
        });
    }
    for (auto& t : threads) t.join();
}

}  // namespace asdforge
