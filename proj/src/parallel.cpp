#include "levy2b/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace levy2b {

int worker_count() {
    int cap = 0;
    if (const char* env = std::getenv("LEVY2B_THREADS")) cap = std::atoi(env);
    if (cap <= 0) cap = static_cast<int>(std::thread::hardware_concurrency());
    return std::max(1, cap);
}

void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t)>& chunk_fn) {
    if (n <= 0) return;
    int workers = worker_count();
    if (workers == 1 || n < 2 * workers) {
        chunk_fn(0, n);
        return;
    }
    std::int64_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        std::int64_t begin = w * chunk;
        std::int64_t end = std::min<std::int64_t>(begin + chunk, n);
        if (begin >= end) break;
        threads.emplace_back([&chunk_fn, begin, end] { chunk_fn(begin, end); });
    }
    for (auto& t : threads) t.join();
}

}  // namespace levy2b
