#include "imc/parallel.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace imc::detail {

int worker_count() {
    int n = 0;
    if (const char* env = std::getenv("IMC_THREADS")) {
        n = std::atoi(env);
        if (n < 0) n = 0;
    }
    if (n == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        n = hw > 0 ? static_cast<int>(hw) : 1;
    }
    return n;
}

void parallel_for(int n, const std::function<void(int)>& fn, int min_per_worker) {
    int workers = worker_count();
    if (workers > 1 && min_per_worker > 0) workers = std::min(workers, n / min_per_worker);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int begin = w * chunk;
        const int end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] {
            for (int i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace imc::detail
