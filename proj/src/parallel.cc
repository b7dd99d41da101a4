#include "scrambled/parallel.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace scrambled {

namespace {
std::atomic<int> g_default_threads{0};
// Nested calls from inside a worker run serially.
thread_local bool t_in_worker = false;
}

int default_threads() {
    int t = g_default_threads.load();
    if (t > 0) return t;
    return std::max(1u, std::thread::hardware_concurrency());
}

void set_default_threads(int threads) {
    g_default_threads.store(std::max(0, threads));
}

void parallel_for(size_t n, const std::function<void(size_t)> &fn, int threads) {
    if (n == 0) return;
    size_t workers = static_cast<size_t>(threads > 0 ? threads : default_threads());
    workers = std::min(workers, n);
    if (workers <= 1 || t_in_worker) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    auto work = [&] {
        bool outer = t_in_worker;
        t_in_worker = true;
        while (!failed.load()) {
            size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
                failed.store(true);
            }
        }
        t_in_worker = outer;
    };
    std::vector<std::thread> pool;
    for (size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto &t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace scrambled
