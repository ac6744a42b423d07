#include "cqed/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cqed {

namespace {
thread_local bool inside_parallel_region = false;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads) {
    if (n == 0) return;
    unsigned want = threads == 0 ? std::thread::hardware_concurrency() : threads;
    if (want == 0) want = 1;
    want = static_cast<unsigned>(std::min<std::size_t>(want, n));

    if (want <= 1 || inside_parallel_region) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        inside_parallel_region = true;
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                break;
            }
        }
        inside_parallel_region = false;
    };

    std::vector<std::thread> pool;
    pool.reserve(want - 1);
    for (unsigned k = 1; k < want; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    if (error) std::rethrow_exception(error);
}

}  // namespace cqed
