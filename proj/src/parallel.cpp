#include "specbranch/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace specbranch {

unsigned worker_count()
{
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("SPECTRAL_BRANCH_THREADS")) {
        try {
            const long value = std::stol(cap);
            if (value >= 1) workers = std::min(workers, static_cast<unsigned>(value));
        } catch (const std::exception&) {
            // unparsable cap: ignore
        }
    }
    return workers;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body)
{
    const std::size_t workers = std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& thread : pool) thread.join();
    for (auto& error : errors) {
        if (error) std::rethrow_exception(error);
    }
}

} // namespace specbranch
