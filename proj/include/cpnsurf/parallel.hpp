#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace cpnsurf {

/// Worker count: explicit request if positive, else $CPNSURF_JOBS, else hardware concurrency.
inline unsigned resolve_jobs(int requested)
{
    if (requested > 0) return static_cast<unsigned>(requested);
    if (char const* env = std::getenv("CPNSURF_JOBS")) {
        try {
            int const v = std::stoi(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (std::exception const&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(i) for i in [0, count) on a pool of `jobs` threads; results stay in index order.
/// The first exception thrown by any task is rethrown after all workers join.
template <typename Result, typename Fn>
std::vector<Result> parallel_map(std::size_t count, unsigned jobs, Fn&& fn)
{
    std::vector<Result> out(count);
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    {
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (unsigned w = 0; w < jobs; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < count; i = next++) out[i] = fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                    next = count;
                }
            });
        }
    }
    for (auto const& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace cpnsurf
