#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dclt {

// Runs body(i) for every i in [0, count) on up to `jobs` threads. Work is
// handed out by index, so any result written to slot i is independent of the
// thread count. The first exception thrown by a worker is rethrown.
template<class Body>
void parallel_for(std::size_t count, unsigned jobs, Body&& body)
{
    unsigned const workers
        = static_cast<unsigned>(std::min<std::size_t>(std::max(jobs, 1u), count));
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
        {
            body(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++)
        {
            try
            {
                body(i);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                {
                    failure = std::current_exception();
                }
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
    {
        pool.emplace_back(worker);
    }
    pool.clear();
    if (failure)
    {
        std::rethrow_exception(failure);
    }
}

}  // namespace dclt
