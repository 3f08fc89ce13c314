// parallel.hpp
// Deterministic trial fan-out: results land in a vector indexed by trial, so
// any later reduction runs in fixed trial order no matter how many workers
// executed the trials.

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace qpqlab {

// Evaluates fn(0..count-1) with `workers` threads. fn must derive all its
// randomness from the index it is given.
template <typename T, typename Fn>
std::vector<T> run_indexed(std::size_t count, unsigned workers, Fn&& fn) {
    std::vector<T> results(count);
    if (count == 0) return results;
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }

    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> threads;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = static_cast<std::size_t>(w) * chunk;
        if (begin >= count) break;
        const std::size_t end = std::min(begin + chunk, count);
        threads.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) results[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
    return results;
}

} // namespace qpqlab
