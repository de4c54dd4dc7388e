#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "nccell/random.hpp"
#include "nccell/stats.hpp"

namespace nccell {

/// Splits `trials` across `workers` threads. Worker w draws from
/// substream(seed, w) and runs its share through `batch(rng, count)`, which
/// returns a Proportion. Results merge by summation, so the outcome depends
/// only on (seed, workers, trials).
template <typename Batch>
Proportion run_trials(std::uint64_t trials, std::uint64_t seed, unsigned workers, Batch&& batch) {
    workers = std::max(1u, workers);
    std::vector<Proportion> partial(workers);
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](unsigned w) {
        try {
            const std::uint64_t share = trials / workers + (w < trials % workers ? 1 : 0);
            Rng rng = substream(seed, w);
            partial[w] = batch(rng, share);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    Proportion total;
    for (unsigned w = 0; w < workers; ++w) {
        if (errors[w]) std::rethrow_exception(errors[w]);
        total += partial[w];
    }
    return total;
}

}  // namespace nccell
