#ifndef EWENS_PARALLEL_HPP
#define EWENS_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace ewens::parallel {

/// Number of worker threads used by the Monte Carlo drivers. 0 means
/// `std::thread::hardware_concurrency()`.
void set_workers(unsigned workers);
unsigned workers();

/// Trials per chunk. Chunk boundaries are a pure function of the trial count,
/// so results never depend on the number of workers.
inline constexpr std::uint64_t kChunkSize = 256;

/// Runs `body(acc, trial)` for every trial in [0, trials) and folds per-chunk
/// accumulators with `merge`. Every chunk starts from `init`; merge order is
/// by chunk index.
template <typename Acc, typename Body, typename Merge>
Acc reduce_trials(std::uint64_t trials, const Acc& init, Body body, Merge merge) {
    const std::uint64_t chunks = (trials + kChunkSize - 1) / kChunkSize;
    std::vector<Acc> partial(chunks, init);
    auto run_chunk = [&](std::uint64_t c) {
        const std::uint64_t lo = c * kChunkSize;
        const std::uint64_t hi = std::min(trials, lo + kChunkSize);
        for (std::uint64_t t = lo; t < hi; ++t) body(partial[c], t);
    };
    const unsigned n_workers =
        static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, workers()), std::max<std::uint64_t>(chunks, 1)));
    if (n_workers <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t c = w; c < chunks; c += n_workers) run_chunk(c);
            });
        }
        for (auto& th : pool) th.join();
    }
    Acc total = init;
    for (auto& p : partial) merge(total, p);
    return total;
}

/// Counts trials for which `predicate(trial)` holds.
template <typename Predicate>
std::uint64_t count_trials(std::uint64_t trials, Predicate predicate) {
    return reduce_trials<std::uint64_t>(
        trials, 0, [&](std::uint64_t& acc, std::uint64_t t) { acc += predicate(t) ? 1 : 0; },
        [](std::uint64_t& a, const std::uint64_t& b) { a += b; });
}

}  // namespace ewens::parallel

#endif  // EWENS_PARALLEL_HPP
