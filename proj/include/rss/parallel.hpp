#pragma once

// Deterministic replicate-parallel reduction: [0, total) is split into
// contiguous chunks, one per worker, and partial results are merged in chunk
// order. Callers use per-replicate RNG substreams and associative merges, so
// the result does not depend on the worker count.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace rss {

template <typename Partial, typename Body, typename Merge>
Partial parallel_reduce(std::uint64_t total, unsigned threads, Partial init, Body body, Merge merge) {
    const unsigned workers = static_cast<unsigned>(
        std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads == 0 ? 1 : threads, total)));
    if (workers == 1) {
        Partial acc = init;
        for (std::uint64_t r = 0; r < total; ++r) body(r, acc);
        return acc;
    }
    std::vector<Partial> partials(workers, init);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t begin = total * w / workers;
        const std::uint64_t end = total * (w + 1) / workers;
        pool.emplace_back([&, w, begin, end] {
            try {
                for (std::uint64_t r = begin; r < end; ++r) body(r, partials[w]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    Partial acc = init;
    for (auto& p : partials) merge(acc, p);
    return acc;
}

}  // namespace rss
