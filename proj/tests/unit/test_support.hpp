#pragma once

#include <cstdint>
#include <vector>

#include "rss/random.hpp"
#include "rss/sample.hpp"

namespace rss::testing {

// Distinct continuous values, no rank structure.
inline RssSample random_sample(std::size_t k, std::size_t n, std::uint64_t seed, std::uint64_t index = 0) {
    PhiloxStream rng(seed, index, 0x54535431u);
    for (;;) {
        Grid<double> g(k, n);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t l = 0; l < n; ++l) g(i, l) = rng.normal();
        }
        try {
            return RssSample(std::move(g));
        } catch (const DataError&) {
        }
    }
}

// Every value of column i lies below every value of column i+1.
inline RssSample nested_sample(std::size_t k, std::size_t n) {
    Grid<double> g(k, n);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t l = 0; l < n; ++l) g(i, l) = static_cast<double>(i * n + (n - l));
    }
    return RssSample(std::move(g));
}

}  // namespace rss::testing
