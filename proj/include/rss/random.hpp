#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11) and the
// replicate substream layout used by every simulation in this library.
//
// Stream layout, version "philox4x32-10/v1":
//   key     = (seed & 0xffffffff, seed >> 32)
//   counter = (block, domain, replicate & 0xffffffff, replicate >> 32)
// where `block` counts 128-bit outputs within the substream. Each block
// yields two 64-bit words, word = lo | hi << 32 from (x0,x1) then (x2,x3).
// uniform() maps a word to ((w >> 11) + 0.5) * 2^-53, strictly inside (0,1).
// normal() is Box-Muller on two consecutive uniforms, cosine branch first.

#include <array>
#include <cstdint>

namespace rss {

inline constexpr const char* kRngName = "philox4x32-10/v1";

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t replicate, std::uint32_t domain = 0);

    std::uint64_t next_u64();
    double uniform();
    double normal();

    // UniformRandomBitGenerator interface.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return next_u64(); }

private:
    void refill();

    PhiloxKey key_;
    PhiloxCounter counter_;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
    bool has_spare_normal_ = false;
    double spare_normal_ = 0.0;
};

// SplitMix64 finalizer; used to derive disjoint seeds (e.g. null vs power).
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace rss
