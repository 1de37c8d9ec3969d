#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "rss/random.hpp"

using namespace rss;

// Published known-answer vectors for Philox4x32-10.
TEST(Philox, KnownAnswers) {
    EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
              (PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
              (PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
              (PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(PhiloxStream, FirstWordsFollowLayout) {
    const std::uint64_t seed = 0x0123456789abcdefULL;
    PhiloxStream s(seed, 7, 3);
    const PhiloxCounter b0 = philox4x32_10({0, 3, 7, 0}, {0x89abcdefu, 0x01234567u});
    const PhiloxCounter b1 = philox4x32_10({1, 3, 7, 0}, {0x89abcdefu, 0x01234567u});
    EXPECT_EQ(s.next_u64(), b0[0] | (std::uint64_t{b0[1]} << 32));
    EXPECT_EQ(s.next_u64(), b0[2] | (std::uint64_t{b0[3]} << 32));
    EXPECT_EQ(s.next_u64(), b1[0] | (std::uint64_t{b1[1]} << 32));
}

TEST(PhiloxStream, Deterministic) {
    PhiloxStream a(42, 5, 1), b(42, 5, 1);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a.next_u64(), b.next_u64());
        EXPECT_EQ(a.normal(), b.normal());
    }
}

TEST(PhiloxStream, SubstreamsDiffer) {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t r = 0; r < 50; ++r) {
        for (std::uint32_t d = 0; d < 4; ++d) firsts.insert(PhiloxStream(9, r, d).next_u64());
    }
    EXPECT_EQ(firsts.size(), 200u);
    EXPECT_NE(PhiloxStream(1, 0).next_u64(), PhiloxStream(2, 0).next_u64());
}

TEST(PhiloxStream, UniformMoments) {
    PhiloxStream s(3, 0);
    const int m = 200000;
    double sum = 0, sq = 0;
    for (int i = 0; i < m; ++i) {
        const double u = s.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        sq += u * u;
    }
    const double mean = sum / m;
    EXPECT_NEAR(mean, 0.5, 4 * std::sqrt(1.0 / 12 / m));
    EXPECT_NEAR(sq / m - mean * mean, 1.0 / 12, 0.002);
}

TEST(PhiloxStream, NormalMoments) {
    PhiloxStream s(4, 0);
    const int m = 200000;
    double sum = 0, sq = 0;
    int below = 0;
    for (int i = 0; i < m; ++i) {
        const double z = s.normal();
        sum += z;
        sq += z * z;
        below += z < 1.0;
    }
    EXPECT_NEAR(sum / m, 0.0, 4 / std::sqrt(m));
    EXPECT_NEAR(sq / m, 1.0, 0.02);
    EXPECT_NEAR(static_cast<double>(below) / m, 0.8413447, 0.004);
}

TEST(MixSeed, SplitMixReference) {
    // First SplitMix64 output from state 0.
    EXPECT_EQ(mix_seed(0), 0xe220a8397b1dcdafULL);
    EXPECT_NE(mix_seed(1), mix_seed(2));
}
