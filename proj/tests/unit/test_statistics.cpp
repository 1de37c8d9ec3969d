#include <gtest/gtest.h>

#include <cmath>

#include "rss/statistics.hpp"
#include "test_support.hpp"

using namespace rss;
using rss::testing::nested_sample;
using rss::testing::random_sample;

namespace {

// Cycle values are given in slot order; within-cycle ranks follow directly.
RssSample single_cycle(const std::vector<double>& v) {
    std::vector<std::vector<double>> rows;
    for (double x : v) rows.push_back({x});
    return RssSample::from_rows(rows);
}

// Sums over all n^k permuted samples, written independently of the library.
struct PermSums {
    StatValue pn = 0, pa = 0, ps = 0;
};

PermSums oracle_perm_sums(const RssSample& s) {
    const std::size_t k = s.k(), n = s.n();
    std::vector<std::size_t> pick(k, 0);
    PermSums out;
    for (;;) {
        for (std::size_t i = 0; i < k; ++i) {
            int rank = 1;
            for (std::size_t m = 0; m < k; ++m) rank += s(m, pick[m]) < s(i, pick[i]);
            const int d = rank - static_cast<int>(i + 1);
            out.pa += std::abs(d);
            out.ps += d * d;
            for (std::size_t j = i + 1; j < k; ++j) out.pn += s(i, pick[i]) > s(j, pick[j]);
        }
        std::size_t i = 0;
        while (i < k && ++pick[i] == n) pick[i++] = 0;
        if (i == k) break;
    }
    return out;
}

StatValue ipow(StatValue b, std::size_t e) {
    StatValue r = 1;
    while (e--) r *= b;
    return r;
}

}  // namespace

TEST(PerCycleStats, Examples) {
    EXPECT_EQ(per_cycle_stats(compute_ranks(single_cycle({1, 2, 3, 4})), 0), (CycleStats{0, 0, 0}));
    EXPECT_EQ(per_cycle_stats(compute_ranks(single_cycle({3, 2, 1})), 0), (CycleStats{3, 4, 8}));
    EXPECT_EQ(per_cycle_stats(compute_ranks(single_cycle({2, 1})), 0), (CycleStats{1, 2, 2}));
}

TEST(Aggregate, Examples) {
    const RankInfo nested = compute_ranks(nested_sample(4, 3));
    for (auto kind : {StatisticKind::N_sum, StatisticKind::A_sum, StatisticKind::S_sum, StatisticKind::N_max,
                      StatisticKind::A_max, StatisticKind::S_max}) {
        EXPECT_EQ(aggregate(nested, kind), 0);
    }
    // Cycle 1 reversed (A = 2), cycle 2 in order (A = 0).
    const RankInfo r = compute_ranks(RssSample::from_rows({{2, 3}, {1, 4}}));
    EXPECT_EQ(aggregate(r, StatisticKind::A_sum), 2);
    EXPECT_EQ(aggregate(r, StatisticKind::A_max), 2);
    EXPECT_EQ(aggregate(r, StatisticKind::N_sum), 1);
    EXPECT_EQ(aggregate(r, StatisticKind::S_max), 2);
}

TEST(Aggregate, SingleCycleSumEqualsMax) {
    for (std::uint64_t t = 0; t < 30; ++t) {
        const RankInfo r = compute_ranks(random_sample(2 + t % 5, 1, 21, t));
        const CycleStats c = per_cycle_stats(r, 0);
        EXPECT_EQ(aggregate(r, StatisticKind::N_sum), c.inversions);
        EXPECT_EQ(aggregate(r, StatisticKind::N_max), c.inversions);
        EXPECT_EQ(aggregate(r, StatisticKind::A_sum), aggregate(r, StatisticKind::A_max));
        EXPECT_EQ(aggregate(r, StatisticKind::S_sum), aggregate(r, StatisticKind::S_max));
    }
}

TEST(PerCycleStats, SumEqualsSumOfCycles) {
    for (std::uint64_t t = 0; t < 40; ++t) {
        const std::size_t k = 2 + t % 4, n = 1 + t % 5;
        const RankInfo r = compute_ranks(random_sample(k, n, 22, t));
        StatValue ns = 0, as = 0, ss = 0, nm = 0;
        for (std::size_t l = 0; l < n; ++l) {
            const CycleStats c = per_cycle_stats(r, l);
            ns += c.inversions;
            as += c.abs_deviation;
            ss += c.sq_deviation;
            nm = std::max(nm, c.inversions);
            // S = 2 * sum_i i (i - R_i) is even; A is even as well.
            EXPECT_EQ(c.abs_deviation % 2, 0);
            EXPECT_EQ(c.sq_deviation % 2, 0);
        }
        EXPECT_EQ(aggregate(r, StatisticKind::N_sum), ns);
        EXPECT_EQ(aggregate(r, StatisticKind::A_sum), as);
        EXPECT_EQ(aggregate(r, StatisticKind::S_sum), ss);
        EXPECT_EQ(aggregate(r, StatisticKind::N_max), nm);
    }
}

TEST(BruteForcePermStat, Examples) {
    const RssSample nested = RssSample::from_rows({{1, 2}, {4, 3}});
    EXPECT_EQ(brute_force_perm_stat(nested, StatisticKind::PA), 0);
    const RssSample s = RssSample::from_rows({{5, 2}, {4, 3}});
    EXPECT_EQ(brute_force_perm_stat(s, StatisticKind::PA), 4);
    EXPECT_EQ(brute_force_perm_stat(s, StatisticKind::PN), 2);
    EXPECT_EQ(brute_force_perm_stat(s, StatisticKind::PS), 4);
    EXPECT_THROW(brute_force_perm_stat(s, StatisticKind::J), std::invalid_argument);
}

TEST(BruteForcePermStat, MatchesOracle) {
    for (std::uint64_t t = 0; t < 60; ++t) {
        const std::size_t k = 2 + t % 4, n = 1 + (t / 4) % 4;
        const RssSample s = random_sample(k, n, 23, t);
        const PermSums o = oracle_perm_sums(s);
        EXPECT_EQ(brute_force_perm_stat(s, StatisticKind::PN), o.pn);
        EXPECT_EQ(brute_force_perm_stat(s, StatisticKind::PA), o.pa);
        EXPECT_EQ(brute_force_perm_stat(s, StatisticKind::PS), o.ps);
    }
}

TEST(BruteForcePermStat, BudgetRefusal) {
    const RssSample s = random_sample(5, 5, 24);
    try {
        brute_force_perm_stat(s, StatisticKind::PA, EnumerationBudget{1000});
        FAIL() << "budget not enforced";
    } catch (const CapExceeded& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("fast"), std::string::npos);
    }
    EXPECT_NO_THROW(brute_force_perm_stat(s, StatisticKind::PA, EnumerationBudget{3125}));
}

TEST(FastPa, Examples) {
    EXPECT_EQ(fast_pa(nested_sample(5, 4)), 0);
    EXPECT_EQ(fast_pa(RssSample::from_rows({{5, 2}, {4, 3}})), 4);
    const RssSample s = random_sample(5, 5, 25);
    EXPECT_EQ(fast_pa(s), brute_force_perm_stat(s, StatisticKind::PA));
}

TEST(FastPa, EqualsBruteForceOnRandomInstances) {
    for (std::uint64_t t = 0; t < 200; ++t) {
        const std::size_t k = 2 + t % 5, n = 1 + (t / 5) % 5;
        const RssSample s = random_sample(k, n, 26, t);
        EXPECT_EQ(fast_pa(s), brute_force_perm_stat(s, StatisticKind::PA)) << "k=" << k << " n=" << n;
    }
}

TEST(JStatistic, Examples) {
    EXPECT_EQ(j_statistic(nested_sample(4, 3)), 0);
    EXPECT_EQ(j_statistic(RssSample::from_rows({{5, 2}, {4, 3}})), 2);
}

TEST(JStatistic, PnIdentity) {
    for (std::uint64_t t = 0; t < 100; ++t) {
        const std::size_t k = 2 + t % 4, n = 1 + (t / 4) % 5;
        const RssSample s = random_sample(k, n, 27, t);
        EXPECT_EQ(oracle_perm_sums(s).pn, ipow(static_cast<StatValue>(n), k - 2) * j_statistic(s));
    }
}

TEST(WStar, Examples) {
    for (std::size_t n = 1; n <= 6; ++n) {
        Grid<double> g(1, n);
        for (std::size_t l = 0; l < n; ++l) g(0, l) = static_cast<double>(n - l);
        EXPECT_EQ(w_star(compute_ranks(RssSample(std::move(g)))), static_cast<StatValue>(n * (n + 1) / 2));
    }
    EXPECT_EQ(w_star(compute_ranks(single_cycle({1, 2}))), 5);
}

// A(k,n) recovered from brute force, compared with the closed form.
TEST(WStar, AffineOffsetAgainstBruteForce) {
    for (std::size_t k = 2; k <= 4; ++k) {
        for (std::size_t n = 1; n <= 4; ++n) {
            for (std::uint64_t t = 0; t < 4; ++t) {
                const RssSample s = random_sample(k, n, 28, k * 100 + n * 10 + t);
                const StatValue ps = oracle_perm_sums(s).ps;
                const StatValue w = w_star(compute_ranks(s));
                const StatValue nk2 = ipow(static_cast<StatValue>(n), k - 2);
                EXPECT_EQ(ps + 2 * nk2 * w, ps_offset(k, n)) << "k=" << k << " n=" << n;
            }
        }
    }
}

TEST(WStar, ClosedFormOffset) {
    for (StatValue k = 2; k <= 6; ++k) {
        for (StatValue n = 1; n <= 6; ++n) {
            const StatValue nk = ipow(n, static_cast<std::size_t>(k));
            const StatValue nk2 = ipow(n, static_cast<std::size_t>(k - 2));
            const StatValue a = 2 * nk * k * (k + 1) * (2 * k + 1) / 6 - nk * k * (k + 1) +
                                nk2 * (n + n * (n - 1) / 2) * k * (k + 1);
            EXPECT_EQ(ps_offset(static_cast<std::size_t>(k), static_cast<std::size_t>(n)), a);
        }
    }
}

TEST(Evaluate, RoutesAgreeWithBruteForce) {
    for (std::uint64_t t = 0; t < 80; ++t) {
        const std::size_t k = 2 + t % 4, n = 1 + (t / 4) % 4;
        const RssSample s = random_sample(k, n, 29, t);
        EXPECT_EQ(evaluate(StatisticKind::PN, s), brute_force_perm_stat(s, StatisticKind::PN));
        EXPECT_EQ(evaluate(StatisticKind::PA, s), brute_force_perm_stat(s, StatisticKind::PA));
        EXPECT_EQ(evaluate(StatisticKind::PS, s), brute_force_perm_stat(s, StatisticKind::PS));
    }
}

TEST(Evaluate, TwoSlotCollapse) {
    for (std::uint64_t t = 0; t < 50; ++t) {
        const RssSample s = random_sample(2, 1 + t % 6, 30, t);
        const StatValue pn = evaluate(StatisticKind::PN, s);
        EXPECT_EQ(evaluate(StatisticKind::PA, s), 2 * pn);
        EXPECT_EQ(evaluate(StatisticKind::PS, s), 2 * pn);
    }
}

TEST(Evaluate, SingleCycleCollapse) {
    for (std::uint64_t t = 0; t < 50; ++t) {
        const RssSample s = random_sample(2 + t % 5, 1, 31, t);
        EXPECT_EQ(evaluate(StatisticKind::PN, s), evaluate(StatisticKind::N_sum, s));
        EXPECT_EQ(evaluate(StatisticKind::PA, s), evaluate(StatisticKind::A_sum, s));
        EXPECT_EQ(evaluate(StatisticKind::PS, s), evaluate(StatisticKind::S_sum, s));
    }
}

TEST(Evaluate, ZeroExactlyOnNestedSamples) {
    for (std::size_t k = 2; k <= 5; ++k) {
        for (std::size_t n = 1; n <= 4; ++n) {
            const RssSample s = nested_sample(k, n);
            for (auto kind : {StatisticKind::PN, StatisticKind::PA, StatisticKind::PS, StatisticKind::J}) {
                EXPECT_EQ(evaluate(kind, s), 0);
            }
            EXPECT_EQ(evaluate(StatisticKind::Wstar, s), statistic_range(StatisticKind::Wstar, k, n).second);
        }
    }
    // A single cross-column violation makes every permutation statistic positive.
    for (std::uint64_t t = 0; t < 40; ++t) {
        const RssSample s = random_sample(2 + t % 4, 1 + t % 4, 32, t);
        const bool nested = j_statistic(s) == 0;
        EXPECT_EQ(evaluate(StatisticKind::PA, s) == 0, nested);
        EXPECT_EQ(evaluate(StatisticKind::PN, s) == 0, nested);
        EXPECT_EQ(evaluate(StatisticKind::PS, s) == 0, nested);
    }
}

TEST(Evaluate, WithinRange) {
    for (std::uint64_t t = 0; t < 100; ++t) {
        const std::size_t k = 2 + t % 5, n = 1 + (t / 5) % 5;
        const RssSample s = random_sample(k, n, 33, t);
        const RankInfo r = compute_ranks(s);
        for (auto kind : kAllKinds) {
            const auto [lo, hi] = statistic_range(kind, k, n);
            const StatValue v = evaluate(kind, s, r);
            EXPECT_LE(lo, v) << to_string(kind);
            EXPECT_LE(v, hi) << to_string(kind);
        }
    }
}

TEST(StatisticRange, ReversedSampleIsExtreme) {
    for (std::size_t k = 2; k <= 5; ++k) {
        for (std::size_t n = 1; n <= 4; ++n) {
            // Every column-i value above every column-(i+1) value.
            Grid<double> g(k, n);
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t l = 0; l < n; ++l) g(i, l) = static_cast<double>((k - i) * n + l);
            }
            const RssSample s(std::move(g));
            EXPECT_EQ(evaluate(StatisticKind::Wstar, s), statistic_range(StatisticKind::Wstar, k, n).first);
            EXPECT_EQ(evaluate(StatisticKind::J, s), statistic_range(StatisticKind::J, k, n).second);
            EXPECT_EQ(evaluate(StatisticKind::N_sum, s), statistic_range(StatisticKind::N_sum, k, n).second);
        }
    }
}

TEST(Kinds, NamesRoundTripAndTails) {
    for (auto kind : kAllKinds) EXPECT_EQ(parse_kind(to_string(kind)), kind);
    EXPECT_THROW(parse_kind("PX"), std::invalid_argument);
    EXPECT_EQ(tail_direction(StatisticKind::Wstar), TailDirection::lower);
    EXPECT_EQ(tail_direction(StatisticKind::PA), TailDirection::upper);
}

TEST(CheckedPow, Overflow) {
    EXPECT_EQ(checked_pow(5, 5), 3125);
    EXPECT_EQ(checked_pow(7, 0), 1);
    EXPECT_THROW(checked_pow(10, 30), CapExceeded);
}
