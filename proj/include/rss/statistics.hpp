#pragma once

// Tests of perfect ranking: per-cycle counts, multi-cycle sums and maxima,
// the all-permutations statistics PN/PA/PS, and the equivalent J and W*.
// Every statistic is an exact integer on tie-free data.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "rss/sample.hpp"

namespace rss {

using StatValue = std::int64_t;

enum class StatisticKind { N_sum, A_sum, S_sum, N_max, A_max, S_max, PN, PA, PS, J, Wstar };

inline constexpr std::array<StatisticKind, 11> kAllKinds = {
    StatisticKind::N_sum, StatisticKind::A_sum, StatisticKind::S_sum, StatisticKind::N_max,
    StatisticKind::A_max, StatisticKind::S_max, StatisticKind::PN,    StatisticKind::PA,
    StatisticKind::PS,    StatisticKind::J,     StatisticKind::Wstar};

std::string_view to_string(StatisticKind kind);
StatisticKind parse_kind(std::string_view tag);

enum class TailDirection { upper, lower };

// Wstar rejects for small values; everything else for large values.
constexpr TailDirection tail_direction(StatisticKind kind) {
    return kind == StatisticKind::Wstar ? TailDirection::lower : TailDirection::upper;
}

// True when the statistic depends only on the column multisets, not on
// which cycle a value was measured in.
constexpr bool is_column_symmetric(StatisticKind kind) {
    switch (kind) {
        case StatisticKind::PN:
        case StatisticKind::PA:
        case StatisticKind::PS:
        case StatisticKind::J:
        case StatisticKind::Wstar:
            return true;
        default:
            return false;
    }
}

struct CycleStats {
    StatValue inversions = 0;      // N_kl
    StatValue abs_deviation = 0;   // A_kl
    StatValue sq_deviation = 0;    // S_kl
    friend bool operator==(const CycleStats&, const CycleStats&) = default;
};

CycleStats per_cycle_stats(const RankInfo& ranks, std::size_t cycle);

// N_sum, A_sum, S_sum, N_max, A_max, S_max.
StatValue aggregate(const RankInfo& ranks, StatisticKind kind);

struct EnumerationBudget {
    std::uint64_t max_permuted_samples = 10'000'000;
};

// Literal sum over all n^k permuted samples (one value per rank-slot
// column). Kind must be PN, PA or PS. Throws CapExceeded above budget.
StatValue brute_force_perm_stat(const RssSample& sample, StatisticKind kind, EnumerationBudget budget = {});

// PA through the rank distribution of each value in a random permuted
// sample: a sum of independent Bernoullis, convolved in integer arithmetic
// scaled by n^(k-1).
StatValue fast_pa(const RssSample& sample);
StatValue fast_pa(const RssSample& sample, const ColumnProportions& props);

// Cross-cycle order violations between slot pairs i < j.
StatValue j_statistic(const RssSample& sample);

// Sum over (j,l) of j * R_[j]l with j 1-based.
StatValue w_star(const RankInfo& ranks);

// Constant of the affine map PS = offset - 2 n^(k-2) W*.
StatValue ps_offset(std::size_t k, std::size_t n);

// Integer power with overflow detection (throws CapExceeded).
StatValue checked_pow(StatValue base, std::size_t exponent);

// Closed interval containing every attainable value at (k, n).
std::pair<StatValue, StatValue> statistic_range(StatisticKind kind, std::size_t k, std::size_t n);

// The single evaluator used for each tag. PN and PS go through J and W*
// (exact identities); brute_force_perm_stat is the independent route.
StatValue evaluate(StatisticKind kind, const RssSample& sample, const RankInfo& ranks);
StatValue evaluate(StatisticKind kind, const RssSample& sample);

}  // namespace rss
