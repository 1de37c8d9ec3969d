#include "rss/statistics.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <vector>

namespace rss {

namespace {

constexpr std::array<std::string_view, 11> kTags = {"N_sum", "A_sum", "S_sum", "N_max", "A_max", "S_max",
                                                    "PN",    "PA",    "PS",    "J",     "Wstar"};

void require_permutation_kind(StatisticKind kind) {
    if (kind != StatisticKind::PN && kind != StatisticKind::PA && kind != StatisticKind::PS) {
        throw std::invalid_argument("brute-force enumeration is defined for PN, PA and PS only");
    }
}

StatValue checked_mul(StatValue a, StatValue b) {
    StatValue out = 0;
    if (__builtin_mul_overflow(a, b, &out)) throw CapExceeded("statistic exceeds 64-bit integer range");
    return out;
}

StatValue checked_add(StatValue a, StatValue b) {
    StatValue out = 0;
    if (__builtin_add_overflow(a, b, &out)) throw CapExceeded("statistic exceeds 64-bit integer range");
    return out;
}

}  // namespace

std::string_view to_string(StatisticKind kind) { return kTags[static_cast<std::size_t>(kind)]; }

StatisticKind parse_kind(std::string_view tag) {
    for (std::size_t i = 0; i < kTags.size(); ++i) {
        if (kTags[i] == tag) return static_cast<StatisticKind>(i);
    }
    throw std::invalid_argument("unknown statistic tag '" + std::string(tag) + "'");
}

StatValue checked_pow(StatValue base, std::size_t exponent) {
    StatValue out = 1;
    for (std::size_t e = 0; e < exponent; ++e) out = checked_mul(out, base);
    return out;
}

CycleStats per_cycle_stats(const RankInfo& ranks, std::size_t cycle) {
    const auto& r = ranks.within_cycle;
    const std::size_t k = r.rows();
    CycleStats c;
    for (std::size_t i = 0; i < k; ++i) {
        const int d = r(i, cycle) - static_cast<int>(i + 1);
        c.abs_deviation += std::abs(d);
        c.sq_deviation += d * d;
        for (std::size_t j = i + 1; j < k; ++j) {
            if (r(i, cycle) > r(j, cycle)) ++c.inversions;
        }
    }
    return c;
}

StatValue aggregate(const RankInfo& ranks, StatisticKind kind) {
    StatValue sum = 0;
    StatValue max = 0;
    auto pick = [kind](const CycleStats& c) {
        switch (kind) {
            case StatisticKind::N_sum:
            case StatisticKind::N_max:
                return c.inversions;
            case StatisticKind::A_sum:
            case StatisticKind::A_max:
                return c.abs_deviation;
            case StatisticKind::S_sum:
            case StatisticKind::S_max:
                return c.sq_deviation;
            default:
                throw std::invalid_argument("aggregate requires a per-cycle sum or max tag");
        }
    };
    for (std::size_t l = 0; l < ranks.within_cycle.cols(); ++l) {
        const StatValue v = pick(per_cycle_stats(ranks, l));
        sum += v;
        max = std::max(max, v);
    }
    switch (kind) {
        case StatisticKind::N_sum:
        case StatisticKind::A_sum:
        case StatisticKind::S_sum:
            return sum;
        default:
            return max;
    }
}

StatValue brute_force_perm_stat(const RssSample& s, StatisticKind kind, EnumerationBudget budget) {
    require_permutation_kind(kind);
    const std::size_t k = s.k();
    const std::size_t n = s.n();

    std::uint64_t total = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (__builtin_mul_overflow(total, static_cast<std::uint64_t>(n), &total) ||
            total > budget.max_permuted_samples) {
            std::ostringstream os;
            os << "brute-force enumeration of n^k = " << n << "^" << k << " permuted samples exceeds the budget of "
               << budget.max_permuted_samples << "; use fast_pa for PA, or the J / W* identities for PN / PS";
            throw CapExceeded(os.str());
        }
    }

    std::vector<std::size_t> pick(k, 0);
    std::vector<double> vals(k);
    StatValue acc = 0;
    for (std::uint64_t h = 0; h < total; ++h) {
        for (std::size_t i = 0; i < k; ++i) vals[i] = s(i, pick[i]);
        StatValue local = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (kind == StatisticKind::PN) {
                for (std::size_t j = i + 1; j < k; ++j) local += vals[i] > vals[j] ? 1 : 0;
                continue;
            }
            StatValue rank = 1;
            for (std::size_t m = 0; m < k; ++m) rank += vals[m] < vals[i] ? 1 : 0;
            const StatValue d = rank - static_cast<StatValue>(i + 1);
            local += kind == StatisticKind::PA ? std::abs(d) : d * d;
        }
        acc = checked_add(acc, local);

        for (std::size_t i = 0; i < k; ++i) {
            if (++pick[i] < n) break;
            pick[i] = 0;
        }
    }
    return acc;
}

StatValue fast_pa(const RssSample& s) { return fast_pa(s, column_proportions(s)); }

StatValue fast_pa(const RssSample& s, const ColumnProportions& props) {
    const std::size_t k = s.k();
    const StatValue n = static_cast<StatValue>(s.n());
    // Largest possible intermediate: k * n * n^(k-1) * k.
    checked_mul(checked_mul(checked_pow(n, k), static_cast<StatValue>(k)), static_cast<StatValue>(k));

    std::vector<StatValue> dist(k, 0);
    std::vector<StatValue> next(k, 0);
    StatValue total = 0;
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t l = 0; l < s.n(); ++l) {
            // dist[r] * n^-(used) = P(r of the other columns' draws fall below X_[j]l)
            std::fill(dist.begin(), dist.end(), 0);
            dist[0] = 1;
            std::size_t used = 0;
            for (std::size_t i = 0; i < k; ++i) {
                if (i == j) continue;
                const StatValue below = props.numerator(i, j, l);
                const StatValue above = n - below;
                next[0] = dist[0] * above;
                for (std::size_t r = 1; r <= used + 1; ++r) next[r] = dist[r] * above + dist[r - 1] * below;
                ++used;
                std::copy(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(used + 1), dist.begin());
            }
            // rank of X_[j]l is r + 1, target rank is j + 1
            for (std::size_t r = 0; r < k; ++r) {
                total += dist[r] * std::abs(static_cast<StatValue>(r) - static_cast<StatValue>(j));
            }
        }
    }
    return total;
}

StatValue j_statistic(const RssSample& s) {
    const std::size_t k = s.k();
    const std::size_t n = s.n();
    StatValue count = 0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            for (std::size_t l = 0; l < n; ++l) {
                const double x = s(i, l);
                for (std::size_t m = 0; m < n; ++m) count += x > s(j, m) ? 1 : 0;
            }
        }
    }
    return count;
}

StatValue w_star(const RankInfo& ranks) {
    StatValue w = 0;
    for (std::size_t j = 0; j < ranks.overall.rows(); ++j) {
        for (std::size_t l = 0; l < ranks.overall.cols(); ++l) {
            w += static_cast<StatValue>(j + 1) * ranks.overall(j, l);
        }
    }
    return w;
}

StatValue ps_offset(std::size_t k_, std::size_t n_) {
    if (k_ < 2) throw std::invalid_argument("PS requires k >= 2");
    const StatValue k = static_cast<StatValue>(k_);
    const StatValue n = static_cast<StatValue>(n_);
    const StatValue nk = checked_pow(n, k_);
    const StatValue nk2 = checked_pow(n, k_ - 2);
    const StatValue squares = k * (k + 1) * (2 * k + 1) / 6;
    const StatValue own_column = n + n * (n - 1) / 2;
    return checked_add(checked_mul(2 * nk, squares) - checked_mul(nk, k * (k + 1)),
                       checked_mul(checked_mul(nk2, own_column), k * (k + 1)));
}

std::pair<StatValue, StatValue> statistic_range(StatisticKind kind, std::size_t k_, std::size_t n_) {
    const StatValue k = static_cast<StatValue>(k_);
    const StatValue n = static_cast<StatValue>(n_);
    const StatValue pairs = k * (k - 1) / 2;
    const StatValue a_max = k * k / 2;
    const StatValue s_max = k * (k * k - 1) / 3;
    switch (kind) {
        case StatisticKind::N_sum: return {0, n * pairs};
        case StatisticKind::A_sum: return {0, n * a_max};
        case StatisticKind::S_sum: return {0, n * s_max};
        case StatisticKind::N_max: return {0, pairs};
        case StatisticKind::A_max: return {0, a_max};
        case StatisticKind::S_max: return {0, s_max};
        case StatisticKind::PN: return {0, checked_mul(checked_pow(n, k_), pairs)};
        case StatisticKind::PA: return {0, checked_mul(checked_pow(n, k_), a_max)};
        case StatisticKind::PS: return {0, checked_mul(checked_pow(n, k_), s_max)};
        case StatisticKind::J: return {0, n * n * pairs};
        case StatisticKind::Wstar: {
            // Column j holding the block of ranks (b-1)n+1..bn contributes j * block sum.
            auto block_sum = [n](StatValue b) { return n * (b - 1) * n + n * (n + 1) / 2; };
            StatValue lo = 0, hi = 0;
            for (StatValue j = 1; j <= k; ++j) {
                hi += j * block_sum(j);
                lo += j * block_sum(k - j + 1);
            }
            return {lo, hi};
        }
    }
    throw std::logic_error("unhandled statistic kind");
}

StatValue evaluate(StatisticKind kind, const RssSample& s, const RankInfo& ranks) {
    switch (kind) {
        case StatisticKind::N_sum:
        case StatisticKind::A_sum:
        case StatisticKind::S_sum:
        case StatisticKind::N_max:
        case StatisticKind::A_max:
        case StatisticKind::S_max:
            return aggregate(ranks, kind);
        case StatisticKind::PN:
            if (s.k() < 2) throw std::invalid_argument("PN requires k >= 2");
            return checked_mul(checked_pow(static_cast<StatValue>(s.n()), s.k() - 2), j_statistic(s));
        case StatisticKind::PA:
            return fast_pa(s);
        case StatisticKind::PS:
            return ps_offset(s.k(), s.n()) -
                   checked_mul(2 * checked_pow(static_cast<StatValue>(s.n()), s.k() - 2), w_star(ranks));
        case StatisticKind::J:
            return j_statistic(s);
        case StatisticKind::Wstar:
            return w_star(ranks);
    }
    throw std::logic_error("unhandled statistic kind");
}

StatValue evaluate(StatisticKind kind, const RssSample& s) { return evaluate(kind, s, compute_ranks(s)); }

}  // namespace rss
