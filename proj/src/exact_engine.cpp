// Exact null distributions by enumerating interleavings of the kn
// independent order statistics.
//
// Cells in one rank slot are iid, so an ordering is determined (up to
// exchangeable relabelling of cycles) by its slot sequence. The probability
// of a slot sequence s_1..s_N is
//     C * integral_{0<t_1<...<t_N<1} prod_m t_m^(s_m-1) (1-t_m)^(k-s_m) dt,
// C = (n!)^k prod_i (k! / ((i-1)! (k-i)!))^n, evaluated inside out by repeated
// antiderivatives: P_0 = 1, P_m(t) = int_0^t P_{m-1}(x) g_{s_m}(x) dx,
// probability = C * P_N(1). A depth-first walk shares P_m across prefixes.
//
// Column-symmetric statistics are evaluated once per slot sequence. Per-cycle
// statistics additionally average over the (n!)^k equally likely ways to
// assign cycles to the occurrences of each slot.

#include <algorithm>
#include <numeric>
#include <sstream>

#include "rss/null_distribution.hpp"
#include "rss/rational_poly.hpp"

namespace rss {

namespace {

mpz_class factorial(std::size_t m) {
    mpz_class f = 1;
    for (std::size_t i = 2; i <= m; ++i) f *= static_cast<unsigned long>(i);
    return f;
}

// Density numerator of the (slot+1)-th order statistic of k, without its constant.
std::vector<std::vector<std::int64_t>> slot_kernels(std::size_t k) {
    std::vector<std::vector<std::int64_t>> g;
    for (std::size_t i = 0; i < k; ++i) g.push_back(monomial_times_one_minus(i, k - 1 - i));
    return g;
}

mpz_class slot_constant(std::size_t k, std::size_t slot) {
    return factorial(k) / (factorial(slot) * factorial(k - 1 - slot));
}

CycleStats cycle_stats_from_positions(std::span<const int> positions) {
    CycleStats c;
    const std::size_t k = positions.size();
    for (std::size_t i = 0; i < k; ++i) {
        int rank = 1;
        for (std::size_t m = 0; m < k; ++m) rank += positions[m] < positions[i] ? 1 : 0;
        const int d = rank - static_cast<int>(i + 1);
        c.abs_deviation += std::abs(d);
        c.sq_deviation += d * d;
        for (std::size_t j = i + 1; j < k; ++j) c.inversions += positions[i] > positions[j] ? 1 : 0;
    }
    return c;
}

StatValue pick_aggregate(StatisticKind kind, const std::vector<CycleStats>& cycles) {
    StatValue sum = 0, max = 0;
    for (const auto& c : cycles) {
        StatValue v = 0;
        switch (kind) {
            case StatisticKind::N_sum:
            case StatisticKind::N_max: v = c.inversions; break;
            case StatisticKind::A_sum:
            case StatisticKind::A_max: v = c.abs_deviation; break;
            default: v = c.sq_deviation; break;
        }
        sum += v;
        max = std::max(max, v);
    }
    const bool is_sum =
        kind == StatisticKind::N_sum || kind == StatisticKind::A_sum || kind == StatisticKind::S_sum;
    return is_sum ? sum : max;
}

class Enumerator {
public:
    Enumerator(std::span<const StatisticKind> kinds, std::size_t k, std::size_t n)
        : kinds_(kinds.begin(), kinds.end()), k_(k), n_(n), kernels_(slot_kernels(k)),
          remaining_(k, n), sequence_(k * n), hist_(kinds.size()) {
        // A slot sequence stands for (n!)^k equally likely labelled orderings.
        const mpz_class per_slot = factorial(n);
        normalizer_ = 1;
        for (std::size_t i = 0; i < k; ++i) {
            const mpz_class base = slot_constant(k, i);
            for (std::size_t l = 0; l < n; ++l) normalizer_ *= base;
            assignments_ *= per_slot;
        }
        normalizer_ *= assignments_;
        for (auto kind : kinds_) {
            if (!is_column_symmetric(kind)) has_per_cycle_ = true;
        }
    }

    void run() { descend(0, RationalPoly::constant(1)); }

    const std::vector<std::map<StatValue, mpq_class>>& histograms() const { return hist_; }
    const mpq_class& total_mass() const { return total_; }

private:
    void descend(std::size_t depth, const RationalPoly& poly) {
        if (depth == sequence_.size()) {
            leaf(mpq_class(poly.at_one() * normalizer_));
            return;
        }
        for (std::size_t i = 0; i < k_; ++i) {
            if (remaining_[i] == 0) continue;
            --remaining_[i];
            sequence_[depth] = i;
            descend(depth + 1, poly.times(kernels_[i]).integral());
            ++remaining_[i];
        }
    }

    void leaf(const mpq_class& prob) {
        total_ += prob;
        // positions[i][o] = position of the o-th occurrence of slot i
        std::vector<std::vector<int>> positions(k_);
        for (std::size_t m = 0; m < sequence_.size(); ++m) positions[sequence_[m]].push_back(static_cast<int>(m));

        bool sample_needed = false;
        for (auto kind : kinds_) sample_needed |= is_column_symmetric(kind);
        if (sample_needed) {
            Grid<double> g(k_, n_);
            for (std::size_t i = 0; i < k_; ++i) {
                for (std::size_t l = 0; l < n_; ++l) g(i, l) = positions[i][l];
            }
            const RssSample s(std::move(g));
            const RankInfo ranks = compute_ranks(s);
            for (std::size_t q = 0; q < kinds_.size(); ++q) {
                if (is_column_symmetric(kinds_[q])) hist_[q][evaluate(kinds_[q], s, ranks)] += prob;
            }
        }
        if (has_per_cycle_) per_cycle_leaf(prob, positions);
    }

    void per_cycle_leaf(const mpq_class& prob, std::vector<std::vector<int>>& positions) {
        const mpq_class weight = prob / assignments_;
        for (auto& p : positions) std::sort(p.begin(), p.end());
        std::map<std::vector<StatValue>, std::uint64_t> outcome_counts;
        std::vector<int> cycle_positions(k_);
        std::vector<CycleStats> cycles(n_);
        std::vector<StatValue> values;
        for (;;) {
            for (std::size_t l = 0; l < n_; ++l) {
                for (std::size_t i = 0; i < k_; ++i) cycle_positions[i] = positions[i][l];
                cycles[l] = cycle_stats_from_positions(cycle_positions);
            }
            values.clear();
            for (auto kind : kinds_) values.push_back(is_column_symmetric(kind) ? 0 : pick_aggregate(kind, cycles));
            ++outcome_counts[values];

            // Odometer over per-slot permutations.
            std::size_t i = 0;
            while (i < k_ && !std::next_permutation(positions[i].begin(), positions[i].end())) ++i;
            if (i == k_) break;
        }
        for (const auto& [vals, count] : outcome_counts) {
            const mpq_class mass = weight * mpz_class(std::to_string(count));
            for (std::size_t q = 0; q < kinds_.size(); ++q) {
                if (!is_column_symmetric(kinds_[q])) hist_[q][vals[q]] += mass;
            }
        }
    }

    std::vector<StatisticKind> kinds_;
    std::size_t k_;
    std::size_t n_;
    std::vector<std::vector<std::int64_t>> kernels_;
    std::vector<std::size_t> remaining_;
    std::vector<std::size_t> sequence_;
    std::vector<std::map<StatValue, mpq_class>> hist_;
    mpz_class normalizer_;
    mpz_class assignments_ = 1;
    bool has_per_cycle_ = false;
    mpq_class total_ = 0;
};

}  // namespace

mpq_class ordering_probability(std::size_t k, std::span<const std::size_t> slot_sequence) {
    const auto kernels = slot_kernels(k);
    RationalPoly poly = RationalPoly::constant(1);
    mpz_class c = 1;
    for (std::size_t slot : slot_sequence) {
        if (slot >= k) throw std::invalid_argument("slot index out of range");
        poly = poly.times(kernels[slot]).integral();
        c *= slot_constant(k, slot);
    }
    return poly.at_one() * c;
}

std::vector<NullDistribution> exact_null_distributions(std::span<const StatisticKind> kinds, std::size_t k,
                                                       std::size_t n, const ExactOptions& opt) {
    if (k < 2 || n < 1) throw std::invalid_argument("exact engine needs k >= 2 and n >= 1");
    if (opt.max_cells > kExactMaxCells) {
        std::ostringstream os;
        os << "exact engine cell cap cannot exceed " << kExactMaxCells;
        throw std::invalid_argument(os.str());
    }
    if (k * n > opt.max_cells) {
        std::ostringstream os;
        os << "exact null distribution for k=" << k << ", n=" << n << " needs kn=" << k * n
           << " cells, above the cap of " << opt.max_cells
           << " (opt in up to " << kExactMaxCells << ", or use the Monte Carlo null distribution)";
        throw CapExceeded(os.str());
    }
    Enumerator e(kinds, k, n);
    e.run();
    if (e.total_mass() != 1) {
        throw std::logic_error("exact enumeration mass is " + e.total_mass().get_str() + ", expected 1");
    }
    std::vector<NullDistribution> out;
    for (std::size_t q = 0; q < kinds.size(); ++q) {
        std::vector<StatValue> support;
        std::vector<mpq_class> probs;
        for (const auto& [v, p] : e.histograms()[q]) {
            support.push_back(v);
            probs.push_back(p);
        }
        out.emplace_back(kinds[q], k, n, std::move(support), std::move(probs), Provenance{});
    }
    return out;
}

NullDistribution exact_null_distribution(StatisticKind kind, std::size_t k, std::size_t n, const ExactOptions& opt) {
    const StatisticKind kinds[] = {kind};
    return exact_null_distributions(kinds, k, n, opt).front();
}

}  // namespace rss
