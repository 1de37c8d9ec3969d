#pragma once

// Null distributions under perfect ranking (exact or Monte Carlo), critical
// values with randomization, and the resulting hypothesis tests.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rss/random.hpp"
#include "rss/sample.hpp"
#include "rss/statistics.hpp"

namespace rss {

struct Provenance {
    enum class Source { exact, monte_carlo };
    Source source = Source::exact;
    std::uint64_t seed = 0;  // monte_carlo only
    std::uint64_t reps = 0;  // monte_carlo only

    bool is_exact() const { return source == Source::exact; }
    friend bool operator==(const Provenance&, const Provenance&) = default;
};

// Discrete distribution of an integer statistic. Probabilities are exact
// rationals in both cases; a Monte Carlo distribution stores count / reps.
class NullDistribution {
public:
    NullDistribution(StatisticKind kind, std::size_t k, std::size_t n, std::vector<StatValue> support,
                     std::vector<mpq_class> probabilities, Provenance provenance);

    static NullDistribution from_counts(StatisticKind kind, std::size_t k, std::size_t n,
                                        const std::map<StatValue, std::uint64_t>& counts, Provenance provenance);

    StatisticKind kind() const { return kind_; }
    std::size_t k() const { return k_; }
    std::size_t n() const { return n_; }
    const std::vector<StatValue>& support() const { return support_; }
    const std::vector<mpq_class>& probabilities() const { return probs_; }
    const Provenance& provenance() const { return provenance_; }

    mpq_class point(StatValue v) const;
    mpq_class upper_tail(StatValue v) const;  // P(T >= v)
    mpq_class lower_tail(StatValue v) const;  // P(T <= v)

    // P-value in the kind's rejection direction.
    mpq_class p_value(StatValue observed) const;

    friend bool operator==(const NullDistribution&, const NullDistribution&) = default;

private:
    StatisticKind kind_;
    std::size_t k_;
    std::size_t n_;
    std::vector<StatValue> support_;
    std::vector<mpq_class> probs_;
    Provenance provenance_;
};

// Rejection region {T >= value} (upper) or {T <= value} (lower), plus
// rejection with probability gamma on the adjacent atom `boundary`.
struct CriticalValue {
    TailDirection direction = TailDirection::upper;
    StatValue value = 0;
    bool beyond_support = false;  // value is one step past the extreme atom
    mpq_class attained_level;     // P(reject region)
    mpq_class gamma;              // in [0,1)
    bool has_boundary = false;
    StatValue boundary = 0;
};

CriticalValue critical_value(const NullDistribution& d, const mpq_class& alpha);
CriticalValue critical_value(const NullDistribution& d, double alpha);

enum class Decision { reject, accept_null, reject_with_probability_gamma };
std::string to_string(Decision d);
Decision parse_decision(const std::string& s);
std::string to_string(TailDirection t);
TailDirection parse_tail(const std::string& s);

struct TestResult {
    StatisticKind kind = StatisticKind::PA;
    std::size_t k = 0;
    std::size_t n = 0;
    StatValue observed = 0;
    mpq_class p_value;
    double alpha = 0.05;
    StatValue critical_value = 0;
    bool critical_beyond_support = false;
    mpq_class attained_level;
    mpq_class gamma;
    Decision decision = Decision::accept_null;
    TailDirection tail = TailDirection::upper;
    bool randomized = false;
    bool rejected = false;  // realized outcome (draws the auxiliary uniform when randomized)

    friend bool operator==(const TestResult&, const TestResult&) = default;
};

// `u` is the auxiliary uniform for the boundary atom; ignored unless randomized.
TestResult decide(StatisticKind kind, const NullDistribution& d, const CriticalValue& cv, StatValue observed,
                  double alpha, bool randomized, double u);

// Draws exactly one uniform from `rng` when randomized.
TestResult run_test(const RssSample& sample, StatisticKind kind, const NullDistribution& d, double alpha,
                    bool randomized, PhiloxStream& rng);

// --- null sample generation & Monte Carlo --------------------------------

inline constexpr std::uint32_t kNullDomain = 0x4E554C4Cu;  // "NULL"

// Cell (i,l) is the (i+1)-th smallest of k fresh uniforms, cells visited
// cycle by cycle. k = 1 gives iid uniforms.
RssSample simulate_null_sample(std::size_t k, std::size_t n, PhiloxStream& rng);

struct MonteCarloOptions {
    std::uint64_t reps = 100'000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

NullDistribution mc_null_distribution(StatisticKind kind, std::size_t k, std::size_t n, const MonteCarloOptions& opt);

// Several kinds from the same simulated samples; each result equals the
// single-kind call with the same options.
std::vector<NullDistribution> mc_null_distributions(std::span<const StatisticKind> kinds, std::size_t k,
                                                    std::size_t n, const MonteCarloOptions& opt);

// --- exact engine ---------------------------------------------------------

inline constexpr std::size_t kExactDefaultCells = 8;
inline constexpr std::size_t kExactMaxCells = 10;

struct ExactOptions {
    std::size_t max_cells = kExactDefaultCells;  // opt in to at most kExactMaxCells
};

// Probability that independent order statistics, the m-th drawn from slot
// slot_sequence[m] of a set of size k, satisfy V_0 < V_1 < ... .
mpq_class ordering_probability(std::size_t k, std::span<const std::size_t> slot_sequence);

NullDistribution exact_null_distribution(StatisticKind kind, std::size_t k, std::size_t n,
                                         const ExactOptions& opt = {});
std::vector<NullDistribution> exact_null_distributions(std::span<const StatisticKind> kinds, std::size_t k,
                                                       std::size_t n, const ExactOptions& opt = {});

}  // namespace rss
