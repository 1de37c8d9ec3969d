#pragma once

// Monte Carlo power of randomized tests under imperfect-ranking models, and
// a dominance comparison across tests.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rss/null_distribution.hpp"
#include "rss/ranking_models.hpp"
#include "rss/statistics.hpp"

namespace rss {

inline constexpr std::uint64_t kDefaultPowerReps = 20'000;
inline constexpr std::uint64_t kDefaultPowerNullReps = 1'000'000;

struct NullSource {
    enum class Mode { automatic, exact, monte_carlo };
    Mode mode = Mode::automatic;                    // exact when kn <= max_cells, else Monte Carlo
    std::uint64_t reps = kDefaultPowerNullReps;     // Monte Carlo only
    std::optional<std::uint64_t> seed;              // defaults to mix_seed(study seed)
    std::size_t max_cells = kExactDefaultCells;

    friend bool operator==(const NullSource&, const NullSource&) = default;
};

std::string to_string(NullSource::Mode m);
NullSource::Mode parse_null_mode(const std::string& s);

struct PowerStudy {
    std::size_t k = 2;
    std::size_t n = 2;
    std::vector<StatisticKind> kinds;
    ImperfectModel::Tag model = ImperfectModel::Tag::perfect;
    std::vector<double> lambda_grid;
    double alpha = 0.05;
    std::uint64_t reps = kDefaultPowerReps;
    std::uint64_t seed = 0;
    NullSource null_source;
    Population population = Population::uniform;
    unsigned threads = 1;

    std::uint64_t null_seed() const;
    friend bool operator==(const PowerStudy&, const PowerStudy&) = default;
};

// Throws std::invalid_argument on an invalid configuration.
void validate(const PowerStudy& study);

struct PowerRow {
    StatisticKind kind = StatisticKind::PA;
    std::vector<std::uint64_t> rejections;  // per lambda
    Provenance null_provenance;

    friend bool operator==(const PowerRow&, const PowerRow&) = default;
};

struct PowerTable {
    PowerStudy study;
    std::vector<PowerRow> rows;

    double estimate(std::size_t row, std::size_t lambda_index) const;
    double standard_error(std::size_t row, std::size_t lambda_index) const;
    std::optional<std::size_t> row_of(StatisticKind kind) const;

    friend bool operator==(const PowerTable&, const PowerTable&) = default;
};

// Null distributions used by a study (one per kind, in study order).
std::vector<NullDistribution> study_null_distributions(const PowerStudy& study);

PowerTable estimate_power(const PowerStudy& study);
// Reuse precomputed null distributions (must match kinds, k and n).
PowerTable estimate_power(const PowerStudy& study, const std::vector<NullDistribution>& nulls);

struct PairComparison {
    std::string first;
    std::string second;
    std::vector<double> difference;  // first - second, per lambda
    std::vector<double> joint_se;
    std::vector<int> verdict;  // +1 first significantly higher, -1 lower, 0 not significant (2 joint SE)
};

struct LambdaRanking {
    double lambda = 0.0;
    std::vector<std::pair<std::string, double>> ranked;  // descending power
};

struct DominanceReport {
    std::vector<std::string> labels;
    std::vector<LambdaRanking> per_lambda;
    std::vector<PairComparison> pairs;
    std::vector<std::string> verdicts;
};

// Tables must share k, n, model, lambda grid and alpha.
DominanceReport compare_tests(const std::vector<PowerTable>& tables);

std::string power_table_csv(const PowerTable& table);
std::string dominance_summary(const DominanceReport& report);

}  // namespace rss
