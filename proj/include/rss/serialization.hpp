#pragma once

// Versioned JSON documents for null distributions, test results and power
// tables. Probabilities travel as exact "p/q" strings alongside decimals, so
// documents reload bit-exactly.

#include <json.hpp>

#include "rss/null_distribution.hpp"
#include "rss/power.hpp"

namespace rss {

inline constexpr int kJsonVersion = 1;

nlohmann::json to_json(const Provenance& p);
Provenance provenance_from_json(const nlohmann::json& j);

nlohmann::json to_json(const NullDistribution& d);
NullDistribution null_distribution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TestResult& r);
TestResult test_result_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PowerStudy& s);
PowerStudy power_study_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PowerTable& t);
PowerTable power_table_from_json(const nlohmann::json& j);

}  // namespace rss
