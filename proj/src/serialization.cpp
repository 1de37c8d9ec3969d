#include "rss/serialization.hpp"

#include <stdexcept>

#include "rss/rational_poly.hpp"

namespace rss {

using nlohmann::json;

namespace {

void expect_format(const json& j, const char* format) {
    if (!j.is_object() || j.value("format", "") != format) {
        throw std::invalid_argument(std::string("not a ") + format + " document");
    }
    if (j.at("version").get<int>() != kJsonVersion) {
        throw std::invalid_argument(std::string("unsupported ") + format + " version");
    }
}

json rational(const mpq_class& q) { return json{{"exact", to_rational_string(q)}, {"decimal", q.get_d()}}; }

mpq_class rational_from(const json& j) { return parse_rational(j.at("exact").get<std::string>()); }

}  // namespace

json to_json(const Provenance& p) {
    if (p.is_exact()) return json{{"type", "exact"}};
    return json{{"type", "monte-carlo"}, {"seed", p.seed}, {"reps", p.reps}, {"rng", kRngName}};
}

Provenance provenance_from_json(const json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "exact") return Provenance{};
    if (type != "monte-carlo") throw std::invalid_argument("unknown provenance type '" + type + "'");
    return Provenance{Provenance::Source::monte_carlo, j.at("seed").get<std::uint64_t>(),
                      j.at("reps").get<std::uint64_t>()};
}

json to_json(const NullDistribution& d) {
    json probs = json::array();
    json decimals = json::array();
    for (const auto& p : d.probabilities()) {
        probs.push_back(to_rational_string(p));
        decimals.push_back(p.get_d());
    }
    return json{{"format", "rss-null-distribution"},
                {"version", kJsonVersion},
                {"kind", std::string(to_string(d.kind()))},
                {"k", d.k()},
                {"n", d.n()},
                {"provenance", to_json(d.provenance())},
                {"support", d.support()},
                {"probabilities", probs},
                {"probabilities_decimal", decimals}};
}

NullDistribution null_distribution_from_json(const json& j) {
    expect_format(j, "rss-null-distribution");
    std::vector<mpq_class> probs;
    for (const auto& p : j.at("probabilities")) probs.push_back(parse_rational(p.get<std::string>()));
    return NullDistribution(parse_kind(j.at("kind").get<std::string>()), j.at("k").get<std::size_t>(),
                            j.at("n").get<std::size_t>(), j.at("support").get<std::vector<StatValue>>(),
                            std::move(probs), provenance_from_json(j.at("provenance")));
}

json to_json(const TestResult& r) {
    return json{{"format", "rss-test-result"},
                {"version", kJsonVersion},
                {"kind", std::string(to_string(r.kind))},
                {"k", r.k},
                {"n", r.n},
                {"observed", r.observed},
                {"p_value", rational(r.p_value)},
                {"alpha", r.alpha},
                {"critical_value", r.critical_value},
                {"critical_beyond_support", r.critical_beyond_support},
                {"attained_level", rational(r.attained_level)},
                {"gamma", rational(r.gamma)},
                {"decision", to_string(r.decision)},
                {"tail", to_string(r.tail)},
                {"randomized", r.randomized},
                {"rejected", r.rejected}};
}

TestResult test_result_from_json(const json& j) {
    expect_format(j, "rss-test-result");
    TestResult r;
    r.kind = parse_kind(j.at("kind").get<std::string>());
    r.k = j.at("k").get<std::size_t>();
    r.n = j.at("n").get<std::size_t>();
    r.observed = j.at("observed").get<StatValue>();
    r.p_value = rational_from(j.at("p_value"));
    r.alpha = j.at("alpha").get<double>();
    r.critical_value = j.at("critical_value").get<StatValue>();
    r.critical_beyond_support = j.at("critical_beyond_support").get<bool>();
    r.attained_level = rational_from(j.at("attained_level"));
    r.gamma = rational_from(j.at("gamma"));
    r.decision = parse_decision(j.at("decision").get<std::string>());
    r.tail = parse_tail(j.at("tail").get<std::string>());
    r.randomized = j.at("randomized").get<bool>();
    r.rejected = j.at("rejected").get<bool>();
    return r;
}

json to_json(const PowerStudy& s) {
    json kinds = json::array();
    for (auto k : s.kinds) kinds.push_back(std::string(to_string(k)));
    json null_source{{"mode", to_string(s.null_source.mode)},
                     {"reps", s.null_source.reps},
                     {"max_cells", s.null_source.max_cells}};
    if (s.null_source.seed) null_source["seed"] = *s.null_source.seed;
    return json{{"k", s.k},
                {"n", s.n},
                {"kinds", kinds},
                {"model", to_string(s.model)},
                {"lambda_grid", s.lambda_grid},
                {"alpha", s.alpha},
                {"reps", s.reps},
                {"seed", s.seed},
                {"null_source", null_source},
                {"population", to_string(s.population)},
                {"threads", s.threads},
                {"rng", kRngName}};
}

PowerStudy power_study_from_json(const json& j) {
    PowerStudy s;
    s.k = j.at("k").get<std::size_t>();
    s.n = j.at("n").get<std::size_t>();
    for (const auto& k : j.at("kinds")) s.kinds.push_back(parse_kind(k.get<std::string>()));
    s.model = parse_model_tag(j.at("model").get<std::string>());
    s.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    s.alpha = j.at("alpha").get<double>();
    s.reps = j.at("reps").get<std::uint64_t>();
    s.seed = j.at("seed").get<std::uint64_t>();
    const auto& ns = j.at("null_source");
    s.null_source.mode = parse_null_mode(ns.at("mode").get<std::string>());
    s.null_source.reps = ns.at("reps").get<std::uint64_t>();
    s.null_source.max_cells = ns.at("max_cells").get<std::size_t>();
    if (ns.contains("seed")) s.null_source.seed = ns.at("seed").get<std::uint64_t>();
    s.population = parse_population(j.at("population").get<std::string>());
    s.threads = j.at("threads").get<unsigned>();
    return s;
}

json to_json(const PowerTable& t) {
    json rows = json::array();
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        json est = json::array();
        json se = json::array();
        for (std::size_t j = 0; j < t.study.lambda_grid.size(); ++j) {
            est.push_back(t.estimate(r, j));
            se.push_back(t.standard_error(r, j));
        }
        rows.push_back(json{{"kind", std::string(to_string(t.rows[r].kind))},
                            {"rejections", t.rows[r].rejections},
                            {"estimates", est},
                            {"standard_errors", se},
                            {"null_provenance", to_json(t.rows[r].null_provenance)}});
    }
    return json{{"format", "rss-power-table"}, {"version", kJsonVersion}, {"config", to_json(t.study)}, {"rows", rows}};
}

PowerTable power_table_from_json(const json& j) {
    expect_format(j, "rss-power-table");
    PowerTable t;
    t.study = power_study_from_json(j.at("config"));
    for (const auto& r : j.at("rows")) {
        t.rows.push_back(PowerRow{parse_kind(r.at("kind").get<std::string>()),
                                  r.at("rejections").get<std::vector<std::uint64_t>>(),
                                  provenance_from_json(r.at("null_provenance"))});
    }
    return t;
}

}  // namespace rss
