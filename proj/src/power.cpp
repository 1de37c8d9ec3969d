#include "rss/power.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rss/parallel.hpp"

namespace rss {

std::string to_string(NullSource::Mode m) {
    switch (m) {
        case NullSource::Mode::automatic: return "auto";
        case NullSource::Mode::exact: return "exact";
        case NullSource::Mode::monte_carlo: return "mc";
    }
    throw std::logic_error("unhandled null mode");
}

NullSource::Mode parse_null_mode(const std::string& s) {
    if (s == "auto") return NullSource::Mode::automatic;
    if (s == "exact") return NullSource::Mode::exact;
    if (s == "mc" || s == "monte-carlo") return NullSource::Mode::monte_carlo;
    throw std::invalid_argument("unknown null source '" + s + "' (expected auto, exact or mc)");
}

std::uint64_t PowerStudy::null_seed() const { return null_source.seed ? *null_source.seed : mix_seed(seed); }

void validate(const PowerStudy& s) {
    if (s.k < 2 || s.n < 1) throw std::invalid_argument("power study needs k >= 2 and n >= 1");
    if (s.kinds.empty()) throw std::invalid_argument("power study needs at least one statistic");
    if (s.lambda_grid.empty()) throw std::invalid_argument("power study needs a non-empty lambda grid");
    for (double l : s.lambda_grid) validate(ImperfectModel{s.model, l});
    if (!(s.alpha > 0 && s.alpha < 1)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (s.reps < 1) throw std::invalid_argument("power study needs reps >= 1");
    if (s.null_source.reps < 1) throw std::invalid_argument("null reps must be >= 1");
}

double PowerTable::estimate(std::size_t row, std::size_t j) const {
    return static_cast<double>(rows.at(row).rejections.at(j)) / static_cast<double>(study.reps);
}

double PowerTable::standard_error(std::size_t row, std::size_t j) const {
    const double p = estimate(row, j);
    return std::sqrt(p * (1 - p) / static_cast<double>(study.reps));
}

std::optional<std::size_t> PowerTable::row_of(StatisticKind kind) const {
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].kind == kind) return r;
    }
    return std::nullopt;
}

std::vector<NullDistribution> study_null_distributions(const PowerStudy& study) {
    const auto& src = study.null_source;
    const bool exact = src.mode == NullSource::Mode::exact ||
                       (src.mode == NullSource::Mode::automatic && study.k * study.n <= src.max_cells);
    if (exact) return exact_null_distributions(study.kinds, study.k, study.n, ExactOptions{src.max_cells});
    return mc_null_distributions(study.kinds, study.k, study.n,
                                 MonteCarloOptions{src.reps, study.null_seed(), study.threads});
}

PowerTable estimate_power(const PowerStudy& study) {
    validate(study);
    return estimate_power(study, study_null_distributions(study));
}

PowerTable estimate_power(const PowerStudy& study, const std::vector<NullDistribution>& nulls) {
    validate(study);
    if (nulls.size() != study.kinds.size()) throw std::invalid_argument("one null distribution per kind required");
    std::vector<CriticalValue> cvs;
    for (std::size_t q = 0; q < nulls.size(); ++q) {
        if (nulls[q].kind() != study.kinds[q] || nulls[q].k() != study.k || nulls[q].n() != study.n) {
            throw std::invalid_argument("null distribution does not match the study's kinds, k and n");
        }
        cvs.push_back(critical_value(nulls[q], study.alpha));
    }

    PowerTable table;
    table.study = study;
    for (std::size_t q = 0; q < study.kinds.size(); ++q) {
        table.rows.push_back(PowerRow{study.kinds[q], {}, nulls[q].provenance()});
    }

    for (std::size_t j = 0; j < study.lambda_grid.size(); ++j) {
        const GeneratorConfig cfg{study.k, study.n, ImperfectModel{study.model, study.lambda_grid[j]},
                                  study.population};
        using Counts = std::vector<std::uint64_t>;
        const Counts rejections = parallel_reduce(
            study.reps, study.threads, Counts(study.kinds.size(), 0),
            [&](std::uint64_t r, Counts& acc) {
                PhiloxStream rng(study.seed, r, static_cast<std::uint32_t>(j));
                const RssSample s = generate(cfg, rng).sample;
                const double u = rng.uniform();  // shared by all kinds
                const RankInfo ranks = compute_ranks(s);
                for (std::size_t q = 0; q < study.kinds.size(); ++q) {
                    const StatValue t = evaluate(study.kinds[q], s, ranks);
                    if (decide(study.kinds[q], nulls[q], cvs[q], t, study.alpha, true, u).rejected) ++acc[q];
                }
            },
            [](Counts& into, const Counts& part) {
                for (std::size_t q = 0; q < into.size(); ++q) into[q] += part[q];
            });
        for (std::size_t q = 0; q < study.kinds.size(); ++q) table.rows[q].rejections.push_back(rejections[q]);
    }
    return table;
}

namespace {

struct Row {
    std::string label;
    StatisticKind kind;
    const PowerTable* table;
    std::size_t index;
};

}  // namespace

DominanceReport compare_tests(const std::vector<PowerTable>& tables) {
    if (tables.empty()) throw std::invalid_argument("no power tables to compare");
    const PowerStudy& ref = tables.front().study;
    for (const auto& t : tables) {
        const auto& s = t.study;
        if (s.k != ref.k || s.n != ref.n || s.model != ref.model || s.lambda_grid != ref.lambda_grid ||
            s.alpha != ref.alpha) {
            throw std::invalid_argument("power tables differ in k, n, model, lambda grid or alpha");
        }
    }

    std::vector<Row> rows;
    std::map<std::string, int> seen;
    for (const auto& t : tables) {
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            std::string label(to_string(t.rows[r].kind));
            if (const int c = ++seen[label]; c > 1) label += "#" + std::to_string(c);
            rows.push_back({label, t.rows[r].kind, &t, r});
        }
    }

    const std::size_t m = ref.lambda_grid.size();
    DominanceReport rep;
    for (const auto& r : rows) rep.labels.push_back(r.label);

    for (std::size_t j = 0; j < m; ++j) {
        LambdaRanking lr{ref.lambda_grid[j], {}};
        for (const auto& r : rows) lr.ranked.emplace_back(r.label, r.table->estimate(r.index, j));
        std::stable_sort(lr.ranked.begin(), lr.ranked.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        rep.per_lambda.push_back(std::move(lr));
    }

    for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = a + 1; b < rows.size(); ++b) {
            PairComparison pc{rows[a].label, rows[b].label, {}, {}, {}};
            for (std::size_t j = 0; j < m; ++j) {
                const double d = rows[a].table->estimate(rows[a].index, j) - rows[b].table->estimate(rows[b].index, j);
                const double sa = rows[a].table->standard_error(rows[a].index, j);
                const double sb = rows[b].table->standard_error(rows[b].index, j);
                const double se = std::sqrt(sa * sa + sb * sb);
                pc.difference.push_back(d);
                pc.joint_se.push_back(se);
                pc.verdict.push_back(std::abs(d) > 2 * se ? (d > 0 ? 1 : -1) : 0);
            }
            rep.pairs.push_back(std::move(pc));
        }
    }

    auto find_pair = [&](const std::string& x, const std::string& y) -> std::optional<std::pair<const PairComparison*, int>> {
        for (const auto& p : rep.pairs) {
            if (p.first == x && p.second == y) return std::make_pair(&p, 1);
            if (p.first == y && p.second == x) return std::make_pair(&p, -1);
        }
        return std::nullopt;
    };

    const std::pair<const char*, const char*> counterparts[] = {
        {"PN", "N_sum"}, {"PA", "A_sum"}, {"PS", "S_sum"}, {"J", "N_sum"}, {"Wstar", "S_sum"}};
    for (const auto& [proposed, old] : counterparts) {
        const auto found = find_pair(proposed, old);
        if (!found) continue;
        int higher = 0, lower = 0;
        for (int v : found->first->verdict) {
            higher += v * found->second > 0;
            lower += v * found->second < 0;
        }
        std::ostringstream os;
        os << "I: " << proposed << " vs " << old << ": significantly higher at " << higher << "/" << m << " lambda, "
           << (lower == 0 ? std::string("never significantly lower")
                          : "significantly lower at " + std::to_string(lower) + "/" + std::to_string(m) + " lambda");
        rep.verdicts.push_back(os.str());
    }

    std::map<std::string, int> top_count;
    for (const auto& lr : rep.per_lambda) ++top_count[lr.ranked.front().first];
    auto tops = [&](const std::string& label) {
        const auto it = top_count.find(label);
        return it == top_count.end() ? 0 : it->second;
    };
    switch (ref.model) {
        case ImperfectModel::Tag::concomitant: {
            const char* proposed[] = {"PN", "PA", "PS", "J", "Wstar"};
            int significant = 0, total = 0;
            for (const auto* x : proposed) {
                for (const auto* y : proposed) {
                    if (std::string(x) >= std::string(y)) continue;
                    if (const auto f = find_pair(x, y)) {
                        for (int v : f->first->verdict) {
                            ++total;
                            significant += v != 0;
                        }
                    }
                }
            }
            rep.verdicts.push_back("II: permutation-type tests differ significantly in " + std::to_string(significant) +
                                   "/" + std::to_string(total) + " pairwise lambda comparisons");
            break;
        }
        case ImperfectModel::Tag::random_fraction:
        case ImperfectModel::Tag::inverse_fraction:
            rep.verdicts.push_back("III: Wstar ranked first at " + std::to_string(tops("Wstar")) + "/" +
                                   std::to_string(m) + " lambda");
            break;
        case ImperfectModel::Tag::neighbor_fraction:
            rep.verdicts.push_back("IV: PA ranked first at " + std::to_string(tops("PA")) + "/" + std::to_string(m) +
                                   " lambda");
            break;
        case ImperfectModel::Tag::perfect:
            break;
    }
    return rep;
}

std::string power_table_csv(const PowerTable& table) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "kind";
    for (double l : table.study.lambda_grid) os << ',' << l;
    os << '\n';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        os << to_string(table.rows[r].kind);
        for (std::size_t j = 0; j < table.study.lambda_grid.size(); ++j) os << ',' << table.estimate(r, j);
        os << '\n';
    }
    return os.str();
}

std::string dominance_summary(const DominanceReport& rep) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4);
    for (const auto& lr : rep.per_lambda) {
        os << "lambda " << lr.lambda << ":";
        for (const auto& [label, p] : lr.ranked) os << "  " << label << "=" << p;
        os << '\n';
    }
    for (const auto& v : rep.verdicts) os << v << '\n';
    return os.str();
}

}  // namespace rss
