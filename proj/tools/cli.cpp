#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>

#include "rss/null_distribution.hpp"
#include "rss/power.hpp"
#include "rss/rational_poly.hpp"
#include "rss/serialization.hpp"
#include "rss/verify.hpp"

namespace rss::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// "2..5" or "2,3,5".
std::vector<std::size_t> parse_size_list(const std::string& s, const char* what) {
    std::vector<std::size_t> out;
    try {
        if (const auto dots = s.find(".."); dots != std::string::npos) {
            const std::size_t lo = std::stoul(s.substr(0, dots));
            const std::size_t hi = std::stoul(s.substr(dots + 2));
            for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
        } else {
            for (const auto& item : split(s, ',')) out.push_back(std::stoul(item));
        }
    } catch (const std::exception&) {
        throw UsageError(std::string("malformed ") + what + " list '" + s + "'");
    }
    if (out.empty()) throw UsageError(std::string("empty ") + what + " list");
    return out;
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
    std::vector<double> out;
    for (const auto& item : split(s, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || used == 0) throw UsageError(std::string("malformed ") + what + " '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError(std::string("empty ") + what + " list");
    return out;
}

std::vector<StatisticKind> parse_kinds(const std::string& s) {
    std::vector<StatisticKind> out;
    for (const auto& tag : split(s, ',')) {
        try {
            out.push_back(parse_kind(tag));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (out.empty()) throw UsageError("no statistic given");
    return out;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, std::ostream& err, bool& generated) {
    if (seed) return *seed;
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    generated = true;
    err << "note: no --seed given; using generated seed " << s << "\n";
    return s;
}

std::string fmt5(const mpq_class& q) { return to_decimal(q, 5); }

struct Common {
    std::string format = "text";
    unsigned threads = 1;
};

// ----------------------------------------------------------------- test

struct TestArgs {
    std::string stat;
    double alpha = 0.05;
    std::string layout;
    std::string input;
    bool randomized = false;
    std::optional<std::uint64_t> seed;
    std::string null_mode = "auto";
    std::uint64_t null_reps = 100'000;
    std::optional<std::uint64_t> null_seed;
    std::size_t max_cells = kExactDefaultCells;
    std::string null_file;
};

NullDistribution obtain_null(StatisticKind kind, std::size_t k, std::size_t n, const std::string& mode,
                             std::size_t max_cells, std::uint64_t reps, const std::function<std::uint64_t()>& seed,
                             unsigned threads, std::ostream& err) {
    const auto m = parse_null_mode(mode);
    if (m != NullSource::Mode::monte_carlo) {
        try {
            return exact_null_distribution(kind, k, n, ExactOptions{max_cells});
        } catch (const CapExceeded& e) {
            err << "warning: " << e.what() << "; falling back to Monte Carlo with " << reps << " reps\n";
        }
    }
    return mc_null_distribution(kind, k, n, MonteCarloOptions{reps, seed(), threads});
}

int cmd_test(const TestArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
    const StatisticKind kind = parse_kinds(a.stat).at(0);
    if (!(a.alpha > 0 && a.alpha < 1)) throw UsageError("--alpha must lie in (0, 1)");
    const CsvLayout layout = [&] {
        try {
            return parse_layout(a.layout);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();

    std::ifstream in(a.input);
    if (!in) throw DataError("cannot read input file '" + a.input + "'");
    const RssSample sample = parse_csv(in, layout);

    bool seed_generated = false;
    std::optional<std::uint64_t> seed_used;
    auto seed_fn = [&]() {
        if (!seed_used) seed_used = resolve_seed(a.seed, err, seed_generated);
        return *seed_used;
    };
    bool null_seed_needed = false;
    auto null_seed_fn = [&]() {
        null_seed_needed = true;
        return a.null_seed ? *a.null_seed : mix_seed(seed_fn());
    };

    std::optional<NullDistribution> dist;
    if (!a.null_file.empty()) {
        std::ifstream nf(a.null_file);
        if (!nf) throw DataError("cannot read null distribution file '" + a.null_file + "'");
        try {
            dist = null_distribution_from_json(json::parse(nf));
        } catch (const std::exception& e) {
            throw DataError(std::string("invalid null distribution file: ") + e.what());
        }
    } else {
        dist = obtain_null(kind, sample.k(), sample.n(), a.null_mode, a.max_cells, a.null_reps, null_seed_fn,
                           c.threads, err);
    }

    std::uint64_t draw_seed = 0;
    if (a.randomized) draw_seed = seed_fn();
    PhiloxStream rng(draw_seed, 0, 0x54455354u);  // "TEST"
    TestResult r;
    try {
        r = run_test(sample, kind, *dist, a.alpha, a.randomized, rng);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }

    json config{{"subcommand", "test"},
                {"stat", std::string(to_string(kind))},
                {"alpha", a.alpha},
                {"layout", to_string(layout)},
                {"input", a.input},
                {"randomized", a.randomized},
                {"null_mode", a.null_mode},
                {"null_reps", a.null_reps},
                {"max_cells", a.max_cells},
                {"threads", c.threads},
                {"rng", kRngName}};
    if (seed_used) config["seed"] = *seed_used;
    if (null_seed_needed) config["null_seed"] = null_seed_fn();
    if (!a.null_file.empty()) config["null_file"] = a.null_file;

    if (c.format == "json") {
        out << json{{"config", config}, {"result", to_json(r)}, {"null_provenance", to_json(dist->provenance())}}.dump(2)
            << "\n";
    } else if (c.format == "csv") {
        out << "stat,k,n,observed,p_value,tail,critical_value,attained_level,gamma,decision,rejected,null\n"
            << to_string(kind) << ',' << r.k << ',' << r.n << ',' << r.observed << ',' << std::setprecision(17)
            << r.p_value.get_d() << ',' << to_string(r.tail) << ',' << r.critical_value << ','
            << r.attained_level.get_d() << ',' << r.gamma.get_d() << ',' << to_string(r.decision) << ','
            << (r.rejected ? "true" : "false") << ',' << (dist->provenance().is_exact() ? "exact" : "monte-carlo")
            << "\n";
    } else {
        out << "# config: " << config.dump() << "\n";
        out << "statistic:      " << to_string(kind) << " (k=" << r.k << ", n=" << r.n << ")\n";
        out << "observed:       " << r.observed << "\n";
        out << "tail:           " << to_string(r.tail) << " (reject for "
            << (r.tail == TailDirection::upper ? "large" : "small") << " values)\n";
        out << "p-value:        " << fmt5(r.p_value) << "  [" << to_rational_string(r.p_value) << "]\n";
        out << "critical value: " << (r.critical_beyond_support ? "beyond support " : "") << r.critical_value << "\n";
        out << "attained level: " << fmt5(r.attained_level) << "\n";
        out << "gamma:          " << fmt5(r.gamma) << "\n";
        out << "null:           "
            << (dist->provenance().is_exact() ? std::string("exact")
                                              : "monte-carlo (seed " + std::to_string(dist->provenance().seed) +
                                                    ", reps " + std::to_string(dist->provenance().reps) + ")")
            << "\n";
        out << "decision:       " << to_string(r.decision) << (r.rejected ? " -> reject" : " -> accept") << "\n";
    }
    return r.rejected ? kExitReject : kExitAccept;
}

// ----------------------------------------------------------- null-table

struct NullTableArgs {
    std::string stat = "PA";
    std::string k = "2..3";
    std::string n = "2..3";
    std::string alphas = "0.05,0.10";
    std::string null_mode = "auto";
    std::uint64_t reps = 100'000;
    std::optional<std::uint64_t> seed;
    std::size_t max_cells = kExactDefaultCells;
    std::string save_dir;
};

int cmd_null_table(const NullTableArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
    const StatisticKind kind = parse_kinds(a.stat).at(0);
    const auto ks = parse_size_list(a.k, "k");
    const auto ns = parse_size_list(a.n, "n");
    const auto alphas = parse_double_list(a.alphas, "alpha");
    for (double al : alphas) {
        if (!(al > 0 && al <= 1)) throw UsageError("alpha values must lie in (0, 1]");
    }
    for (auto k : ks) {
        if (k < 2) throw UsageError("k must be at least 2");
    }
    for (auto n : ns) {
        if (n < 1) throw UsageError("n must be at least 1");
    }
    bool generated = false;
    std::optional<std::uint64_t> seed_used;
    auto seed_fn = [&]() {
        if (!seed_used) seed_used = resolve_seed(a.seed, err, generated);
        return *seed_used;
    };

    json rows = json::array();
    std::ostringstream text;
    std::ostringstream csv;
    csv << "stat,k,n,alpha,cv,beyond_support,level,level_exact,gamma,gamma_exact,provenance\n";
    text << "stat  k  n  alpha     CV        level     gamma\n";
    for (auto k : ks) {
        for (auto n : ns) {
            const NullDistribution d =
                obtain_null(kind, k, n, a.null_mode, a.max_cells, a.reps, seed_fn, c.threads, err);
            const bool mc = !d.provenance().is_exact();
            if (!a.save_dir.empty()) {
                std::filesystem::create_directories(a.save_dir);
                const auto path = std::filesystem::path(a.save_dir) /
                                  ("null_" + std::string(to_string(kind)) + "_k" + std::to_string(k) + "_n" +
                                   std::to_string(n) + ".json");
                std::ofstream f(path);
                f << to_json(d).dump(2) << "\n";
            }
            for (double al : alphas) {
                const CriticalValue cv = critical_value(d, al);
                rows.push_back(json{{"k", k},
                                    {"n", n},
                                    {"alpha", al},
                                    {"cv", cv.value},
                                    {"beyond_support", cv.beyond_support},
                                    {"level", to_rational_string(cv.attained_level)},
                                    {"level_decimal", cv.attained_level.get_d()},
                                    {"gamma", to_rational_string(cv.gamma)},
                                    {"gamma_decimal", cv.gamma.get_d()},
                                    {"provenance", to_json(d.provenance())}});
                csv << to_string(kind) << ',' << k << ',' << n << ',' << al << ',' << cv.value << ','
                    << (cv.beyond_support ? "true" : "false") << ',' << std::setprecision(17)
                    << cv.attained_level.get_d() << ',' << to_rational_string(cv.attained_level) << ','
                    << cv.gamma.get_d() << ',' << to_rational_string(cv.gamma) << ','
                    << (mc ? "monte-carlo" : "exact") << "\n";
                text << std::left << std::setw(6) << to_string(kind) << std::setw(3) << k << std::setw(3) << n
                     << std::setw(10) << al << std::setw(10) << (std::to_string(cv.value) + (cv.beyond_support ? "+" : ""))
                     << fmt5(cv.attained_level) << (mc ? "*" : " ") << "  " << fmt5(cv.gamma) << "\n";
            }
        }
    }
    json config{{"subcommand", "null-table"}, {"stat", std::string(to_string(kind))},
                {"k", a.k},                   {"n", a.n},
                {"alphas", alphas},           {"null_mode", a.null_mode},
                {"reps", a.reps},             {"max_cells", a.max_cells},
                {"threads", c.threads},       {"rng", kRngName}};
    if (seed_used) config["seed"] = *seed_used;

    if (c.format == "json") {
        out << json{{"config", config}, {"rows", rows}}.dump(2) << "\n";
    } else if (c.format == "csv") {
        out << csv.str();
    } else {
        out << "# config: " << config.dump() << "\n" << text.str()
            << "* Monte Carlo level (" << a.reps << " reps); others exact\n";
    }
    return kExitAccept;
}

// ---------------------------------------------------------------- power

struct PowerArgs {
    std::size_t k = 0;
    std::size_t n = 0;
    std::string stats = "N_sum,S_sum,A_sum,J,Wstar,PA";
    std::string model;
    std::optional<std::string> lambdas;
    double alpha = 0.05;
    std::uint64_t reps = kDefaultPowerReps;
    std::optional<std::uint64_t> seed;
    std::string null_mode = "auto";
    std::uint64_t null_reps = kDefaultPowerNullReps;
    std::optional<std::uint64_t> null_seed;
    std::size_t max_cells = kExactDefaultCells;
    std::string population = "uniform";
    std::string out_csv;
    std::string out_json;
};

int cmd_power(const PowerArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
    PowerStudy s;
    s.k = a.k;
    s.n = a.n;
    s.kinds = parse_kinds(a.stats);
    ImperfectModel model;
    try {
        const bool has_param = a.model.find(':') != std::string::npos;
        if (has_param) {
            model = parse_model(a.model);
        } else {
            model.tag = parse_model_tag(a.model);
        }
        s.model = model.tag;
        if (a.lambdas) {
            if (has_param) throw UsageError("give the lambda either in --model or via --lambda, not both");
            s.lambda_grid = parse_double_list(*a.lambdas, "lambda");
        } else if (has_param) {
            s.lambda_grid = {model.lambda};
        } else if (model.tag == ImperfectModel::Tag::perfect) {
            s.lambda_grid = {0.0};
        } else {
            throw UsageError("no lambda grid: use --lambda or --model " + a.model + ":LAMBDA");
        }
        s.population = parse_population(a.population);
        s.null_source.mode = parse_null_mode(a.null_mode);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    s.alpha = a.alpha;
    s.reps = a.reps;
    bool generated = false;
    s.seed = resolve_seed(a.seed, err, generated);
    s.null_source.reps = a.null_reps;
    s.null_source.seed = a.null_seed;
    s.null_source.max_cells = a.max_cells;
    s.threads = c.threads;
    try {
        validate(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const PowerTable table = estimate_power(s);
    const DominanceReport report = compare_tests({table});
    json doc = to_json(table);
    doc["config"]["null_seed"] = s.null_seed();

    if (!a.out_csv.empty()) {
        std::ofstream f(a.out_csv);
        if (!f) throw DataError("cannot write '" + a.out_csv + "'");
        f << power_table_csv(table);
    }
    if (!a.out_json.empty()) {
        std::ofstream f(a.out_json);
        if (!f) throw DataError("cannot write '" + a.out_json + "'");
        f << doc.dump(2) << "\n";
    }

    if (c.format == "json") {
        out << doc.dump(2) << "\n";
    } else if (c.format == "csv") {
        out << power_table_csv(table);
    } else {
        out << "# config: " << doc["config"].dump() << "\n";
        out << std::fixed << std::setprecision(4) << std::left << std::setw(8) << "kind";
        for (double l : s.lambda_grid) out << std::setw(9) << l;
        out << "\n";
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            out << std::setw(8) << to_string(table.rows[r].kind);
            for (std::size_t j = 0; j < s.lambda_grid.size(); ++j) out << std::setw(9) << table.estimate(r, j);
            out << "\n";
        }
        out << "(reps " << s.reps << ", max SE "
            << [&] {
                   double m = 0;
                   for (std::size_t r = 0; r < table.rows.size(); ++r) {
                       for (std::size_t j = 0; j < s.lambda_grid.size(); ++j) m = std::max(m, table.standard_error(r, j));
                   }
                   return m;
               }()
            << ")\n\n"
            << dominance_summary(report);
    }
    return kExitAccept;
}

// --------------------------------------------------------------- verify

struct VerifyArgs {
    std::size_t instances = 200;
    std::optional<std::uint64_t> seed;
    std::size_t max_k = 5;
    std::size_t max_n = 5;
    bool inject_fault = false;
};

int cmd_verify(const VerifyArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
    if (a.max_k < 2 || a.max_n < 1) throw UsageError("--max-k must be >= 2 and --max-n >= 1");
    bool generated = false;
    VerifyOptions opt{resolve_seed(a.seed, err, generated), a.instances, a.max_k, a.max_n, a.inject_fault};
    const VerifyReport rep = run_identity_suite(opt);
    json config{{"subcommand", "verify"}, {"seed", opt.seed},   {"instances", opt.instances},
                {"max_k", opt.max_k},     {"max_n", opt.max_n}, {"inject_fault", opt.inject_fault}};
    if (c.format == "json") {
        json checks = json::array();
        for (const auto& ch : rep.checks) {
            checks.push_back(json{{"name", ch.name},
                                  {"checked", ch.checked},
                                  {"failures", ch.failures},
                                  {"first_failure", ch.first_failure}});
        }
        out << json{{"config", config}, {"ok", rep.ok()}, {"checks", checks}}.dump(2) << "\n";
    } else {
        out << "# config: " << config.dump() << "\n" << rep.to_text() << (rep.ok() ? "all identities hold\n" : "VIOLATIONS FOUND\n");
    }
    return rep.ok() ? kExitAccept : kExitVerifyFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tests of perfect ranking for balanced ranked set samples", "rsspr"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file mirroring the flags");

    Common common;
    app.add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    app.add_option("--threads", common.threads, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    TestArgs ta;
    auto* test = app.add_subcommand("test", "Test perfect ranking on a CSV sample");
    test->add_option("--stat", ta.stat, "Statistic tag")->required();
    test->add_option("--alpha", ta.alpha, "Significance level")->capture_default_str();
    test->add_option("--layout", ta.layout, "cycles-as-rows | cycles-as-columns")->required();
    test->add_option("input", ta.input, "CSV file")->required();
    test->add_flag("--randomized", ta.randomized, "Randomize on the boundary atom");
    test->add_option("--seed", ta.seed, "Seed for randomization and Monte Carlo");
    test->add_option("--null", ta.null_mode, "auto | exact | mc")->capture_default_str();
    test->add_option("--null-reps", ta.null_reps, "Monte Carlo null replicates")->capture_default_str();
    test->add_option("--null-seed", ta.null_seed, "Monte Carlo null seed (default derived from --seed)");
    test->add_option("--max-cells", ta.max_cells, "Exact engine cap on k*n (at most 10)")->capture_default_str();
    test->add_option("--null-file", ta.null_file, "Load the null distribution from JSON");

    NullTableArgs na;
    auto* table = app.add_subcommand("null-table", "Critical values, attained levels and randomization");
    table->add_option("--stat", na.stat, "Statistic tag")->capture_default_str();
    table->add_option("--k", na.k, "Set sizes, e.g. 2..5 or 2,4")->capture_default_str();
    table->add_option("--n", na.n, "Cycle counts, e.g. 2..5")->capture_default_str();
    table->add_option("--alpha", na.alphas, "Comma-separated levels")->capture_default_str();
    table->add_option("--null", na.null_mode, "auto | exact | mc")->capture_default_str();
    table->add_option("--reps", na.reps, "Monte Carlo replicates")->capture_default_str();
    table->add_option("--seed", na.seed, "Monte Carlo seed");
    table->add_option("--max-cells", na.max_cells, "Exact engine cap on k*n (at most 10)")->capture_default_str();
    table->add_option("--save-dir", na.save_dir, "Write each null distribution as JSON here");

    PowerArgs pa;
    auto* power = app.add_subcommand("power", "Power under an imperfect-ranking model");
    power->add_option("--k", pa.k, "Set size")->required();
    power->add_option("--n", pa.n, "Cycles")->required();
    power->add_option("--stat", pa.stats, "Comma-separated statistic tags")->capture_default_str();
    power->add_option("--model", pa.model, "perfect | concomitant[:L] | random[:L] | inverse[:L] | neighbor[:L]")
        ->required();
    power->add_option("--lambda", pa.lambdas, "Comma-separated lambda grid");
    power->add_option("--alpha", pa.alpha, "Significance level")->capture_default_str();
    power->add_option("--reps", pa.reps, "Replicates per lambda")->capture_default_str();
    power->add_option("--seed", pa.seed, "Power simulation seed");
    power->add_option("--null", pa.null_mode, "auto | exact | mc")->capture_default_str();
    power->add_option("--null-reps", pa.null_reps, "Monte Carlo null replicates")->capture_default_str();
    power->add_option("--null-seed", pa.null_seed, "Null seed (default derived from --seed)");
    power->add_option("--max-cells", pa.max_cells, "Exact engine cap on k*n (at most 10)")->capture_default_str();
    power->add_option("--population", pa.population, "uniform | normal")->capture_default_str();
    power->add_option("--out-csv", pa.out_csv, "Write the power table as CSV");
    power->add_option("--out-json", pa.out_json, "Write the power table as JSON");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Check the exact identities between statistics");
    verify->add_option("--instances", va.instances, "Random instances")->capture_default_str();
    verify->add_option("--seed", va.seed, "Seed");
    verify->add_option("--max-k", va.max_k, "Largest k")->capture_default_str();
    verify->add_option("--max-n", va.max_n, "Largest n")->capture_default_str();
    verify->add_flag("--inject-fault", va.inject_fault, "Corrupt the fast PA route (harness self-test)")
        ->group("");

    std::vector<std::string> argv_storage{"rsspr"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_storage) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitAccept;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitAccept;
        }
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*test) return cmd_test(ta, common, out, err);
        if (*table) return cmd_null_table(na, common, out, err);
        if (*power) return cmd_power(pa, common, out, err);
        if (*verify) return cmd_verify(va, common, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const CapExceeded& e) {
        err << "limit exceeded: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace rss::cli
