#include "rss/ranking_models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace rss {

bool lambda_in_domain(ImperfectModel::Tag tag, double lambda) {
    if (!std::isfinite(lambda)) return false;
    switch (tag) {
        case ImperfectModel::Tag::perfect: return true;
        case ImperfectModel::Tag::concomitant: return lambda >= -1.0 && lambda <= 1.0;
        default: return lambda >= 0.0 && lambda <= 1.0;
    }
}

void validate(const ImperfectModel& m) {
    if (!lambda_in_domain(m.tag, m.lambda)) {
        std::ostringstream os;
        os << "lambda " << m.lambda << " outside the domain of the " << to_string(m.tag) << " model ("
           << (m.tag == ImperfectModel::Tag::concomitant ? "[-1, 1]" : "[0, 1]") << ")";
        throw std::invalid_argument(os.str());
    }
}

std::string to_string(ImperfectModel::Tag tag) {
    switch (tag) {
        case ImperfectModel::Tag::perfect: return "perfect";
        case ImperfectModel::Tag::concomitant: return "concomitant";
        case ImperfectModel::Tag::random_fraction: return "random";
        case ImperfectModel::Tag::inverse_fraction: return "inverse";
        case ImperfectModel::Tag::neighbor_fraction: return "neighbor";
    }
    throw std::logic_error("unhandled model tag");
}

ImperfectModel::Tag parse_model_tag(const std::string& name) {
    for (auto tag : {ImperfectModel::Tag::perfect, ImperfectModel::Tag::concomitant,
                     ImperfectModel::Tag::random_fraction, ImperfectModel::Tag::inverse_fraction,
                     ImperfectModel::Tag::neighbor_fraction}) {
        if (to_string(tag) == name) return tag;
    }
    throw std::invalid_argument("unknown ranking model '" + name +
                                "' (expected perfect, concomitant, random, inverse or neighbor)");
}

ImperfectModel parse_model(const std::string& descriptor) {
    const auto colon = descriptor.find(':');
    ImperfectModel m;
    m.tag = parse_model_tag(descriptor.substr(0, colon));
    if (colon == std::string::npos) {
        if (m.tag != ImperfectModel::Tag::perfect) {
            throw std::invalid_argument("model '" + descriptor + "' needs a parameter, e.g. " + descriptor + ":0.5");
        }
        return m;
    }
    const std::string param = descriptor.substr(colon + 1);
    std::size_t used = 0;
    try {
        m.lambda = std::stod(param, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (param.empty() || used != param.size()) {
        throw std::invalid_argument("malformed model parameter in '" + descriptor + "'");
    }
    validate(m);
    return m;
}

std::string to_descriptor(const ImperfectModel& m) {
    if (m.tag == ImperfectModel::Tag::perfect) return "perfect";
    std::ostringstream os;
    os.precision(17);
    os << to_string(m.tag) << ':' << m.lambda;
    return os.str();
}

double perfect_ranking_lambda(ImperfectModel::Tag tag) {
    return tag == ImperfectModel::Tag::concomitant ? 1.0 : 0.0;
}

std::string to_string(Population p) { return p == Population::uniform ? "uniform" : "normal"; }

Population parse_population(const std::string& name) {
    if (name == "uniform") return Population::uniform;
    if (name == "normal" || name == "standard-normal") return Population::standard_normal;
    throw std::invalid_argument("unknown population '" + name + "'");
}

namespace {

double draw(Population p, PhiloxStream& rng) {
    return p == Population::uniform ? rng.uniform() : rng.normal();
}

// (order)-th smallest (1-based) of the set, clamped to [1, k].
double order_stat(std::vector<double>& sorted_set, std::ptrdiff_t order) {
    const auto k = static_cast<std::ptrdiff_t>(sorted_set.size());
    return sorted_set[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(order, 1, k) - 1)];
}

double generate_cell(const GeneratorConfig& cfg, std::size_t slot, PhiloxStream& rng, std::vector<double>& set,
                     std::vector<double>& conc) {
    const std::size_t k = cfg.k;
    const auto i = static_cast<std::ptrdiff_t>(slot + 1);
    const double lambda = cfg.model.lambda;

    if (cfg.model.tag == ImperfectModel::Tag::concomitant) {
        // (X, Y) standard bivariate normal with correlation lambda; keep X of the unit whose Y has rank i.
        const double resid = std::sqrt(std::max(0.0, 1.0 - lambda * lambda));
        for (std::size_t u = 0; u < k; ++u) {
            const double y = rng.normal();
            const double z = rng.normal();
            conc[u] = y;
            set[u] = lambda * y + resid * z;
        }
        std::vector<std::size_t> order(k);
        std::iota(order.begin(), order.end(), 0);
        std::nth_element(order.begin(), order.begin() + (i - 1), order.end(),
                         [&](std::size_t a, std::size_t b) { return conc[a] < conc[b]; });
        return set[order[static_cast<std::size_t>(i - 1)]];
    }

    for (auto& v : set) v = draw(cfg.population, rng);
    std::sort(set.begin(), set.end());

    switch (cfg.model.tag) {
        case ImperfectModel::Tag::perfect:
            return order_stat(set, i);
        case ImperfectModel::Tag::random_fraction: {
            const double coin = rng.uniform();
            const double fresh = draw(cfg.population, rng);
            return coin < lambda ? fresh : order_stat(set, i);
        }
        case ImperfectModel::Tag::inverse_fraction: {
            const double coin = rng.uniform();
            return coin < lambda ? order_stat(set, static_cast<std::ptrdiff_t>(k) - i + 1) : order_stat(set, i);
        }
        case ImperfectModel::Tag::neighbor_fraction: {
            const double coin = rng.uniform();
            if (coin < lambda / 2) return order_stat(set, i - 1);
            if (coin < lambda) return order_stat(set, i + 1);
            return order_stat(set, i);
        }
        default:
            break;
    }
    throw std::logic_error("unhandled model tag");
}

}  // namespace

GeneratedSample generate(const GeneratorConfig& cfg, PhiloxStream& rng) {
    if (cfg.k < 1 || cfg.n < 1) throw std::invalid_argument("generator needs k >= 1 and n >= 1");
    validate(cfg.model);
    std::vector<double> set(cfg.k);
    std::vector<double> conc(cfg.k);
    int regenerations = 0;
    for (;;) {
        Grid<double> g(cfg.k, cfg.n);
        for (std::size_t l = 0; l < cfg.n; ++l) {
            for (std::size_t i = 0; i < cfg.k; ++i) g(i, l) = generate_cell(cfg, i, rng, set, conc);
        }
        try {
            return {RssSample(std::move(g)), regenerations};
        } catch (const DataError&) {
            ++regenerations;
        }
    }
}

double population_cdf(Population p, double x) {
    if (p == Population::uniform) return std::clamp(x, 0.0, 1.0);
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double order_statistic_cdf(double f, std::size_t k, std::size_t i) {
    if (i < 1 || i > k) throw std::invalid_argument("order statistic index out of range");
    double acc = 0.0;
    double binom = 1.0;  // C(k, m)
    for (std::size_t m = 0; m <= k; ++m) {
        if (m >= i) acc += binom * std::pow(f, static_cast<double>(m)) * std::pow(1.0 - f, static_cast<double>(k - m));
        binom = binom * static_cast<double>(k - m) / static_cast<double>(m + 1);
    }
    return acc;
}

double marginal_cdf(const ImperfectModel& model, std::size_t k, std::size_t i, double x, Population population) {
    validate(model);
    const double f = population_cdf(population, x);
    const double lambda = model.lambda;
    auto os = [&](std::size_t order) { return order_statistic_cdf(f, k, std::clamp<std::size_t>(order, 1, k)); };
    switch (model.tag) {
        case ImperfectModel::Tag::perfect:
            return os(i);
        case ImperfectModel::Tag::random_fraction:
            return (1 - lambda) * os(i) + lambda * f;
        case ImperfectModel::Tag::inverse_fraction:
            return (1 - lambda) * os(i) + lambda * os(k - i + 1);
        case ImperfectModel::Tag::neighbor_fraction:
            return lambda / 2 * os(i == 1 ? 1 : i - 1) + (1 - lambda) * os(i) + lambda / 2 * os(i + 1);
        case ImperfectModel::Tag::concomitant:
            throw std::invalid_argument("no closed-form marginal CDF for the concomitant model");
    }
    throw std::logic_error("unhandled model tag");
}

}  // namespace rss
