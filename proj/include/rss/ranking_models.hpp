#pragma once

// BRSS sample generators under perfect ranking and four imperfect-ranking
// mechanisms. Every cell (i, l) comes from its own comparison set of size k.

#include <string>

#include "rss/random.hpp"
#include "rss/sample.hpp"

namespace rss {

struct ImperfectModel {
    enum class Tag { perfect, concomitant, random_fraction, inverse_fraction, neighbor_fraction };
    Tag tag = Tag::perfect;
    double lambda = 0.0;  // correlation (concomitant) or mixing fraction

    friend bool operator==(const ImperfectModel&, const ImperfectModel&) = default;
};

// Throws std::invalid_argument when lambda is outside the model's domain.
void validate(const ImperfectModel& model);
bool lambda_in_domain(ImperfectModel::Tag tag, double lambda);

// "perfect", "concomitant", "random", "inverse", "neighbor".
std::string to_string(ImperfectModel::Tag tag);
ImperfectModel::Tag parse_model_tag(const std::string& name);

// Descriptor syntax: perfect | concomitant:L | random:L | inverse:L | neighbor:L
ImperfectModel parse_model(const std::string& descriptor);
std::string to_descriptor(const ImperfectModel& model);

// The parameter at which a model coincides with perfect ranking.
double perfect_ranking_lambda(ImperfectModel::Tag tag);

enum class Population { uniform, standard_normal };
std::string to_string(Population p);
Population parse_population(const std::string& name);

struct GeneratorConfig {
    std::size_t k = 2;
    std::size_t n = 1;
    ImperfectModel model;
    Population population = Population::uniform;
};

struct GeneratedSample {
    RssSample sample;
    int regenerations = 0;  // whole-sample redraws caused by ties
};

// Concomitant generation always uses the bivariate normal construction.
GeneratedSample generate(const GeneratorConfig& cfg, PhiloxStream& rng);

double population_cdf(Population p, double x);

// CDF of F_(i), the i-th (1-based) order statistic of k iid draws.
double order_statistic_cdf(double f, std::size_t k, std::size_t i);

// Mixture CDF of slot i (1-based) for fraction models; throws for concomitant.
double marginal_cdf(const ImperfectModel& model, std::size_t k, std::size_t i, double x,
                    Population population = Population::uniform);

}  // namespace rss
