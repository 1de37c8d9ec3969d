#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "rss/ranking_models.hpp"

using namespace rss;

namespace {

using Tag = ImperfectModel::Tag;

// Kolmogorov-Smirnov distance between an empirical sample and a CDF.
template <class Cdf>
double ks_distance(std::vector<double> xs, Cdf cdf) {
    std::sort(xs.begin(), xs.end());
    const double m = static_cast<double>(xs.size());
    double d = 0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double f = cdf(xs[j]);
        d = std::max({d, std::abs(f - j / m), std::abs((j + 1) / m - f)});
    }
    return d;
}

std::vector<double> slot_draws(const GeneratorConfig& cfg, std::size_t slot, int reps, std::uint64_t seed) {
    std::vector<double> xs;
    for (int r = 0; r < reps; ++r) {
        PhiloxStream rng(seed, static_cast<std::uint64_t>(r));
        const RssSample s = generate(cfg, rng).sample;
        for (std::size_t l = 0; l < s.n(); ++l) xs.push_back(s(slot, l));
    }
    return xs;
}

// 0.1% critical value of the KS statistic.
double ks_bound(std::size_t m) { return 1.95 / std::sqrt(static_cast<double>(m)); }

}  // namespace

TEST(ImperfectModel, DomainsAndDescriptors) {
    EXPECT_TRUE(lambda_in_domain(Tag::concomitant, -1));
    EXPECT_FALSE(lambda_in_domain(Tag::concomitant, 1.01));
    EXPECT_FALSE(lambda_in_domain(Tag::random_fraction, -0.1));
    EXPECT_FALSE(lambda_in_domain(Tag::neighbor_fraction, NAN));
    EXPECT_THROW(validate(ImperfectModel{Tag::inverse_fraction, 1.5}), std::invalid_argument);

    for (const char* d : {"perfect", "concomitant:0.5", "random:0.25", "inverse:1", "neighbor:0.3"}) {
        EXPECT_EQ(parse_model(to_descriptor(parse_model(d))), parse_model(d)) << d;
    }
    EXPECT_EQ(parse_model("neighbor:0.3"), (ImperfectModel{Tag::neighbor_fraction, 0.3}));
    EXPECT_THROW(parse_model("random"), std::invalid_argument);
    EXPECT_THROW(parse_model("random:x"), std::invalid_argument);
    EXPECT_THROW(parse_model("swap:0.1"), std::invalid_argument);
    EXPECT_EQ(perfect_ranking_lambda(Tag::concomitant), 1.0);
    EXPECT_EQ(perfect_ranking_lambda(Tag::random_fraction), 0.0);
}

TEST(MarginalCdf, Examples) {
    for (double x : {0.1, 0.5, 0.9}) {
        for (std::size_t i = 1; i <= 4; ++i) {
            const double os = order_statistic_cdf(x, 4, i);
            EXPECT_DOUBLE_EQ(marginal_cdf({Tag::random_fraction, 0}, 4, i, x), os);
            EXPECT_DOUBLE_EQ(marginal_cdf({Tag::neighbor_fraction, 0}, 4, i, x), os);
            EXPECT_DOUBLE_EQ(marginal_cdf({Tag::random_fraction, 1}, 4, i, x), x);
        }
    }
    EXPECT_NEAR(marginal_cdf({Tag::random_fraction, .5}, 2, 1, .5), .625, 1e-12);
    EXPECT_THROW(marginal_cdf({Tag::concomitant, .5}, 2, 1, .5), std::invalid_argument);
}

TEST(MarginalCdf, NeighborMatchesHalfInverseForTwoSlots) {
    for (double lambda : {0.2, 0.6, 1.0}) {
        for (double x : {0.2, 0.5, 0.7}) {
            for (std::size_t i = 1; i <= 2; ++i) {
                EXPECT_NEAR(marginal_cdf({Tag::neighbor_fraction, lambda}, 2, i, x),
                            marginal_cdf({Tag::inverse_fraction, lambda / 2}, 2, i, x), 1e-12);
            }
        }
    }
}

TEST(OrderStatisticCdf, BinomialTail) {
    EXPECT_NEAR(order_statistic_cdf(.5, 2, 1), .75, 1e-12);
    EXPECT_NEAR(order_statistic_cdf(.5, 2, 2), .25, 1e-12);
    EXPECT_NEAR(order_statistic_cdf(.3, 5, 5), std::pow(.3, 5), 1e-15);
    EXPECT_NEAR(order_statistic_cdf(.3, 5, 1), 1 - std::pow(.7, 5), 1e-15);
}

TEST(Generate, FractionModelsFitMarginals) {
    const int reps = 4000;
    for (Tag tag : {Tag::perfect, Tag::random_fraction, Tag::inverse_fraction, Tag::neighbor_fraction}) {
        for (double lambda : {0.0, 0.4, 1.0}) {
            for (Population pop : {Population::uniform, Population::standard_normal}) {
                const GeneratorConfig cfg{4, 2, {tag, lambda}, pop};
                for (std::size_t slot = 0; slot < 4; ++slot) {
                    const auto xs = slot_draws(cfg, slot, reps, 100 + slot);
                    const double d = ks_distance(xs, [&](double x) {
                        return marginal_cdf(cfg.model, 4, slot + 1, x, pop);
                    });
                    EXPECT_LT(d, ks_bound(xs.size())) << to_descriptor(cfg.model) << " slot " << slot + 1;
                }
            }
        }
    }
}

TEST(Generate, ConcomitantMarginals) {
    const int reps = 4000;
    // lambda = 1 is perfect ranking of normals, lambda = 0 is unranked.
    for (std::size_t slot = 0; slot < 3; ++slot) {
        const auto top = slot_draws({3, 2, {Tag::concomitant, 1.0}}, slot, reps, 200 + slot);
        EXPECT_LT(ks_distance(top,
                              [&](double x) {
                                  return order_statistic_cdf(population_cdf(Population::standard_normal, x), 3,
                                                             slot + 1);
                              }),
                  ks_bound(top.size()));
        const auto flat = slot_draws({3, 2, {Tag::concomitant, 0.0}}, slot, reps, 300 + slot);
        EXPECT_LT(ks_distance(flat, [](double x) { return population_cdf(Population::standard_normal, x); }),
                  ks_bound(flat.size()));
    }
    // Negative correlation reverses the ordering on average.
    const auto low = slot_draws({3, 1, {Tag::concomitant, -0.8}}, 0, reps, 400);
    double mean = 0;
    for (double x : low) mean += x;
    EXPECT_GT(mean / static_cast<double>(low.size()), 0.3);
}

TEST(Generate, InverseAtOneSwapsExtremesForTwoSlots) {
    const int reps = 4000;
    const GeneratorConfig cfg{2, 3, {Tag::inverse_fraction, 1.0}};
    const auto first = slot_draws(cfg, 0, reps, 500);
    const auto second = slot_draws(cfg, 1, reps, 501);
    EXPECT_LT(ks_distance(first, [](double x) { return x * x; }), ks_bound(first.size()));
    EXPECT_LT(ks_distance(second, [](double x) { return 1 - (1 - x) * (1 - x); }), ks_bound(second.size()));
}

TEST(Generate, DeterministicAndShaped) {
    const GeneratorConfig cfg{5, 4, {Tag::neighbor_fraction, 0.5}, Population::standard_normal};
    PhiloxStream a(7, 1), b(7, 1);
    const auto x = generate(cfg, a);
    EXPECT_EQ(x.sample, generate(cfg, b).sample);
    EXPECT_EQ(x.sample.k(), 5u);
    EXPECT_EQ(x.sample.n(), 4u);
    EXPECT_EQ(x.regenerations, 0);
    PhiloxStream c(7, 1);
    EXPECT_THROW(generate({3, 2, {Tag::random_fraction, 2.0}}, c), std::invalid_argument);
}

TEST(Population, Names) {
    EXPECT_EQ(parse_population("uniform"), Population::uniform);
    EXPECT_EQ(parse_population(to_string(Population::standard_normal)), Population::standard_normal);
    EXPECT_THROW(parse_population("cauchy"), std::invalid_argument);
    EXPECT_NEAR(population_cdf(Population::standard_normal, 0), 0.5, 1e-15);
    EXPECT_EQ(population_cdf(Population::uniform, 1.5), 1.0);
}
