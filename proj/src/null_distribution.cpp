#include "rss/null_distribution.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "rss/parallel.hpp"

namespace rss {

NullDistribution::NullDistribution(StatisticKind kind, std::size_t k, std::size_t n, std::vector<StatValue> support,
                                   std::vector<mpq_class> probabilities, Provenance provenance)
    : kind_(kind), k_(k), n_(n), support_(std::move(support)), probs_(std::move(probabilities)),
      provenance_(provenance) {
    if (support_.empty() || support_.size() != probs_.size()) {
        throw std::invalid_argument("null distribution needs a non-empty support with one probability per atom");
    }
    const auto [lo, hi] = statistic_range(kind_, k_, n_);
    mpq_class total = 0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
        if (i > 0 && support_[i] <= support_[i - 1]) {
            throw std::invalid_argument("null distribution support must be strictly increasing");
        }
        if (support_[i] < lo || support_[i] > hi) {
            std::ostringstream os;
            os << "support value " << support_[i] << " outside the range [" << lo << ", " << hi << "] of "
               << to_string(kind_);
            throw std::invalid_argument(os.str());
        }
        if (probs_[i] < 0) throw std::invalid_argument("negative probability");
        total += probs_[i];
    }
    if (total != 1) throw std::invalid_argument("probabilities sum to " + total.get_str() + ", not 1");
}

NullDistribution NullDistribution::from_counts(StatisticKind kind, std::size_t k, std::size_t n,
                                               const std::map<StatValue, std::uint64_t>& counts,
                                               Provenance provenance) {
    std::uint64_t reps = 0;
    for (const auto& [v, c] : counts) reps += c;
    std::vector<StatValue> support;
    std::vector<mpq_class> probs;
    for (const auto& [v, c] : counts) {
        support.push_back(v);
        mpq_class p{mpz_class(std::to_string(c)), mpz_class(std::to_string(reps))};
        p.canonicalize();
        probs.push_back(p);
    }
    return NullDistribution(kind, k, n, std::move(support), std::move(probs), provenance);
}

mpq_class NullDistribution::point(StatValue v) const {
    const auto it = std::lower_bound(support_.begin(), support_.end(), v);
    if (it == support_.end() || *it != v) return 0;
    return probs_[static_cast<std::size_t>(it - support_.begin())];
}

mpq_class NullDistribution::upper_tail(StatValue v) const {
    mpq_class acc = 0;
    for (std::size_t i = support_.size(); i-- > 0 && support_[i] >= v;) acc += probs_[i];
    return acc;
}

mpq_class NullDistribution::lower_tail(StatValue v) const {
    mpq_class acc = 0;
    for (std::size_t i = 0; i < support_.size() && support_[i] <= v; ++i) acc += probs_[i];
    return acc;
}

mpq_class NullDistribution::p_value(StatValue observed) const {
    return tail_direction(kind_) == TailDirection::upper ? upper_tail(observed) : lower_tail(observed);
}

CriticalValue critical_value(const NullDistribution& d, const mpq_class& alpha) {
    if (alpha <= 0 || alpha > 1) throw std::invalid_argument("alpha must lie in (0, 1]");
    const auto& s = d.support();
    const auto& p = d.probabilities();
    const std::size_t m = s.size();
    CriticalValue cv;
    cv.direction = tail_direction(d.kind());

    // Walk atoms from the rejecting extreme inward; stop before the tail exceeds alpha.
    auto atom = [&](std::size_t step) { return cv.direction == TailDirection::upper ? m - 1 - step : step; };
    mpq_class tail = 0;
    std::size_t taken = 0;
    while (taken < m && tail + p[atom(taken)] <= alpha) {
        tail += p[atom(taken)];
        ++taken;
    }
    cv.attained_level = tail;
    if (taken == 0) {
        cv.beyond_support = true;
        cv.value = cv.direction == TailDirection::upper ? s.back() + 1 : s.front() - 1;
    } else {
        cv.value = s[atom(taken - 1)];
    }
    if (taken < m) {
        cv.has_boundary = true;
        const std::size_t b = atom(taken);
        cv.boundary = s[b];
        cv.gamma = (alpha - tail) / p[b];
    } else {
        cv.gamma = 0;
    }
    return cv;
}

CriticalValue critical_value(const NullDistribution& d, double alpha) {
    return critical_value(d, mpq_class(alpha));
}

std::string to_string(Decision d) {
    switch (d) {
        case Decision::reject: return "reject";
        case Decision::accept_null: return "acceptNull";
        case Decision::reject_with_probability_gamma: return "rejectWithProbabilityGamma";
    }
    throw std::logic_error("unhandled decision");
}

Decision parse_decision(const std::string& s) {
    if (s == "reject") return Decision::reject;
    if (s == "acceptNull") return Decision::accept_null;
    if (s == "rejectWithProbabilityGamma") return Decision::reject_with_probability_gamma;
    throw std::invalid_argument("unknown decision '" + s + "'");
}

std::string to_string(TailDirection t) { return t == TailDirection::upper ? "upper" : "lower"; }

TailDirection parse_tail(const std::string& s) {
    if (s == "upper") return TailDirection::upper;
    if (s == "lower") return TailDirection::lower;
    throw std::invalid_argument("unknown tail direction '" + s + "'");
}

TestResult decide(StatisticKind kind, const NullDistribution& d, const CriticalValue& cv, StatValue observed,
                  double alpha, bool randomized, double u) {
    TestResult r;
    r.kind = kind;
    r.k = d.k();
    r.n = d.n();
    r.observed = observed;
    r.p_value = d.p_value(observed);
    r.alpha = alpha;
    r.critical_value = cv.value;
    r.critical_beyond_support = cv.beyond_support;
    r.attained_level = cv.attained_level;
    r.gamma = cv.gamma;
    r.tail = cv.direction;
    r.randomized = randomized;

    const bool in_region = !cv.beyond_support &&
                           (cv.direction == TailDirection::upper ? observed >= cv.value : observed <= cv.value);
    if (in_region) {
        r.decision = Decision::reject;
        r.rejected = true;
    } else if (randomized && cv.has_boundary && observed == cv.boundary && cv.gamma > 0) {
        r.decision = Decision::reject_with_probability_gamma;
        r.rejected = mpq_class(u) < cv.gamma;
    } else {
        r.decision = Decision::accept_null;
        r.rejected = false;
    }
    return r;
}

TestResult run_test(const RssSample& sample, StatisticKind kind, const NullDistribution& d, double alpha,
                    bool randomized, PhiloxStream& rng) {
    if (d.kind() != kind || d.k() != sample.k() || d.n() != sample.n()) {
        std::ostringstream os;
        os << "null distribution is for " << to_string(d.kind()) << " at k=" << d.k() << ", n=" << d.n()
           << " but the test asks for " << to_string(kind) << " at k=" << sample.k() << ", n=" << sample.n();
        throw std::invalid_argument(os.str());
    }
    const double u = randomized ? rng.uniform() : 0.0;
    return decide(kind, d, critical_value(d, alpha), evaluate(kind, sample), alpha, randomized, u);
}

RssSample simulate_null_sample(std::size_t k, std::size_t n, PhiloxStream& rng) {
    if (k < 1 || n < 1) throw std::invalid_argument("simulate_null_sample needs k >= 1 and n >= 1");
    std::vector<double> set(k);
    for (;;) {
        Grid<double> g(k, n);
        for (std::size_t l = 0; l < n; ++l) {
            for (std::size_t i = 0; i < k; ++i) {
                for (auto& v : set) v = rng.uniform();
                std::nth_element(set.begin(), set.begin() + static_cast<std::ptrdiff_t>(i), set.end());
                g(i, l) = set[i];
            }
        }
        try {
            return RssSample(std::move(g));
        } catch (const DataError&) {
            // Tie between cells; continue the same substream.
        }
    }
}

std::vector<NullDistribution> mc_null_distributions(std::span<const StatisticKind> kinds, std::size_t k,
                                                    std::size_t n, const MonteCarloOptions& opt) {
    if (opt.reps < 1) throw std::invalid_argument("Monte Carlo needs reps >= 1");
    using Histograms = std::vector<std::map<StatValue, std::uint64_t>>;
    const Histograms counts = parallel_reduce(
        opt.reps, opt.threads, Histograms(kinds.size()),
        [&](std::uint64_t r, Histograms& acc) {
            PhiloxStream rng(opt.seed, r, kNullDomain);
            const RssSample s = simulate_null_sample(k, n, rng);
            const RankInfo ranks = compute_ranks(s);
            for (std::size_t q = 0; q < kinds.size(); ++q) ++acc[q][evaluate(kinds[q], s, ranks)];
        },
        [](Histograms& into, const Histograms& part) {
            for (std::size_t q = 0; q < into.size(); ++q) {
                for (const auto& [v, c] : part[q]) into[q][v] += c;
            }
        });
    Provenance prov{Provenance::Source::monte_carlo, opt.seed, opt.reps};
    std::vector<NullDistribution> out;
    out.reserve(kinds.size());
    for (std::size_t q = 0; q < kinds.size(); ++q) {
        out.push_back(NullDistribution::from_counts(kinds[q], k, n, counts[q], prov));
    }
    return out;
}

NullDistribution mc_null_distribution(StatisticKind kind, std::size_t k, std::size_t n,
                                      const MonteCarloOptions& opt) {
    const StatisticKind kinds[] = {kind};
    return mc_null_distributions(kinds, k, n, opt).front();
}

}  // namespace rss
