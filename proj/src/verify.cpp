#include "rss/verify.hpp"

#include <cmath>
#include <sstream>

#include "rss/ranking_models.hpp"
#include "rss/statistics.hpp"

namespace rss {

namespace {

constexpr std::uint32_t kVerifyDomain = 0x56524659u;  // "VRFY"

std::string describe(const RssSample& s) {
    std::ostringstream os;
    os.precision(17);
    os << "k=" << s.k() << " n=" << s.n() << " [";
    for (std::size_t i = 0; i < s.k(); ++i) {
        os << (i ? "; " : "");
        for (std::size_t l = 0; l < s.n(); ++l) os << (l ? "," : "") << s(i, l);
    }
    os << "]";
    return os.str();
}

void record(IdentityCheck& c, bool holds, const RssSample& s, StatValue lhs, StatValue rhs) {
    ++c.checked;
    if (holds) return;
    if (c.failures++ == 0) {
        std::ostringstream os;
        os << describe(s) << ": " << lhs << " != " << rhs;
        c.first_failure = os.str();
    }
}

}  // namespace

bool VerifyReport::ok() const {
    for (const auto& c : checks) {
        if (c.failures) return false;
    }
    return true;
}

std::string VerifyReport::to_text() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.failures ? "FAIL " : "ok   ") << c.name << ": " << c.checked - c.failures << "/" << c.checked
           << " hold";
        if (c.failures) os << " (first violation: " << c.first_failure << ")";
        os << '\n';
    }
    return os.str();
}

VerifyReport run_identity_suite(const VerifyOptions& opt) {
    IdentityCheck fast_pa_check{"fast PA equals brute-force PA", 0, 0, {}};
    IdentityCheck pn_check{"brute-force PN equals n^(k-2) J", 0, 0, {}};
    IdentityCheck ps_check{"brute-force PS equals A(k,n) - 2 n^(k-2) W*", 0, 0, {}};
    IdentityCheck k2_check{"k=2 collapse: PA = PS = 2 PN", 0, 0, {}};
    IdentityCheck n1_check{"n=1 collapse: PN = N_sum = N_max, PA = A_sum, PS = S_sum", 0, 0, {}};
    IdentityCheck mono_check{"all statistics invariant under increasing transforms", 0, 0, {}};

    const ImperfectModel::Tag tags[] = {ImperfectModel::Tag::perfect, ImperfectModel::Tag::random_fraction,
                                        ImperfectModel::Tag::inverse_fraction,
                                        ImperfectModel::Tag::neighbor_fraction, ImperfectModel::Tag::concomitant};
    for (std::size_t r = 0; r < opt.instances; ++r) {
        PhiloxStream rng(opt.seed, r, kVerifyDomain);
        const std::size_t k = 2 + static_cast<std::size_t>(rng.next_u64() % (opt.max_k - 1));
        const std::size_t n = 1 + static_cast<std::size_t>(rng.next_u64() % opt.max_n);
        ImperfectModel model{tags[rng.next_u64() % 5], rng.uniform()};
        GeneratorConfig cfg{k, n, model, r % 2 ? Population::standard_normal : Population::uniform};
        const RssSample s = generate(cfg, rng).sample;
        const RankInfo ranks = compute_ranks(s);

        const StatValue brute_pa = brute_force_perm_stat(s, StatisticKind::PA);
        const StatValue brute_pn = brute_force_perm_stat(s, StatisticKind::PN);
        const StatValue brute_ps = brute_force_perm_stat(s, StatisticKind::PS);
        const StatValue fast = fast_pa(s) + (opt.inject_fault ? 1 : 0);
        const StatValue nk2 = checked_pow(static_cast<StatValue>(n), k - 2);

        record(fast_pa_check, fast == brute_pa, s, fast, brute_pa);
        record(pn_check, brute_pn == nk2 * j_statistic(s), s, brute_pn, nk2 * j_statistic(s));
        const StatValue affine = ps_offset(k, n) - 2 * nk2 * w_star(ranks);
        record(ps_check, brute_ps == affine, s, brute_ps, affine);
        if (k == 2) record(k2_check, fast == brute_ps && fast == 2 * brute_pn, s, fast, brute_ps);
        if (n == 1) {
            const bool holds = brute_pn == aggregate(ranks, StatisticKind::N_sum) &&
                               brute_pn == aggregate(ranks, StatisticKind::N_max) &&
                               fast == aggregate(ranks, StatisticKind::A_sum) &&
                               brute_ps == aggregate(ranks, StatisticKind::S_sum);
            record(n1_check, holds, s, fast, aggregate(ranks, StatisticKind::A_sum));
        }
        const RssSample t = monotone_transform(s, [](double x) { return std::atan(x) + x * x * x; });
        const RankInfo t_ranks = compute_ranks(t);
        for (auto kind : kAllKinds) {
            const StatValue a = evaluate(kind, s, ranks);
            const StatValue b = evaluate(kind, t, t_ranks);
            record(mono_check, a == b, s, a, b);
        }
    }
    return VerifyReport{{fast_pa_check, pn_check, ps_check, k2_check, n1_check, mono_check}};
}

}  // namespace rss
