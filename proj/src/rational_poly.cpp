#include "rss/rational_poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rss {

RationalPoly::RationalPoly(std::vector<mpq_class> coefficients) : coef_(std::move(coefficients)) { trim(); }

RationalPoly RationalPoly::constant(const mpq_class& c) { return RationalPoly({c}); }

void RationalPoly::trim() {
    while (!coef_.empty() && coef_.back() == 0) coef_.pop_back();
}

RationalPoly RationalPoly::operator*(const RationalPoly& other) const {
    if (coef_.empty() || other.coef_.empty()) return {};
    std::vector<mpq_class> out(coef_.size() + other.coef_.size() - 1);
    for (std::size_t i = 0; i < coef_.size(); ++i) {
        for (std::size_t j = 0; j < other.coef_.size(); ++j) out[i + j] += coef_[i] * other.coef_[j];
    }
    return RationalPoly(std::move(out));
}

RationalPoly RationalPoly::operator+(const RationalPoly& other) const {
    std::vector<mpq_class> out(std::max(coef_.size(), other.coef_.size()));
    for (std::size_t i = 0; i < coef_.size(); ++i) out[i] += coef_[i];
    for (std::size_t i = 0; i < other.coef_.size(); ++i) out[i] += other.coef_[i];
    return RationalPoly(std::move(out));
}

RationalPoly RationalPoly::times(const std::vector<std::int64_t>& g) const {
    if (coef_.empty() || g.empty()) return {};
    std::vector<mpq_class> out(coef_.size() + g.size() - 1);
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (g[j] == 0) continue;
        const mpz_class gj(static_cast<long>(g[j]));
        for (std::size_t i = 0; i < coef_.size(); ++i) out[i + j] += coef_[i] * gj;
    }
    return RationalPoly(std::move(out));
}

RationalPoly RationalPoly::integral() const {
    if (coef_.empty()) return {};
    std::vector<mpq_class> out(coef_.size() + 1);
    for (std::size_t i = 0; i < coef_.size(); ++i) {
        out[i + 1] = coef_[i] / mpq_class(static_cast<long>(i + 1));
    }
    return RationalPoly(std::move(out));
}

mpq_class RationalPoly::operator()(const mpq_class& t) const {
    mpq_class acc = 0;
    for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) acc = acc * t + *it;
    return acc;
}

mpq_class RationalPoly::at_one() const {
    mpq_class acc = 0;
    for (const auto& c : coef_) acc += c;
    return acc;
}

std::string RationalPoly::to_string() const {
    if (coef_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coef_.size(); ++i) {
        if (coef_[i] == 0) continue;
        if (!first) os << " + ";
        os << coef_[i].get_str();
        if (i > 0) os << " t^" << i;
        first = false;
    }
    return os.str();
}

bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.coef_ == b.coef_; }

std::vector<std::int64_t> monomial_times_one_minus(std::size_t a, std::size_t b) {
    std::vector<std::int64_t> out(a + b + 1, 0);
    std::int64_t binom = 1;
    for (std::size_t m = 0; m <= b; ++m) {
        out[a + m] = (m % 2 == 0) ? binom : -binom;
        binom = binom * static_cast<std::int64_t>(b - m) / static_cast<std::int64_t>(m + 1);
    }
    return out;
}

std::string to_decimal(const mpq_class& q, int places) {
    mpz_class scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    const bool negative = q < 0;
    const mpq_class mag = negative ? mpq_class(-q) : q;
    // floor(|q| * 10^places + 1/2)
    const mpq_class shifted = mag * scale + mpq_class(1, 2);
    mpz_class rounded;
    mpz_fdiv_q(rounded.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
    mpz_class whole, frac;
    mpz_fdiv_qr(whole.get_mpz_t(), frac.get_mpz_t(), rounded.get_mpz_t(), scale.get_mpz_t());
    std::string digits = frac.get_str();
    if (static_cast<int>(digits.size()) < places) digits.insert(0, places - digits.size(), '0');
    std::string out = (negative && rounded != 0 ? "-" : "") + whole.get_str();
    if (places > 0) out += "." + digits;
    return out;
}

std::string to_rational_string(const mpq_class& q) { return q.get_str(); }

mpq_class parse_rational(const std::string& text) {
    mpq_class q;
    if (text.empty() || q.set_str(text, 10) != 0) throw std::invalid_argument("malformed rational '" + text + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

}  // namespace rss
