#pragma once

// Univariate polynomials over the rationals (GMP), just enough algebra for
// integrating products of order-statistic densities over ordered simplices.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace rss {

class RationalPoly {
public:
    RationalPoly() = default;
    explicit RationalPoly(std::vector<mpq_class> coefficients);
    static RationalPoly constant(const mpq_class& c);

    // Coefficient of t^i (ascending powers).
    const std::vector<mpq_class>& coefficients() const { return coef_; }
    std::size_t degree() const { return coef_.empty() ? 0 : coef_.size() - 1; }

    RationalPoly operator*(const RationalPoly& other) const;
    RationalPoly operator+(const RationalPoly& other) const;

    // Multiply by an integer-coefficient polynomial.
    RationalPoly times(const std::vector<std::int64_t>& int_coefficients) const;

    // Antiderivative vanishing at t = 0.
    RationalPoly integral() const;

    mpq_class operator()(const mpq_class& t) const;
    mpq_class at_one() const;

    std::string to_string() const;

    friend bool operator==(const RationalPoly& a, const RationalPoly& b);

private:
    void trim();
    std::vector<mpq_class> coef_;
};

// Integer coefficients of t^a (1 - t)^b, ascending.
std::vector<std::int64_t> monomial_times_one_minus(std::size_t a, std::size_t b);

// Rational -> decimal string rounded half-up at `places` digits.
std::string to_decimal(const mpq_class& q, int places);

// Exact "p/q" (or "p" for integers).
std::string to_rational_string(const mpq_class& q);
mpq_class parse_rational(const std::string& text);

}  // namespace rss
