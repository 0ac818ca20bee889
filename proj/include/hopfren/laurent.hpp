#pragma once

#include <complex>
#include <vector>

#include "hopfren/errors.hpp"

namespace hopfren {

using Complex = std::complex<double>;

// Truncated Laurent series in one complex variable z around z = 0: finitely many
// negative powers, coefficients trusted up to and including exponent order().
// Coefficients below lowest() are exact zeros; coefficients above order() are unknown.
// Sums and products propagate the trusted window with the usual min rule.
class LaurentSeries {
  public:
    static constexpr int kDefaultOrder = 7;  // regular series keep 8 coefficients

    LaurentSeries() : lo_(kDefaultOrder + 1), hi_(kDefaultOrder) {}
    explicit LaurentSeries(int lo, std::vector<Complex> coeffs);

    static LaurentSeries zero(int order = kDefaultOrder);
    static LaurentSeries constant(Complex value, int order = kDefaultOrder);
    // c * z^exp with an 8-coefficient trusted window unless overridden
    static LaurentSeries monomial(Complex value, int exp);
    static LaurentSeries monomial(Complex value, int exp, int order);

    bool is_zero() const { return c_.empty(); }
    int order() const { return hi_; }
    // exponent of the first stored (nonzero) coefficient; for the zero series
    // there is none and order()+1 is returned
    int lowest() const { return lo_; }
    int pole_order() const;
    Complex coefficient(int exp) const;

    LaurentSeries operator-() const;
    LaurentSeries operator+(const LaurentSeries& rhs) const;
    LaurentSeries operator-(const LaurentSeries& rhs) const;
    LaurentSeries operator*(const LaurentSeries& rhs) const;
    LaurentSeries operator*(Complex scalar) const;

    // multiplicative inverse; the trusted window genuinely widens for pole series
    LaurentSeries invert() const;

    // projection onto strictly negative powers (minimal-subtraction polar part)
    LaurentSeries polar_part() const;
    // complementary projection onto exponents >= 0
    LaurentSeries regular_part() const;

    // value at z = 0; throws pole_error when a nonzero negative-power coefficient exists
    Complex eval_at_zero() const;

    LaurentSeries truncated(int new_order) const;

    bool operator==(const LaurentSeries& rhs) const;

  private:
    void normalize();

    int lo_;
    int hi_;
    std::vector<Complex> c_;  // c_[i] is the coefficient of z^(lo_ + i)
};

inline LaurentSeries operator*(Complex scalar, const LaurentSeries& s) { return s * scalar; }

// exp(z * loops * ln t): the one-parameter scaling factor of an L-loop generator.
// t must be positive.
LaurentSeries scale_factor(double t, int loops, int order = LaurentSeries::kDefaultOrder);

// largest |coefficient difference| over the common trusted window of a and b
double max_abs_diff(const LaurentSeries& a, const LaurentSeries& b);

}  // namespace hopfren
