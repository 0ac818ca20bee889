#include "hopfren/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hopfren {

LaurentSeries::LaurentSeries(int lo, std::vector<Complex> coeffs)
    : lo_(lo), hi_(lo + static_cast<int>(coeffs.size()) - 1), c_(std::move(coeffs)) {
    normalize();
}

LaurentSeries LaurentSeries::zero(int order) {
    LaurentSeries s;
    s.lo_ = order + 1;
    s.hi_ = order;
    return s;
}

LaurentSeries LaurentSeries::constant(Complex value, int order) {
    std::vector<Complex> c(static_cast<size_t>(order) + 1, Complex(0.0));
    if (!c.empty()) c[0] = value;
    LaurentSeries s(0, std::move(c));
    return s;
}

LaurentSeries LaurentSeries::monomial(Complex value, int exp) {
    return monomial(value, exp, exp + kDefaultOrder);
}

LaurentSeries LaurentSeries::monomial(Complex value, int exp, int order) {
    if (order < exp) throw invariant_violation("monomial order below its exponent");
    std::vector<Complex> c(static_cast<size_t>(order - exp) + 1, Complex(0.0));
    c[0] = value;
    return LaurentSeries(exp, std::move(c));
}

void LaurentSeries::normalize() {
    size_t skip = 0;
    while (skip < c_.size() && c_[skip] == Complex(0.0)) ++skip;
    if (skip == c_.size()) {
        c_.clear();
        lo_ = hi_ + 1;
        return;
    }
    if (skip > 0) {
        c_.erase(c_.begin(), c_.begin() + static_cast<long>(skip));
        lo_ += static_cast<int>(skip);
    }
}

int LaurentSeries::pole_order() const {
    if (is_zero() || lo_ >= 0) return 0;
    return -lo_;
}

Complex LaurentSeries::coefficient(int exp) const {
    if (exp > hi_) throw std::out_of_range("coefficient request beyond trusted order");
    if (is_zero() || exp < lo_) return Complex(0.0);
    return c_[static_cast<size_t>(exp - lo_)];
}

LaurentSeries LaurentSeries::operator-() const {
    LaurentSeries r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& rhs) const {
    int hi = std::min(hi_, rhs.hi_);
    if (is_zero() && rhs.is_zero()) return zero(hi);
    int lo = std::min(is_zero() ? rhs.lo_ : lo_, rhs.is_zero() ? lo_ : rhs.lo_);
    if (lo > hi) return zero(hi);
    std::vector<Complex> c(static_cast<size_t>(hi - lo) + 1, Complex(0.0));
    for (int e = lo; e <= hi; ++e) {
        Complex v(0.0);
        if (!is_zero() && e >= lo_ && e <= hi_) v += c_[static_cast<size_t>(e - lo_)];
        if (!rhs.is_zero() && e >= rhs.lo_ && e <= rhs.hi_)
            v += rhs.c_[static_cast<size_t>(e - rhs.lo_)];
        c[static_cast<size_t>(e - lo)] = v;
    }
    return LaurentSeries(lo, std::move(c));
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& rhs) const { return *this + (-rhs); }

LaurentSeries LaurentSeries::operator*(const LaurentSeries& rhs) const {
    if (is_zero() || rhs.is_zero()) {
        // a = O(z^(hi+1)) times a series starting at lo is O(z^(hi+1+lo))
        if (is_zero() && !rhs.is_zero()) return zero(hi_ + rhs.lo_);
        if (!is_zero() && rhs.is_zero()) return zero(lo_ + rhs.hi_);
        return zero(std::min(hi_, rhs.hi_));
    }
    int lo = lo_ + rhs.lo_;
    int hi = std::min(lo_ + rhs.hi_, rhs.lo_ + hi_);
    std::vector<Complex> c(static_cast<size_t>(hi - lo) + 1, Complex(0.0));
    for (size_t i = 0; i < c_.size(); ++i) {
        int ea = lo_ + static_cast<int>(i);
        for (size_t j = 0; j < rhs.c_.size(); ++j) {
            int e = ea + rhs.lo_ + static_cast<int>(j);
            if (e > hi) break;
            c[static_cast<size_t>(e - lo)] += c_[i] * rhs.c_[j];
        }
    }
    return LaurentSeries(lo, std::move(c));
}

LaurentSeries LaurentSeries::operator*(Complex scalar) const {
    LaurentSeries r = *this;
    for (auto& v : r.c_) v *= scalar;
    r.normalize();
    return r;
}

LaurentSeries LaurentSeries::invert() const {
    if (is_zero()) throw std::domain_error("division by identically zero series");
    // this = z^lo * lead * (1 + u), u regular vanishing at 0 with n trusted coefficients;
    // the reciprocal is trusted through exponent hi - 2*lo
    int n = hi_ - lo_;
    Complex lead = c_[0];
    std::vector<Complex> u(static_cast<size_t>(n) + 1, Complex(0.0));
    for (size_t i = 1; i < c_.size(); ++i) u[i] = c_[i] / lead;
    // reciprocal of (1 + u) by power-series long division
    std::vector<Complex> r(static_cast<size_t>(n) + 1, Complex(0.0));
    r[0] = Complex(1.0);
    for (int k = 1; k <= n; ++k) {
        Complex acc(0.0);
        for (int j = 1; j <= k; ++j) acc += u[static_cast<size_t>(j)] * r[static_cast<size_t>(k - j)];
        r[static_cast<size_t>(k)] = -acc;
    }
    for (auto& v : r) v /= lead;
    return LaurentSeries(-lo_, std::move(r));
}

LaurentSeries LaurentSeries::polar_part() const {
    if (is_zero() || lo_ >= 0) return zero(hi_);
    int top = std::min(hi_, -1);
    std::vector<Complex> c(c_.begin(), c_.begin() + (top - lo_ + 1));
    return LaurentSeries(lo_, std::move(c)).truncated(hi_);
}

LaurentSeries LaurentSeries::regular_part() const {
    if (is_zero() || hi_ < 0) return zero(hi_);
    int lo = std::max(lo_, 0);
    std::vector<Complex> c(c_.begin() + (lo - lo_), c_.end());
    return LaurentSeries(lo, std::move(c)).truncated(hi_);
}

Complex LaurentSeries::eval_at_zero() const {
    if (pole_order() > 0)
        throw pole_error("series has a pole at z = 0 of order " + std::to_string(pole_order()),
                         pole_order());
    if (is_zero() || lo_ > 0) return Complex(0.0);
    return c_[static_cast<size_t>(-lo_)];
}

LaurentSeries LaurentSeries::truncated(int new_order) const {
    if (is_zero()) return zero(std::min(hi_, new_order));
    LaurentSeries r = *this;
    r.hi_ = new_order;
    if (new_order < lo_) {
        r.c_.clear();
        r.lo_ = new_order + 1;
    } else if (new_order < hi_) {
        r.c_.resize(static_cast<size_t>(new_order - lo_) + 1);
    } else if (new_order > hi_) {
        // widening the window is only valid for exact contents (projections of
        // polynomials); the extra coefficients are exact zeros there
        r.c_.resize(static_cast<size_t>(new_order - lo_) + 1, Complex(0.0));
    }
    r.normalize();
    return r;
}

bool LaurentSeries::operator==(const LaurentSeries& rhs) const {
    return lo_ == rhs.lo_ && hi_ == rhs.hi_ && c_ == rhs.c_;
}

LaurentSeries scale_factor(double t, int loops, int order) {
    if (!(t > 0.0)) throw std::domain_error("scale parameter must be positive");
    double w = static_cast<double>(loops) * std::log(t);
    std::vector<Complex> c(static_cast<size_t>(std::max(order, 0)) + 1, Complex(0.0));
    double term = 1.0;
    for (int j = 0; j <= order; ++j) {
        c[static_cast<size_t>(j)] = Complex(term);
        term *= w / static_cast<double>(j + 1);
    }
    return LaurentSeries(0, std::move(c));
}

double max_abs_diff(const LaurentSeries& a, const LaurentSeries& b) {
    int hi = std::min(a.order(), b.order());
    int lo = std::min(a.is_zero() ? hi : a.lowest(), b.is_zero() ? hi : b.lowest());
    double m = 0.0;
    for (int e = lo; e <= hi; ++e) m = std::max(m, std::abs(a.coefficient(e) - b.coefficient(e)));
    return m;
}

}  // namespace hopfren
