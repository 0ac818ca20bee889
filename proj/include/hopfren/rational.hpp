#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace hopfren {

// Exact coefficient field of the Hopf layer. Graph combinatorics at <= 3 loops
// produces small integers; 64-bit numerators are ample.
using Rational = boost::rational<long long>;

inline std::string to_string(const Rational& r) {
    std::string s = std::to_string(r.numerator());
    if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
    return s;
}

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace hopfren
