#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hopfren/hopf.hpp"
#include "hopfren/laurent.hpp"

namespace hopfren {

// Multiplicative map from the graph Hopf algebra into truncated Laurent series:
// stores one series per generator label and extends to monomials by products.
// The unit of the algebra is always sent to the constant series 1.
class Character {
  public:
    explicit Character(int order = LaurentSeries::kDefaultOrder) : order_(order) {}

    int order() const { return order_; }
    void set(const std::string& label, LaurentSeries value);
    bool has(const std::string& label) const { return values_.count(label) > 0; }
    const LaurentSeries& rule(const std::string& label) const;  // unknown label throws
    const std::map<std::string, LaurentSeries>& rules() const { return values_; }
    std::vector<std::string> labels() const;

  private:
    int order_;
    std::map<std::string, LaurentSeries> values_;
};

// multiplicative/linear extension: sum over terms of coeff * product of rules
LaurentSeries evaluate(const Character& c, const HopfPolynomial& p);

// convolution through the coproduct: (a * b)(x) = (a (x) b)(delta x), materialized
// on the labels the two characters share
Character convolve(const Character& a, const Character& b, GraphCatalog& catalog);

// inverse for convolution: composition with the antipode
Character star_inverse(const Character& a, GraphCatalog& catalog);

struct BirkhoffFactors {
    Character minus;  // counterterm part: purely polar on every generator
    Character plus;   // renormalized part: pole-free on every generator
};

// Bogoliubov recursion with minimal subtraction; requires the character's label
// set to be closed under subgraph factors and contractions.
BirkhoffFactors birkhoff(const Character& gamma, GraphCatalog& catalog);

// value of the renormalized part at z = 0
Complex renormalized_value(const Character& gamma, const std::string& label,
                           GraphCatalog& catalog);

// true when every generator's pole order is bounded by its loop number
bool pole_orders_within_loop_bound(const Character& c, const GraphCatalog& catalog);

}  // namespace hopfren
