#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hopfren/graph.hpp"
#include "hopfren/rational.hpp"

namespace hopfren {

// Commutative monomial in generator symbols: label -> positive exponent.
// The empty map is the algebra unit.
using Monomial = std::map<std::string, int>;

Monomial monomial_product(const Monomial& a, const Monomial& b);

// Element of the polynomial Hopf algebra over the graph generators, with exact
// rational coefficients.
class HopfPolynomial {
  public:
    HopfPolynomial() = default;

    static HopfPolynomial zero() { return {}; }
    static HopfPolynomial unit() { return from_monomial({}, Rational(1)); }
    static HopfPolynomial generator(const std::string& label) {
        return from_monomial({{label, 1}}, Rational(1));
    }
    static HopfPolynomial from_monomial(Monomial m, Rational c);

    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rational coefficient(const Monomial& m) const;

    HopfPolynomial operator-() const;
    HopfPolynomial operator+(const HopfPolynomial& rhs) const;
    HopfPolynomial operator-(const HopfPolynomial& rhs) const;
    HopfPolynomial operator*(const HopfPolynomial& rhs) const;
    HopfPolynomial operator*(const Rational& c) const;
    bool operator==(const HopfPolynomial& rhs) const { return terms_ == rhs.terms_; }

    void add_term(const Monomial& m, const Rational& c);

    // deterministic rendering such as "x[B]^2 - x[G2]"; names maps label -> display alias
    std::string to_string(const std::map<std::string, std::string>* names = nullptr) const;

  private:
    std::map<Monomial, Rational> terms_;
};

// Element of the two-fold tensor product of the Hopf algebra with itself.
class TensorPolynomial {
  public:
    using Key = std::pair<Monomial, Monomial>;

    static TensorPolynomial simple(const HopfPolynomial& a, const HopfPolynomial& b);

    const std::map<Key, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rational coefficient(const Monomial& a, const Monomial& b) const;

    TensorPolynomial operator+(const TensorPolynomial& rhs) const;
    TensorPolynomial operator-(const TensorPolynomial& rhs) const;
    TensorPolynomial operator*(const TensorPolynomial& rhs) const;  // componentwise
    bool operator==(const TensorPolynomial& rhs) const { return terms_ == rhs.terms_; }

    void add_term(const Monomial& a, const Monomial& b, const Rational& c);

    // multiplication map m(a (x) b) = a*b
    HopfPolynomial multiply_out() const;

  private:
    std::map<Key, Rational> terms_;
};

// Registry of generators keyed by generator label, with memoized structure maps.
// Not safe for concurrent mutation; confine to one execution context.
class GraphCatalog {
  public:
    // canonicalizes and stores the graph; returns its generator label
    std::string add(const FeynmanGraph& g);
    std::string add(const FeynmanGraph& g, const std::string& alias);

    bool contains(const std::string& label) const { return graphs_.count(label) > 0; }
    const FeynmanGraph& graph(const std::string& label) const;
    int loops(const std::string& label) const;
    int external_legs(const std::string& label) const;
    std::string display_name(const std::string& label) const;
    const std::map<std::string, std::string>& display_names() const { return aliases_; }
    std::vector<std::string> labels() const;

    struct CoproductTerm {
        Monomial left;       // product of the subgraph component generators
        std::string right;   // label of the contracted graph
        long long count;     // number of embeddings producing this pair
    };

    // proper coproduct terms of a generator (the primitive part 1(x)x + x(x)1 is
    // implied); memoized, deterministic order
    const std::vector<CoproductTerm>& coproduct_terms(const std::string& label);

    // memoized antipode of a single generator
    const HopfPolynomial& antipode_of(const std::string& label);

  private:
    std::map<std::string, FeynmanGraph> graphs_;
    std::map<std::string, std::string> aliases_;
    std::map<std::string, std::vector<CoproductTerm>> coproduct_memo_;
    std::map<std::string, HopfPolynomial> antipode_memo_;
};

// structure maps, extended multiplicatively/linearly from generators

TensorPolynomial coproduct(const HopfPolynomial& p, GraphCatalog& catalog);

Rational counit(const HopfPolynomial& p);

HopfPolynomial antipode(const HopfPolynomial& p, GraphCatalog& catalog);

// split by total loop grade (grade of a monomial is the sum over factors)
std::map<int, HopfPolynomial> loop_grade(const HopfPolynomial& p, const GraphCatalog& catalog);

int monomial_loop_grade(const Monomial& m, const GraphCatalog& catalog);

// Insertion product of two generators relative to a finite universe of host graphs:
// sum over hosts of the multiplicity of x_a (x) x_b in the host's coproduct.
// Throws incomplete_universe_error when the universe is not closed under coproducts.
HopfPolynomial insertion_product(const std::string& a, const std::string& b,
                                 const std::vector<std::string>& universe,
                                 GraphCatalog& catalog);

HopfPolynomial lie_bracket(const std::string& a, const std::string& b,
                           const std::vector<std::string>& universe, GraphCatalog& catalog);

}  // namespace hopfren
