#include "hopfren/character.hpp"

#include <algorithm>
#include <tuple>

#include "hopfren/errors.hpp"

namespace hopfren {

void Character::set(const std::string& label, LaurentSeries value) {
    values_.insert_or_assign(label, std::move(value));
}

const LaurentSeries& Character::rule(const std::string& label) const {
    auto it = values_.find(label);
    if (it == values_.end()) throw unknown_generator_error(label);
    return it->second;
}

std::vector<std::string> Character::labels() const {
    std::vector<std::string> out;
    out.reserve(values_.size());
    for (const auto& [label, series] : values_) out.push_back(label);
    return out;
}

LaurentSeries evaluate(const Character& c, const HopfPolynomial& p) {
    LaurentSeries total = LaurentSeries::zero(c.order());
    for (const auto& [m, coeff] : p.terms()) {
        LaurentSeries term = LaurentSeries::constant(Complex(to_double(coeff), 0.0), c.order());
        for (const auto& [label, exp] : m)
            for (int i = 0; i < exp; ++i) term = term * c.rule(label);
        total = total + term;
    }
    return total;
}

namespace {

void require_same_order(const Character& a, const Character& b) {
    if (a.order() != b.order())
        throw invariant_violation("character truncation orders differ: " +
                                  std::to_string(a.order()) + " vs " +
                                  std::to_string(b.order()));
}

// value of a character on a monomial of generators
LaurentSeries monomial_value(const Character& c, const Monomial& m) {
    LaurentSeries out = LaurentSeries::constant(1.0, c.order());
    for (const auto& [label, exp] : m)
        for (int i = 0; i < exp; ++i) out = out * c.rule(label);
    return out;
}

// labels of a character sorted by (loop number, label) so that every proper
// subgraph factor and contraction of a label precedes it
std::vector<std::string> labels_by_loops(const Character& c, const GraphCatalog& catalog) {
    std::vector<std::string> order = c.labels();
    std::stable_sort(order.begin(), order.end(),
                     [&](const std::string& x, const std::string& y) {
                         return std::make_tuple(catalog.loops(x), x) <
                                std::make_tuple(catalog.loops(y), y);
                     });
    return order;
}

}  // namespace

Character convolve(const Character& a, const Character& b, GraphCatalog& catalog) {
    require_same_order(a, b);
    Character out(a.order());
    for (const std::string& label : a.labels()) {
        if (!b.has(label)) continue;
        LaurentSeries value = a.rule(label) + b.rule(label);
        for (const GraphCatalog::CoproductTerm& term : catalog.coproduct_terms(label)) {
            LaurentSeries piece = monomial_value(a, term.left) * b.rule(term.right);
            value = value + piece * Complex(static_cast<double>(term.count), 0.0);
        }
        out.set(label, value);
    }
    return out;
}

Character star_inverse(const Character& a, GraphCatalog& catalog) {
    Character out(a.order());
    for (const std::string& label : a.labels())
        out.set(label, evaluate(a, catalog.antipode_of(label)));
    return out;
}

BirkhoffFactors birkhoff(const Character& gamma, GraphCatalog& catalog) {
    BirkhoffFactors parts{Character(gamma.order()), Character(gamma.order())};

    for (const std::string& label : labels_by_loops(gamma, catalog)) {
        LaurentSeries bracket = gamma.rule(label);
        for (const GraphCatalog::CoproductTerm& term : catalog.coproduct_terms(label)) {
            for (const auto& [gen, exp] : term.left) {
                (void)exp;
                if (!parts.minus.has(gen)) throw incomplete_universe_error(gen);
            }
            if (!gamma.has(term.right)) throw incomplete_universe_error(term.right);
            LaurentSeries piece = monomial_value(parts.minus, term.left) * gamma.rule(term.right);
            bracket = bracket + piece * Complex(static_cast<double>(term.count), 0.0);
        }
        parts.minus.set(label, -bracket.polar_part());
        parts.plus.set(label, bracket.regular_part());
    }
    return parts;
}

Complex renormalized_value(const Character& gamma, const std::string& label,
                           GraphCatalog& catalog) {
    BirkhoffFactors parts = birkhoff(gamma, catalog);
    return parts.plus.rule(label).eval_at_zero();
}

bool pole_orders_within_loop_bound(const Character& c, const GraphCatalog& catalog) {
    for (const auto& [label, series] : c.rules())
        if (series.pole_order() > catalog.loops(label)) return false;
    return true;
}

}  // namespace hopfren
