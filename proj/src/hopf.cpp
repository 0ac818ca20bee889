#include "hopfren/hopf.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "hopfren/errors.hpp"

namespace hopfren {

Monomial monomial_product(const Monomial& a, const Monomial& b) {
    Monomial out = a;
    for (const auto& [label, exp] : b) out[label] += exp;
    return out;
}

HopfPolynomial HopfPolynomial::from_monomial(Monomial m, Rational c) {
    HopfPolynomial p;
    p.add_term(m, c);
    return p;
}

Rational HopfPolynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void HopfPolynomial::add_term(const Monomial& m, const Rational& c) {
    if (c == Rational(0)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Rational(0)) terms_.erase(it);
    }
}

HopfPolynomial HopfPolynomial::operator-() const {
    HopfPolynomial out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

HopfPolynomial HopfPolynomial::operator+(const HopfPolynomial& rhs) const {
    HopfPolynomial out = *this;
    for (const auto& [m, c] : rhs.terms_) out.add_term(m, c);
    return out;
}

HopfPolynomial HopfPolynomial::operator-(const HopfPolynomial& rhs) const {
    HopfPolynomial out = *this;
    for (const auto& [m, c] : rhs.terms_) out.add_term(m, -c);
    return out;
}

HopfPolynomial HopfPolynomial::operator*(const HopfPolynomial& rhs) const {
    HopfPolynomial out;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : rhs.terms_) out.add_term(monomial_product(ma, mb), ca * cb);
    return out;
}

HopfPolynomial HopfPolynomial::operator*(const Rational& c) const {
    HopfPolynomial out;
    if (c == Rational(0)) return out;
    for (const auto& [m, coeff] : terms_) out.terms_.emplace(m, coeff * c);
    return out;
}

namespace {

std::string rational_to_display(const Rational& r) {
    std::ostringstream os;
    os << r.numerator();
    if (r.denominator() != 1) os << "/" << r.denominator();
    return os.str();
}

std::string monomial_to_display(const Monomial& m,
                                const std::map<std::string, std::string>* names) {
    if (m.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [label, exp] : m) {
        if (!first) os << "*";
        first = false;
        std::string shown = label;
        if (names != nullptr) {
            auto it = names->find(label);
            if (it != names->end()) shown = it->second;
        }
        os << "x[" << shown << "]";
        if (exp != 1) os << "^" << exp;
    }
    return os.str();
}

}  // namespace

std::string HopfPolynomial::to_string(const std::map<std::string, std::string>* names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational mag = c < Rational(0) ? -c : c;
        if (first) {
            if (c < Rational(0)) os << "-";
        } else {
            os << (c < Rational(0) ? " - " : " + ");
        }
        first = false;
        std::string body = monomial_to_display(m, names);
        if (mag == Rational(1) && !m.empty()) {
            os << body;
        } else if (m.empty()) {
            os << rational_to_display(mag);
        } else {
            os << rational_to_display(mag) << "*" << body;
        }
    }
    return os.str();
}

TensorPolynomial TensorPolynomial::simple(const HopfPolynomial& a, const HopfPolynomial& b) {
    TensorPolynomial out;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) out.add_term(ma, mb, ca * cb);
    return out;
}

Rational TensorPolynomial::coefficient(const Monomial& a, const Monomial& b) const {
    auto it = terms_.find({a, b});
    return it == terms_.end() ? Rational(0) : it->second;
}

void TensorPolynomial::add_term(const Monomial& a, const Monomial& b, const Rational& c) {
    if (c == Rational(0)) return;
    Key key{a, b};
    auto [it, inserted] = terms_.emplace(std::move(key), c);
    if (!inserted) {
        it->second += c;
        if (it->second == Rational(0)) terms_.erase(it);
    }
}

TensorPolynomial TensorPolynomial::operator+(const TensorPolynomial& rhs) const {
    TensorPolynomial out = *this;
    for (const auto& [k, c] : rhs.terms_) out.add_term(k.first, k.second, c);
    return out;
}

TensorPolynomial TensorPolynomial::operator-(const TensorPolynomial& rhs) const {
    TensorPolynomial out = *this;
    for (const auto& [k, c] : rhs.terms_) out.add_term(k.first, k.second, -c);
    return out;
}

TensorPolynomial TensorPolynomial::operator*(const TensorPolynomial& rhs) const {
    TensorPolynomial out;
    for (const auto& [ka, ca] : terms_)
        for (const auto& [kb, cb] : rhs.terms_)
            out.add_term(monomial_product(ka.first, kb.first),
                         monomial_product(ka.second, kb.second), ca * cb);
    return out;
}

HopfPolynomial TensorPolynomial::multiply_out() const {
    HopfPolynomial out;
    for (const auto& [k, c] : terms_) out.add_term(monomial_product(k.first, k.second), c);
    return out;
}

std::string GraphCatalog::add(const FeynmanGraph& g) {
    std::string label = generator_label(g);
    graphs_.emplace(label, g);
    return label;
}

std::string GraphCatalog::add(const FeynmanGraph& g, const std::string& alias) {
    std::string label = add(g);
    aliases_[label] = alias;
    return label;
}

const FeynmanGraph& GraphCatalog::graph(const std::string& label) const {
    auto it = graphs_.find(label);
    if (it == graphs_.end()) throw unknown_generator_error(label);
    return it->second;
}

int GraphCatalog::loops(const std::string& label) const { return loop_number(graph(label)); }

int GraphCatalog::external_legs(const std::string& label) const {
    return graph(label).external_count();
}

std::string GraphCatalog::display_name(const std::string& label) const {
    auto it = aliases_.find(label);
    return it == aliases_.end() ? label : it->second;
}

std::vector<std::string> GraphCatalog::labels() const {
    std::vector<std::string> out;
    out.reserve(graphs_.size());
    for (const auto& [label, g] : graphs_) out.push_back(label);
    return out;
}

const std::vector<GraphCatalog::CoproductTerm>& GraphCatalog::coproduct_terms(
    const std::string& label) {
    auto memo = coproduct_memo_.find(label);
    if (memo != coproduct_memo_.end()) return memo->second;

    const FeynmanGraph& g = graph(label);
    std::map<std::pair<Monomial, std::string>, long long> counts;
    for (const SubgraphEmbedding& emb : enumerate_admissible_subgraphs(g)) {
        Monomial left;
        for (const SubgraphComponent& comp : emb.components) {
            std::string part = add(component_graph(g, comp));
            left[part] += 1;
        }
        std::string right = add(contract(g, emb));
        counts[{std::move(left), std::move(right)}] += 1;
    }

    std::vector<CoproductTerm> terms;
    terms.reserve(counts.size());
    for (const auto& [key, count] : counts) terms.push_back({key.first, key.second, count});
    return coproduct_memo_.emplace(label, std::move(terms)).first->second;
}

const HopfPolynomial& GraphCatalog::antipode_of(const std::string& label) {
    auto memo = antipode_memo_.find(label);
    if (memo != antipode_memo_.end()) return memo->second;

    // Recursive form: the antipode of a generator is minus the generator minus the
    // antipode of each proper left factor times the contracted generator.  Left
    // factors always carry strictly fewer loops, so the recursion grounds out on
    // primitive generators.
    HopfPolynomial result = -HopfPolynomial::generator(label);
    for (const CoproductTerm& term : coproduct_terms(label)) {
        HopfPolynomial left_antipode = HopfPolynomial::unit();
        for (const auto& [gen, exp] : term.left)
            for (int i = 0; i < exp; ++i) left_antipode = left_antipode * antipode_of(gen);
        HopfPolynomial contribution =
            left_antipode * HopfPolynomial::generator(term.right) * Rational(term.count);
        result = result - contribution;
    }
    return antipode_memo_.emplace(label, std::move(result)).first->second;
}

namespace {

TensorPolynomial generator_coproduct(const std::string& label, GraphCatalog& catalog) {
    TensorPolynomial out;
    Monomial gen{{label, 1}};
    out.add_term({}, gen, Rational(1));
    out.add_term(gen, {}, Rational(1));
    for (const GraphCatalog::CoproductTerm& term : catalog.coproduct_terms(label))
        out.add_term(term.left, {{term.right, 1}}, Rational(term.count));
    return out;
}

}  // namespace

TensorPolynomial coproduct(const HopfPolynomial& p, GraphCatalog& catalog) {
    TensorPolynomial out;
    for (const auto& [m, c] : p.terms()) {
        TensorPolynomial factor;
        factor.add_term({}, {}, c);
        for (const auto& [label, exp] : m) {
            TensorPolynomial gen = generator_coproduct(label, catalog);
            for (int i = 0; i < exp; ++i) factor = factor * gen;
        }
        out = out + factor;
    }
    return out;
}

Rational counit(const HopfPolynomial& p) { return p.coefficient({}); }

HopfPolynomial antipode(const HopfPolynomial& p, GraphCatalog& catalog) {
    HopfPolynomial out;
    for (const auto& [m, c] : p.terms()) {
        HopfPolynomial factor = HopfPolynomial::unit() * c;
        for (const auto& [label, exp] : m)
            for (int i = 0; i < exp; ++i) factor = factor * catalog.antipode_of(label);
        out = out + factor;
    }
    return out;
}

int monomial_loop_grade(const Monomial& m, const GraphCatalog& catalog) {
    int grade = 0;
    for (const auto& [label, exp] : m) grade += exp * catalog.loops(label);
    return grade;
}

std::map<int, HopfPolynomial> loop_grade(const HopfPolynomial& p, const GraphCatalog& catalog) {
    std::map<int, HopfPolynomial> out;
    for (const auto& [m, c] : p.terms()) out[monomial_loop_grade(m, catalog)].add_term(m, c);
    return out;
}

HopfPolynomial insertion_product(const std::string& a, const std::string& b,
                                 const std::vector<std::string>& universe,
                                 GraphCatalog& catalog) {
    std::set<std::string> allowed(universe.begin(), universe.end());
    if (allowed.count(a) == 0) throw incomplete_universe_error(a);
    if (allowed.count(b) == 0) throw incomplete_universe_error(b);

    // The universe must be closed under taking subgraph factors and contractions,
    // otherwise pairing against it silently drops structure.
    for (const std::string& host : universe) {
        for (const GraphCatalog::CoproductTerm& term : catalog.coproduct_terms(host)) {
            for (const auto& [gen, exp] : term.left)
                if (allowed.count(gen) == 0) throw incomplete_universe_error(gen);
            if (allowed.count(term.right) == 0) throw incomplete_universe_error(term.right);
        }
    }

    Monomial left_target{{a, 1}};
    HopfPolynomial out;
    for (const std::string& host : universe) {
        long long multiplicity = 0;
        for (const GraphCatalog::CoproductTerm& term : catalog.coproduct_terms(host))
            if (term.left == left_target && term.right == b) multiplicity += term.count;
        if (multiplicity != 0)
            out.add_term({{host, 1}}, Rational(multiplicity));
    }
    return out;
}

HopfPolynomial lie_bracket(const std::string& a, const std::string& b,
                           const std::vector<std::string>& universe, GraphCatalog& catalog) {
    return insertion_product(a, b, universe, catalog) - insertion_product(b, a, universe, catalog);
}

}  // namespace hopfren
