#include "hopfren/json_io.hpp"

#include <stdexcept>

namespace hopfren {

namespace {

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    return Complex(j.value("re", 0.0), j.value("im", 0.0));
}

}  // namespace

Json graph_to_json(const FeynmanGraph& g) {
    Json vertices = Json::array();
    for (const Vertex& v : g.vertices()) {
        Json entry{{"id", v.id},
                   {"kind", v.kind == VertexKind::internal ? "internal" : "external"}};
        if (v.kind == VertexKind::external) entry["ext_index"] = v.ext_index;
        vertices.push_back(std::move(entry));
    }
    Json edges = Json::array();
    for (const Edge& e : g.edges()) edges.push_back(Json::array({e.a, e.b}));
    const CanonicalForm canon = canonical_form(g);
    return Json{{"vertices", std::move(vertices)},
                {"edges", std::move(edges)},
                {"external_legs", g.external_count()},
                {"loops", loop_number(g)},
                {"label", canon.label},
                {"generator", generator_label(g)},
                {"automorphisms", canon.automorphisms},
                {"symmetry_factor", to_string(symmetry_factor(g))},
                {"superficial_degree", superficial_degree(g)},
                {"divergent", is_divergent(g)}};
}

FeynmanGraph graph_from_json(const Json& j) {
    if (j.contains("fixture")) {
        const std::string name = j.at("fixture").get<std::string>();
        if (name == "bubble") return FeynmanGraph::bubble();
        if (name == "triangle") return FeynmanGraph::triangle();
        if (name == "nested_two_loop") return FeynmanGraph::nested_two_loop();
        if (name == "single_vertex_tree") return FeynmanGraph::single_vertex_tree();
        throw std::invalid_argument("unknown graph fixture: " + name);
    }
    std::vector<Vertex> vertices;
    for (const Json& entry : j.at("vertices")) {
        Vertex v;
        v.id = entry.at("id").get<int>();
        const std::string kind = entry.at("kind").get<std::string>();
        if (kind == "internal") {
            v.kind = VertexKind::internal;
        } else if (kind == "external") {
            v.kind = VertexKind::external;
            v.ext_index = entry.at("ext_index").get<int>();
        } else {
            throw std::invalid_argument("unknown vertex kind: " + kind);
        }
        vertices.push_back(v);
    }
    std::vector<Edge> edges;
    for (const Json& entry : j.at("edges")) {
        if (!entry.is_array() || entry.size() != 2) {
            throw std::invalid_argument("each edge must be a two-element array");
        }
        edges.push_back(Edge{entry[0].get<int>(), entry[1].get<int>()});
    }
    return FeynmanGraph(std::move(vertices), std::move(edges));
}

Json series_to_json(const LaurentSeries& s) {
    Json terms = Json::array();
    if (!s.is_zero()) {
        for (int k = s.lowest(); k <= s.order(); ++k) {
            const Complex c = s.coefficient(k);
            if (c == Complex(0.0, 0.0)) continue;
            terms.push_back(Json{{"exponent", k}, {"re", c.real()}, {"im", c.imag()}});
        }
    }
    return Json{{"min_exponent", s.is_zero() ? 0 : s.lowest()},
                {"max_exponent", s.is_zero() ? 0 : s.order()},
                {"terms", std::move(terms)}};
}

LaurentSeries series_from_json(const Json& j) {
    const int hi = j.at("max_exponent").get<int>();
    LaurentSeries s = LaurentSeries::zero(hi);
    for (const Json& term : j.at("terms")) {
        const int exponent = term.at("exponent").get<int>();
        s = s + LaurentSeries::monomial(complex_from_json(term), exponent, hi);
    }
    return s;
}

Json character_to_json(const Character& c, const std::map<std::string, std::string>* names) {
    Json entries = Json::array();
    for (const auto& [label, series] : c.rules()) {
        Json entry{{"generator", label}, {"series", series_to_json(series)}};
        if (names != nullptr) {
            const auto alias = names->find(label);
            if (alias != names->end()) entry["display_name"] = alias->second;
        }
        entries.push_back(std::move(entry));
    }
    return Json{{"truncation_order", c.order()}, {"entries", std::move(entries)}};
}

Character character_from_json(const Json& j) {
    Character c(j.at("truncation_order").get<int>());
    for (const Json& entry : j.at("entries")) {
        c.set(entry.at("generator").get<std::string>(),
              series_from_json(entry.at("series")));
    }
    return c;
}

Json polynomial_to_json(const HopfPolynomial& p,
                        const std::map<std::string, std::string>* names) {
    Json terms = Json::array();
    for (const auto& [monomial, coefficient] : p.terms()) {
        Json factors = Json::array();
        for (const auto& [label, exponent] : monomial) {
            Json factor{{"generator", label}, {"exponent", exponent}};
            if (names != nullptr) {
                const auto alias = names->find(label);
                if (alias != names->end()) factor["display_name"] = alias->second;
            }
            factors.push_back(std::move(factor));
        }
        terms.push_back(Json{{"coefficient", to_string(coefficient)},
                             {"factors", std::move(factors)}});
    }
    return Json{{"terms", std::move(terms)}, {"rendered", p.to_string(names)}};
}

SpectralBackend backend_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const double mass = j.at("mass").get<double>();
    const int cutoff = j.at("cutoff").get<int>();
    if (kind == "circle") {
        return SpectralBackend::circle(j.at("radius").get<double>(), mass, cutoff);
    }
    if (kind == "torus") {
        std::vector<double> periods;
        if (j.contains("periods")) {
            periods = j.at("periods").get<std::vector<double>>();
        } else {
            const int dim = j.at("dim").get<int>();
            const double period = j.value("period", 1.0);
            periods.assign(dim, period);
        }
        return SpectralBackend::torus(std::move(periods), mass, cutoff);
    }
    throw std::invalid_argument("unknown backend kind: " + kind);
}

Json backend_to_json(const SpectralBackend& b) {
    Json j{{"kind", b.kind() == ManifoldKind::circle ? "circle" : "torus"},
           {"dim", b.dimension()},
           {"mass", b.mass()},
           {"cutoff", b.cutoff()},
           {"volume", b.volume()},
           {"zero_mode_dropped", b.zero_mode_dropped()}};
    if (b.kind() == ManifoldKind::circle) {
        j["radius"] = b.radius();
    } else {
        j["periods"] = b.periods();
    }
    return j;
}

}  // namespace hopfren
