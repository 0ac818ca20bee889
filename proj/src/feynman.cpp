#include "hopfren/feynman.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "hopfren/errors.hpp"

namespace hopfren {

ExternalData ExternalData::constants(int count) {
    ExternalData out;
    out.legs.assign(static_cast<std::size_t>(count), Leg{});
    return out;
}

ExternalData ExternalData::from_modes(const std::vector<std::size_t>& indices) {
    ExternalData out;
    for (std::size_t i : indices) out.legs.push_back({false, i});
    return out;
}

bool ExternalData::all_constant() const {
    return std::all_of(legs.begin(), legs.end(), [](const Leg& l) { return l.is_constant; });
}

namespace {

// Momentum routing on the internal skeleton: every internal edge's lattice
// vector is an integer combination of the independent loop momenta plus a fixed
// offset fed in by the external modes.
struct Routing {
    std::vector<int> edge_ids;                    // internal edge indices in the graph
    std::vector<std::pair<int, int>> edge_rows;   // internal endpoint rows (a, b)
    int loop_count = 0;
    std::vector<std::vector<int>> coef;           // [edge][loop] coefficient
    std::vector<std::vector<long long>> offset;   // [edge][axis] external inflow part
    bool selection_ok = true;                     // total external momentum vanishes
    double norm_exponent = 0.0;                   // volume power from the vertex integrals
    int internal_vertices = 0;
};

void check_external_data(const FeynmanGraph& g, const ExternalData& ext) {
    if (static_cast<int>(ext.legs.size()) != g.external_count())
        throw std::domain_error("external data length does not match the graph's leg count");
}

Routing build_routing(const FeynmanGraph& g, const SpectralBackend& b, const ExternalData& ext) {
    const int n = b.dimension();

    std::map<int, int> row;  // internal vertex id -> dense row
    for (const Vertex& v : g.vertices())
        if (v.kind == VertexKind::internal) {
            const int r = static_cast<int>(row.size());
            row.emplace(v.id, r);
        }

    Routing rt;
    rt.internal_vertices = static_cast<int>(row.size());
    rt.edge_ids = g.internal_edge_indices();
    for (int e : rt.edge_ids)
        rt.edge_rows.push_back({row.at(g.edges()[e].a), row.at(g.edges()[e].b)});
    const int ne = static_cast<int>(rt.edge_ids.size());

    // external inflow per internal vertex row, and the mode-function count r_v
    std::vector<std::vector<long long>> inflow(rt.internal_vertices,
                                               std::vector<long long>(n, 0));
    std::vector<int> mode_halves(rt.internal_vertices, 0);
    for (int e = 0; e < ne; ++e) {
        mode_halves[rt.edge_rows[e].first] += 1;
        mode_halves[rt.edge_rows[e].second] += 1;
    }
    for (const Vertex& v : g.vertices()) {
        if (v.kind != VertexKind::external) continue;
        int support = -1;
        for (const Edge& edge : g.edges()) {
            if (edge.a == v.id) support = edge.b;
            else if (edge.b == v.id) support = edge.a;
        }
        const ExternalData::Leg& leg = ext.legs.at(static_cast<std::size_t>(v.ext_index - 1));
        const int r = row.at(support);
        if (!leg.is_constant) {
            const Mode& md = b.mode(leg.mode_index);
            for (int a = 0; a < n; ++a) inflow[r][a] += md.k[a];
            mode_halves[r] += 1;
        }
    }
    for (int v = 0; v < rt.internal_vertices; ++v)
        rt.norm_exponent += 1.0 - 0.5 * mode_halves[v];

    std::vector<long long> total(n, 0);
    for (const auto& f : inflow)
        for (int a = 0; a < n; ++a) total[a] += f[a];
    rt.selection_ok = std::all_of(total.begin(), total.end(), [](long long t) { return t == 0; });

    // spanning tree of the internal skeleton (connected because externals are leaves)
    std::vector<int> parent_edge(rt.internal_vertices, -1);
    std::vector<int> bfs_order;
    std::vector<bool> seen(rt.internal_vertices, false);
    if (rt.internal_vertices > 0) {
        seen[0] = true;
        bfs_order.push_back(0);
        for (std::size_t head = 0; head < bfs_order.size(); ++head) {
            const int v = bfs_order[head];
            for (int e = 0; e < ne; ++e) {
                const auto [a, bb] = rt.edge_rows[e];
                int other = -1;
                if (a == v && !seen[bb]) other = bb;
                else if (bb == v && !seen[a]) other = a;
                if (other >= 0) {
                    seen[other] = true;
                    parent_edge[other] = e;
                    bfs_order.push_back(other);
                }
            }
        }
    }

    std::vector<bool> in_tree(ne, false);
    for (int v : bfs_order)
        if (parent_edge[v] >= 0) in_tree[parent_edge[v]] = true;

    std::vector<int> loop_slot(ne, -1);
    for (int e = 0; e < ne; ++e)
        if (!in_tree[e]) loop_slot[e] = rt.loop_count++;

    rt.coef.assign(ne, std::vector<int>(rt.loop_count, 0));
    rt.offset.assign(ne, std::vector<long long>(n, 0));
    std::vector<bool> solved(ne, false);
    for (int e = 0; e < ne; ++e)
        if (loop_slot[e] >= 0) {
            rt.coef[e][loop_slot[e]] = 1;
            solved[e] = true;
        }

    // conservation at vertex v:  sum_e inc(v,e) k_e + inflow_v = 0, with
    // inc = +1 at the first endpoint, -1 at the second, 0 on self-loops
    auto incidence = [&](int v, int e) -> int {
        const auto [a, bb] = rt.edge_rows[e];
        if (a == bb) return 0;
        if (a == v) return 1;
        if (bb == v) return -1;
        return 0;
    };

    for (auto it = bfs_order.rbegin(); it != bfs_order.rend(); ++it) {
        const int v = *it;
        const int ep = parent_edge[v];
        if (ep < 0) continue;  // root
        std::vector<int> rc(rt.loop_count, 0);
        std::vector<long long> ro(inflow[v]);
        for (int e = 0; e < ne; ++e) {
            if (e == ep) continue;
            const int inc = incidence(v, e);
            if (inc == 0) continue;
            for (int l = 0; l < rt.loop_count; ++l) rc[l] += inc * rt.coef[e][l];
            for (int a = 0; a < n; ++a) ro[a] += inc * rt.offset[e][a];
        }
        const int incp = incidence(v, ep);
        for (int l = 0; l < rt.loop_count; ++l) rt.coef[ep][l] = -incp * rc[l];
        for (int a = 0; a < n; ++a) rt.offset[ep][a] = -incp * ro[a];
        solved[ep] = true;
    }
    return rt;
}

// A one-loop routing with zero offsets and unit coefficients makes every edge
// carry the same momentum magnitude, so mode sums reduce to a radial histogram
// when all periods coincide.
bool radial_applicable(const Routing& rt, const SpectralBackend& b) {
    if (rt.loop_count != 1 || rt.edge_ids.empty()) return false;
    for (std::size_t e = 0; e < rt.edge_ids.size(); ++e) {
        if (std::abs(rt.coef[e][0]) != 1) return false;
        for (long long o : rt.offset[e])
            if (o != 0) return false;
    }
    const auto& p = b.periods();
    return std::all_of(p.begin(), p.end(), [&](double x) { return x == p.front(); });
}

// counts of |k|^2 values over the box |k_i| <= cutoff, by per-axis convolution
std::vector<double> radial_counts(int dim, int cutoff) {
    std::vector<double> axis(static_cast<std::size_t>(cutoff) * cutoff + 1, 0.0);
    for (int j = -cutoff; j <= cutoff; ++j) axis[static_cast<std::size_t>(j) * j] += 1.0;
    std::vector<double> counts = axis;
    for (int d = 1; d < dim; ++d) {
        std::vector<double> next(counts.size() + axis.size() - 1, 0.0);
        for (std::size_t q1 = 0; q1 < counts.size(); ++q1) {
            if (counts[q1] == 0.0) continue;
            for (std::size_t q2 = 0; q2 < axis.size(); ++q2)
                if (axis[q2] != 0.0) next[q1 + q2] += counts[q1] * axis[q2];
        }
        counts = std::move(next);
    }
    return counts;
}

// Visits every retained momentum assignment and hands the accumulated
// log-eigenvalue sum (with multiplicity weight) to the sink.
template <typename Sink>
void sum_assignments(const Routing& rt, const SpectralBackend& b, int cutoff, Sink&& sink) {
    const int n = b.dimension();
    const int ne = static_cast<int>(rt.edge_ids.size());
    const double m2 = b.mass() * b.mass();

    if (ne == 0) {
        sink(0.0, 1.0);
        return;
    }

    if (radial_applicable(rt, b)) {
        const double unit = 2.0 * M_PI / b.periods().front();
        const std::vector<double> counts = radial_counts(n, cutoff);
        for (std::size_t q = 0; q < counts.size(); ++q) {
            if (counts[q] == 0.0) continue;
            if (q == 0 && b.zero_mode_dropped()) continue;
            const double lambda = m2 + unit * unit * static_cast<double>(q);
            sink(ne * std::log(lambda), counts[q]);
        }
        return;
    }

    const int digits = rt.loop_count * n;
    double size = 1.0;
    for (int d = 0; d < digits; ++d) size *= 2.0 * cutoff + 1.0;
    if (size > 3.0e8)
        throw resource_limit_error("momentum lattice too large; lower the cutoff or loop order");

    std::vector<int> K(static_cast<std::size_t>(std::max(digits, 1)), -cutoff);
    while (true) {
        double log_sum = 0.0;
        bool keep = true;
        for (int e = 0; e < ne && keep; ++e) {
            bool all_zero = true;
            double lambda = m2;
            for (int a = 0; a < n; ++a) {
                long long k = rt.offset[e][a];
                for (int l = 0; l < rt.loop_count; ++l)
                    k += static_cast<long long>(rt.coef[e][l]) * K[l * n + a];
                if (std::llabs(k) > cutoff) {
                    keep = false;
                    break;
                }
                if (k != 0) all_zero = false;
                const double freq = 2.0 * M_PI * static_cast<double>(k) / b.periods()[a];
                lambda += freq * freq;
            }
            if (!keep) break;
            if (all_zero && b.zero_mode_dropped()) {
                keep = false;
                break;
            }
            log_sum += std::log(lambda);
        }
        if (keep && digits > 0) sink(log_sum, 1.0);
        if (digits == 0) {
            if (keep) sink(log_sum, 1.0);
            break;
        }
        int pos = digits - 1;
        while (pos >= 0 && K[pos] == cutoff) K[pos--] = -cutoff;
        if (pos < 0) break;
        ++K[pos];
    }
}

Complex weighted_power_sum(const Routing& rt, const SpectralBackend& b, int cutoff, Complex z) {
    const Complex exponent = -(Complex(1.0, 0.0) + z);
    Complex total = 0.0;
    sum_assignments(rt, b, cutoff, [&](double log_sum, double mult) {
        total += mult * std::exp(exponent * log_sum);
    });
    return total;
}

// moments c_j = sum over assignments of exp(-S) (-S)^j / j!, the z^j Taylor
// weights of exp(-(1+z) S)
std::vector<double> weighted_log_moments(const Routing& rt, const SpectralBackend& b, int cutoff,
                                         int order) {
    std::vector<double> moments(static_cast<std::size_t>(order) + 1, 0.0);
    sum_assignments(rt, b, cutoff, [&](double log_sum, double mult) {
        double term = mult * std::exp(-log_sum);
        moments[0] += term;
        for (int j = 1; j <= order; ++j) {
            term *= -log_sum / j;
            moments[static_cast<std::size_t>(j)] += term;
        }
    });
    return moments;
}

double overall_weight(const Routing& rt, const FeynmanGraph& g, const SpectralBackend& b,
                      const EvalOptions& opts) {
    double w = std::pow(b.volume(), rt.norm_exponent) *
               std::pow(opts.coupling, rt.internal_vertices);
    if (opts.apply_symmetry_factor) w *= to_double(symmetry_factor(g));
    return w;
}

// --- circle path: explicit mode assignment with cached vertex integrals ---

// canonical key for a vertex integral over three incident functions; -1 marks
// the constant function 1
using TripleKey = std::array<long long, 3>;

double circle_vertex_integral(const SpectralBackend& b, TripleKey key,
                              std::map<TripleKey, double>& cache) {
    std::sort(key.begin(), key.end());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    int band = 0;
    for (long long id : key)
        if (id >= 0) band += std::abs(b.mode(static_cast<std::size_t>(id)).k[0]);
    const int points = 4 * band + 8;
    const double length = b.periods()[0];
    double total = 0.0;
    for (int q = 0; q < points; ++q) {
        const std::vector<double> x{length * q / points};
        double prod = 1.0;
        for (long long id : key)
            if (id >= 0) prod *= b.basis(static_cast<std::size_t>(id), x).real();
        total += prod;
    }
    total *= length / points;
    cache.emplace(key, total);
    return total;
}

Complex pair_circle(const FeynmanGraph& g, const SpectralBackend& b, const ExternalData& ext,
                    Complex z, const EvalOptions& opts) {
    const std::vector<int>& edges = g.internal_edge_indices();
    const int ne = static_cast<int>(edges.size());
    const std::size_t mode_total = b.mode_count();
    double size = 1.0;
    for (int e = 0; e < ne; ++e) size *= static_cast<double>(mode_total);
    if (size > 2.0e6)
        throw resource_limit_error("circle mode enumeration too large; lower the cutoff");

    // incident function slots per internal vertex: external legs are fixed,
    // internal edge slots are filled per assignment (self-loops twice)
    std::map<int, std::vector<long long>> fixed;   // vertex id -> fixed ids
    std::map<int, std::vector<int>> edge_slots;    // vertex id -> incident edge positions
    for (const Vertex& v : g.vertices())
        if (v.kind == VertexKind::internal) {
            fixed[v.id] = {};
            edge_slots[v.id] = {};
        }
    for (const Vertex& v : g.vertices()) {
        if (v.kind != VertexKind::external) continue;
        for (const Edge& edge : g.edges()) {
            int support = -1;
            if (edge.a == v.id) support = edge.b;
            else if (edge.b == v.id) support = edge.a;
            if (support < 0) continue;
            const ExternalData::Leg& leg = ext.legs.at(static_cast<std::size_t>(v.ext_index - 1));
            fixed[support].push_back(leg.is_constant ? -1
                                                     : static_cast<long long>(leg.mode_index));
        }
    }
    for (int e = 0; e < ne; ++e) {
        const Edge& edge = g.edges()[edges[static_cast<std::size_t>(e)]];
        edge_slots[edge.a].push_back(e);
        edge_slots[edge.b].push_back(e);
    }

    std::map<TripleKey, double> cache;
    const Complex exponent = -(Complex(1.0, 0.0) + z);
    Complex total = 0.0;
    std::vector<std::size_t> assign(static_cast<std::size_t>(std::max(ne, 1)), 0);
    while (true) {
        double vertex_product = 1.0;
        for (const auto& [vid, fixed_ids] : fixed) {
            TripleKey key{-1, -1, -1};
            std::size_t slot = 0;
            for (long long id : fixed_ids) key[slot++] = id;
            for (int e : edge_slots[vid])
                key[slot++] = static_cast<long long>(assign[static_cast<std::size_t>(e)]);
            vertex_product *= circle_vertex_integral(b, key, cache);
            if (vertex_product == 0.0) break;
        }
        if (vertex_product != 0.0) {
            double log_sum = 0.0;
            for (int e = 0; e < ne; ++e)
                log_sum += std::log(b.eigenvalue(assign[static_cast<std::size_t>(e)]));
            total += vertex_product * std::exp(exponent * log_sum);
        }
        if (ne == 0) break;
        int pos = ne - 1;
        while (pos >= 0 && assign[static_cast<std::size_t>(pos)] + 1 == mode_total)
            assign[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
        ++assign[static_cast<std::size_t>(pos)];
    }

    double w = std::pow(opts.coupling, g.internal_vertex_count());
    if (opts.apply_symmetry_factor) w *= to_double(symmetry_factor(g));
    return total * w;
}

}  // namespace

Complex pair(const FeynmanGraph& g, const SpectralBackend& b, const ExternalData& ext, Complex z,
             const EvalOptions& opts) {
    check_external_data(g, ext);
    if (b.kind() == ManifoldKind::circle) return pair_circle(g, b, ext, z, opts);

    const Routing rt = build_routing(g, b, ext);
    if (!rt.selection_ok) return 0.0;

    const double w = overall_weight(rt, g, b, opts);
    const Complex value = w * weighted_power_sum(rt, b, b.cutoff(), z);
    if (opts.verify_cutoff) {
        const Complex refined = w * weighted_power_sum(rt, b, 2 * b.cutoff(), z);
        if (std::abs(refined - value) > opts.cutoff_tolerance * (1.0 + std::abs(refined)))
            throw convergence_error("pairing unstable under cutoff doubling: |shift| = " +
                                    std::to_string(std::abs(refined - value)));
    }
    return value;
}

FeynmanEvaluation laurent_expansion(const FeynmanGraph& g, const SpectralBackend& b,
                                    const ExternalData& ext, int order,
                                    const EvalOptions& opts) {
    check_external_data(g, ext);
    if (order < 0) throw std::domain_error("expansion order must be non-negative");

    FeynmanEvaluation out;
    out.cutoff = b.cutoff();

    const int loops = loop_number(g);
    if (loops == 0) {
        const Complex v = pair(g, b, ext, Complex(0.0, 0.0), opts);
        out.series = LaurentSeries::constant(v, order);
        out.coeff_at_cutoff = {v};
        out.coeff_at_double = {v};
        return out;
    }

    if (b.kind() != ManifoldKind::torus)
        throw capability_error("pole extraction requires a torus backend");
    if (!ext.all_constant())
        throw capability_error("pole extraction supports constant external data only");

    const int ne = g.internal_edge_count();
    const int omega = b.dimension() * loops - 2 * ne;
    const Routing rt = build_routing(g, b, ext);
    const double w = overall_weight(rt, g, b, opts);

    if (omega >= 0) {
        if (loops >= 2)
            throw capability_error(
                "insufficient subtraction depth: multi-loop divergent graphs are not expandable");
        if (!radial_applicable(rt, b))
            throw capability_error(
                "pole extraction for divergent one-loop graphs requires equal torus periods");

        // every edge carries the loop momentum, so the pairing is exactly the
        // spectral trace at s = ne (1 + z); rescale its expansion to z
        LaurentSeries trace = zeta_trace_expansion(b, Complex(static_cast<double>(ne), 0.0),
                                                   order);
        std::vector<Complex> coeffs;
        const int lo = trace.lowest();
        for (int e = lo; e <= order; ++e)
            coeffs.push_back(trace.coefficient(e) * std::pow(static_cast<double>(ne), e) * w);
        out.series = LaurentSeries(lo, std::move(coeffs));
        out.exact_continuation = true;
        for (int e = lo; e <= order; ++e) {
            out.coeff_at_cutoff.push_back(out.series.coefficient(e));
            out.coeff_at_double.push_back(out.series.coefficient(e));
        }
        return out;
    }

    const std::vector<double> base = weighted_log_moments(rt, b, b.cutoff(), order);
    const std::vector<double> fine = weighted_log_moments(rt, b, 2 * b.cutoff(), order);
    double shift = 0.0;
    for (std::size_t j = 0; j < base.size(); ++j) {
        shift = std::max(shift, std::abs(fine[j] - base[j]) / (1.0 + std::abs(fine[j])));
        out.coeff_at_cutoff.push_back(w * base[j]);
        out.coeff_at_double.push_back(w * fine[j]);
    }
    out.cutoff_shift = shift;
    if (shift > opts.cutoff_tolerance)
        throw convergence_error("mode sum unstable under cutoff doubling: relative shift " +
                                std::to_string(shift));

    std::vector<Complex> coeffs(fine.size());
    for (std::size_t j = 0; j < fine.size(); ++j) coeffs[j] = w * fine[j];
    out.series = LaurentSeries(0, std::move(coeffs));
    return out;
}

Character character_from_rules(const SpectralBackend& b, const std::vector<std::string>& universe,
                               GraphCatalog& catalog, int order, const EvalOptions& opts) {
    Character gamma(order);
    for (const std::string& label : universe) {
        const FeynmanGraph& g = catalog.graph(label);
        try {
            FeynmanEvaluation eval =
                laurent_expansion(g, b, ExternalData::constants(g.external_count()), order, opts);
            gamma.set(label, eval.series);
        } catch (const capability_error& e) {
            throw capability_error("generator " + label + ": " + e.what());
        } catch (const convergence_error& e) {
            throw convergence_error("generator " + label + ": " + e.what());
        }
    }
    return gamma;
}

}  // namespace hopfren
