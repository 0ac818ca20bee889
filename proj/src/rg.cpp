#include "hopfren/rg.hpp"

#include <algorithm>
#include <cmath>

#include "hopfren/errors.hpp"

namespace hopfren {

Character scale(const Character& gamma, double t, const GraphCatalog& catalog) {
    Character out(gamma.order());
    for (const auto& [label, series] : gamma.rules()) {
        if (series.is_zero()) {
            out.set(label, series);
            continue;
        }
        // The exponential factor is entire with exactly known coefficients, so
        // give it a window wide enough that the product keeps the full trusted
        // window of the input series (scale(gamma, 1) is then the identity).
        const int span = series.order() - series.lowest();
        out.set(label, series * scale_factor(t, catalog.loops(label), span));
    }
    return out;
}

LocalityReport check_locality(const Character& gamma, const std::vector<double>& t_samples,
                              GraphCatalog& catalog, double tolerance) {
    LocalityReport report;
    report.tolerance = tolerance;
    const Character base_minus = birkhoff(gamma, catalog).minus;
    for (const std::string& label : gamma.labels()) report.deviation[label] = 0.0;

    for (double t : t_samples) {
        const Character scaled_minus = birkhoff(scale(gamma, t, catalog), catalog).minus;
        for (const std::string& label : gamma.labels()) {
            const double dev = max_abs_diff(scaled_minus.rule(label), base_minus.rule(label));
            report.deviation[label] = std::max(report.deviation[label], dev);
            report.worst_deviation = std::max(report.worst_deviation, dev);
        }
    }
    report.pass = report.worst_deviation <= tolerance;
    return report;
}

namespace {

// z^0 coefficient of a numerically cancelled series: tiny residual polar
// coefficients are floating-point debris from exact cancellations, anything
// larger is a real pole
Complex finite_part(const LaurentSeries& s, const std::string& label) {
    double scale_ref = 0.0;
    for (int e = s.lowest(); e <= s.order(); ++e)
        scale_ref = std::max(scale_ref, std::abs(s.coefficient(e)));
    for (int e = s.lowest(); e < 0; ++e) {
        if (std::abs(s.coefficient(e)) > 1e-8 * (1.0 + scale_ref))
            throw invariant_violation("residual pole in the scaled convolution at generator " +
                                      label);
    }
    if (s.lowest() > 0 || s.order() < 0) return 0.0;
    return s.coefficient(0);
}

// derivative at 0 of the polynomial interpolating (nodes[j], values[j])
Complex lagrange_derivative_at_zero(const std::vector<double>& nodes,
                                    const std::vector<Complex>& values) {
    const std::size_t n = nodes.size();
    Complex total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double denom = 1.0;
        for (std::size_t k = 0; k < n; ++k)
            if (k != j) denom *= nodes[j] - nodes[k];
        // derivative of prod_{k != j} (x - nodes[k]) at x = 0
        double deriv = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            if (m == j) continue;
            double prod = 1.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == j || k == m) continue;
                prod *= -nodes[k];
            }
            deriv += prod;
        }
        total += values[j] * (deriv / denom);
    }
    return total;
}

}  // namespace

std::map<std::string, Complex> beta(const Character& gamma, GraphCatalog& catalog,
                                    double locality_tolerance) {
    const std::vector<double> gate_samples{std::exp(1.0), std::exp(-1.0), std::exp(0.5)};
    const LocalityReport gate = check_locality(gamma, gate_samples, catalog, locality_tolerance);
    if (!gate.pass)
        throw locality_error("counterterms depend on the scale: worst polar drift " +
                                 std::to_string(gate.worst_deviation) + " exceeds tolerance " +
                                 std::to_string(locality_tolerance),
                             gate.worst_deviation);

    const Character inverse = star_inverse(gamma, catalog);

    int max_loops = 0;
    for (const std::string& label : gamma.labels())
        max_loops = std::max(max_loops, catalog.loops(label));

    // F_t's z^0 coefficient is a polynomial of degree <= loop grade in ln t:
    // sample at ln t = 0, 1, ..., max degree and differentiate the interpolant
    std::vector<double> nodes;
    std::vector<Character> flows;
    for (int j = 0; j <= max_loops; ++j) {
        nodes.push_back(static_cast<double>(j));
        flows.push_back(
            convolve(inverse, scale(gamma, std::exp(static_cast<double>(j)), catalog), catalog));
    }

    std::map<std::string, Complex> out;
    for (const std::string& label : gamma.labels()) {
        const int degree = catalog.loops(label);
        std::vector<double> local_nodes(nodes.begin(), nodes.begin() + degree + 1);
        std::vector<Complex> values;
        for (int j = 0; j <= degree; ++j)
            values.push_back(finite_part(flows[static_cast<std::size_t>(j)].rule(label), label));
        out[label] = lagrange_derivative_at_zero(local_nodes, values);
    }
    return out;
}

std::vector<BetaTableEntry> physics_beta_report(const std::string& tag) {
    static const std::vector<BetaTableEntry> kTable = {
        {"phi4", "g", "3g^2/(16 pi^2)",
         "literature one-loop value, scalar quartic theory in 4 space-time dimensions"},
        {"phi3", "g", "-g^3/(128 pi^3)",
         "literature one-loop value, scalar cubic theory in 6 space-time dimensions"},
        {"qed", "e", "e^3/(12 pi^2) + O(e^5)", "literature one-loop value"},
        {"yang-mills", "g", "-11 g^3 C2(G)/(48 pi^2)",
         "literature one-loop value; C2 is the quadratic Casimir of the gauge group"},
        {"qcd", "g", "-(33 - 2 Nf) g^3/(48 pi^2)",
         "literature one-loop value; Nf is the number of fermion flavours"},
    };
    if (tag == "all") return kTable;
    for (const BetaTableEntry& row : kTable)
        if (row.theory == tag) return {row};
    throw std::domain_error("unknown theory tag: " + tag);
}

}  // namespace hopfren
