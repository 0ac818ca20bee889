#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hopfren/errors.hpp"
#include "hopfren/feynman.hpp"
#include "hopfren/graph.hpp"
#include "hopfren/hopf.hpp"
#include "hopfren/spectral.hpp"

using namespace hopfren;

namespace {

constexpr double kPi = 3.14159265358979323846;

// --- independent lattice zeta machinery (no production code involved) -------

// Legendre nodes/weights on [-1, 1] via the Jacobi-matrix eigenproblem
std::pair<std::vector<double>, std::vector<double>> legendre_rule(int n) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int j = 1; j < n; ++j) {
        const double off = j / std::sqrt(4.0 * static_cast<double>(j) * j - 1.0);
        jac(j - 1, j) = off;
        jac(j, j - 1) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    std::vector<double> nodes(n), weights(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        weights[i] = 2.0 * v * v;
    }
    return {nodes, weights};
}

// theta(t) = sum_{j in Z} exp(-pi j^2 t)
double theta_sum(double t) {
    double s = 1.0;
    for (int j = 1; j < 400; ++j) {
        const double e = std::exp(-kPi * j * j * t);
        s += 2.0 * e;
        if (e < 1e-300) break;
    }
    return s;
}

// I(sigma) = integral over [1, 40] of t^(sigma-1) (theta(t)^6 - 1) dt; the
// integrand decays like exp(-pi t), so the truncated upper limit is exact to
// machine precision
double completed_tail(double sigma) {
    static const auto rule = legendre_rule(24);
    double total = 0.0;
    for (int panel = 1; panel < 40; ++panel) {
        const double a = panel, b = panel + 1.0;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t i = 0; i < rule.first.size(); ++i) {
            const double t = mid + half * rule.first[i];
            total += half * rule.second[i] *
                     std::pow(t, sigma - 1.0) * (std::pow(theta_sum(t), 6.0) - 1.0);
        }
    }
    return total;
}

// sum over nonzero k in Z^6 of |k|^(-2s), by the completed-integral formula:
// pi^(-s) Gamma(s) E(s) = I(s) + I(3-s) + 1/(s-3) - 1/s
double lattice_zeta_six(double s) {
    const double completed =
        completed_tail(s) + completed_tail(3.0 - s) + 1.0 / (s - 3.0) - 1.0 / s;
    return std::pow(kPi, s) * completed / std::tgamma(s);
}

// counts of |k|^2 over the box |k_i| <= bound in Z^dim, per-axis convolution
std::vector<double> box_counts(int dim, int bound) {
    std::vector<double> axis(static_cast<std::size_t>(bound) * bound + 1, 0.0);
    for (int j = -bound; j <= bound; ++j) axis[static_cast<std::size_t>(j) * j] += 1.0;
    std::vector<double> counts{1.0};
    for (int d = 0; d < dim; ++d) {
        std::vector<double> next(counts.size() + axis.size() - 1, 0.0);
        for (std::size_t a = 0; a < counts.size(); ++a) {
            if (counts[a] == 0.0) continue;
            for (std::size_t c = 0; c < axis.size(); ++c)
                if (axis[c] != 0.0) next[a + c] += counts[a] * axis[c];
        }
        counts = std::move(next);
    }
    return counts;
}

double binomial(int top, int k) {
    double out = 1.0;
    for (int j = 1; j <= k; ++j) out *= static_cast<double>(top - j + 1) / j;
    return out;
}

std::size_t find_torus_mode(const SpectralBackend& b, const std::vector<int>& k) {
    for (std::size_t i = 0; i < b.mode_count(); ++i)
        if (b.mode(i).k == k) return i;
    FAIL("requested lattice mode not found");
    return 0;
}

const double kBubbleResidue = -1.0 / (128.0 * kPi * kPi * kPi);

}  // namespace

TEST_SUITE("feynman") {

// The reference value for every divergence test below is pinned here first,
// entirely from in-test machinery: the completed-integral continuation of the
// six-dimensional lattice zeta function, cross-checked against raw box sums.
TEST_CASE("lattice zeta oracle fixes the one-loop residue values") {
    // direct box sum at s = 6 (tail below 1e-8) validates the continuation
    const std::vector<double> counts = box_counts(6, 30);
    double direct = 0.0;
    for (std::size_t q = 1; q < counts.size(); ++q)
        if (counts[q] != 0.0) direct += counts[q] * std::pow(static_cast<double>(q), -6.0);
    CHECK(std::abs(lattice_zeta_six(6.0) - direct) < 5e-8);

    // the completed integral has residue exactly 1 at s = 3, so the lattice
    // zeta residue there is pi^3 / Gamma(3) = pi^3 / 2; on the unit torus the
    // eigenvalues are (2 pi)^2 |k|^2, giving residue 1/(128 pi^3)
    const double lattice_residue = std::pow(kPi, 3.0) / 2.0;
    const double unit_torus_residue = std::pow(4.0 * kPi * kPi, -3.0) * lattice_residue;
    CHECK(unit_torus_residue == doctest::Approx(1.0 / (128.0 * std::pow(kPi, 3.0)))
                                    .epsilon(1e-14));

    // production trace on the massless unit torus against both oracle outputs
    const SpectralBackend massless = SpectralBackend::torus({1, 1, 1, 1, 1, 1}, 0.0, 4);
    const Complex trace6 = zeta_trace(massless, 6.0);
    const double oracle6 = std::pow(4.0 * kPi * kPi, -6.0) * lattice_zeta_six(6.0);
    CHECK(std::abs(trace6 - Complex(oracle6)) < 1e-8 * oracle6);
    CHECK(std::abs(zeta_trace_residue(massless, 3.0) - Complex(unit_torus_residue)) <
          1e-12 * unit_torus_residue);
    const LaurentSeries window = zeta_trace_expansion(massless, 3.0, 0);
    CHECK(std::abs(window.coefficient(-1) - Complex(unit_torus_residue)) < 1e-9);

    // mass insertion: expanding (lambda + 1)^(-s) binomially moves the massless
    // oracle onto the massive trace at a regular point ...
    const SpectralBackend massive = SpectralBackend::torus({1, 1, 1, 1, 1, 1}, 1.0, 4);
    double shifted = 1.0;  // the k = 0 eigenvalue contributes 1^-4
    for (int j = 0; j <= 12; ++j) {
        shifted += binomial(-4, j) * std::pow(4.0 * kPi * kPi, -(4.0 + j)) *
                   lattice_zeta_six(4.0 + j);
    }
    CHECK(std::abs(zeta_trace(massive, 4.0) - Complex(shifted)) < 1e-9 * std::abs(shifted));

    // ... and onto the residue ladder: the j = 1 term shifts the s = 3 pole to
    // s = 2 with weight -s = -2, so the massive residue is -1/(64 pi^3) and the
    // quadratic-propagator residue in z is half of it
    const double massive_residue = -2.0 * unit_torus_residue;
    CHECK(std::abs(zeta_trace_residue(massive, 2.0) - Complex(massive_residue)) <
          1e-12 * std::abs(massive_residue));
    CHECK(0.5 * massive_residue == doctest::Approx(kBubbleResidue).epsilon(1e-14));
}

TEST_CASE("tree pairing is the volume times the coupling") {
    const FeynmanGraph tree = FeynmanGraph::single_vertex_tree();
    const SpectralBackend b = SpectralBackend::torus({2.0, 3.0}, 1.0, 3);
    EvalOptions opts;
    opts.coupling = 1.7;
    const Complex v = pair(tree, b, ExternalData::constants(3), Complex(0.4, 0.0), opts);
    CHECK(std::abs(v - Complex(1.7 * 6.0)) < 1e-12);

    const FeynmanEvaluation eval =
        laurent_expansion(tree, b, ExternalData::constants(3), 3, opts);
    CHECK(eval.series.pole_order() == 0);
    CHECK(std::abs(eval.series.coefficient(0) - Complex(1.7 * 6.0)) < 1e-12);
    CHECK(std::abs(eval.series.coefficient(1)) < 1e-15);
}

TEST_CASE("hand-computed two-point mode sum at unit cutoff") {
    // box |k|_inf <= 1 in two dimensions: multiplicities {1, 4, 4} over
    // |k|^2 = {0, 1, 2}
    const SpectralBackend b = SpectralBackend::torus({1.0, 1.0}, 1.0, 1);
    const double expected = 1.0 + 4.0 * std::pow(4.0 * kPi * kPi + 1.0, -2.0) +
                            4.0 * std::pow(8.0 * kPi * kPi + 1.0, -2.0);
    const Complex got = pair(FeynmanGraph::bubble(), b, ExternalData::constants(2), 0.0);
    CHECK(std::abs(got - Complex(expected)) < 1e-14);
}

TEST_CASE("two-point sum against the box histogram on the six-torus") {
    const SpectralBackend b = SpectralBackend::torus({1, 1, 1, 1, 1, 1}, 1.0, 6);
    const std::vector<double> counts = box_counts(6, 6);
    const double z = 0.9;
    double direct = 0.0;
    for (std::size_t q = 0; q < counts.size(); ++q) {
        if (counts[q] == 0.0) continue;
        direct += counts[q] *
                  std::pow(4.0 * kPi * kPi * static_cast<double>(q) + 1.0, -2.0 * (1.0 + z));
    }
    const Complex got = pair(FeynmanGraph::bubble(), b, ExternalData::constants(2),
                             Complex(z, 0.0));
    CHECK(std::abs(got - Complex(direct)) < 1e-12 * direct);
}

TEST_CASE("external mode selection rule and translated sums") {
    const SpectralBackend b = SpectralBackend::torus({1.0, 1.0}, 1.0, 6);
    const std::size_t plus = find_torus_mode(b, {1, 0});
    const std::size_t minus = find_torus_mode(b, {-1, 0});

    // non-conserving external data gives exactly zero
    const Complex zero = pair(FeynmanGraph::bubble(), b,
                              ExternalData::from_modes({plus, plus}), Complex(1.0, 0.0));
    CHECK(zero.real() == 0.0);
    CHECK(zero.imag() == 0.0);

    // conserving data: one edge carries q, the other q + k, both kept in box
    const double z = 1.0;
    double direct = 0.0;
    for (int k1 = -6; k1 <= 6; ++k1) {
        for (int k2 = -6; k2 <= 6; ++k2) {
            const int s1 = k1 + 1;
            if (s1 < -6 || s1 > 6) continue;
            const double la = 4.0 * kPi * kPi * (k1 * k1 + k2 * k2) + 1.0;
            const double lb = 4.0 * kPi * kPi * (s1 * s1 + k2 * k2) + 1.0;
            direct += std::pow(la * lb, -(1.0 + z));
        }
    }
    const Complex got = pair(FeynmanGraph::bubble(), b,
                             ExternalData::from_modes({plus, minus}), Complex(z, 0.0));
    CHECK(std::abs(got - Complex(direct)) < 1e-12 * direct);

    // three-point non-conservation also vanishes identically
    const Complex zero3 = pair(FeynmanGraph::triangle(), b,
                               ExternalData::from_modes({plus, plus, plus}),
                               Complex(1.0, 0.0));
    CHECK(zero3.real() == 0.0);
    CHECK(zero3.imag() == 0.0);
}

TEST_CASE("circle and one-torus mode sums agree across code paths") {
    // the circle evaluator integrates real trigonometric vertex factors, the
    // torus evaluator routes exact lattice momenta; same spectrum either way
    const SpectralBackend circle = SpectralBackend::circle(1.0, 1.0, 60);
    const SpectralBackend ring = SpectralBackend::torus({2.0 * kPi}, 1.0, 60);
    const Complex z(0.8, 0.0);
    const Complex a = pair(FeynmanGraph::bubble(), circle, ExternalData::constants(2), z);
    const Complex b = pair(FeynmanGraph::bubble(), ring, ExternalData::constants(2), z);
    CHECK(std::abs(a - b) < 1e-9 * std::abs(b));
}

TEST_CASE("divergent two-point window matches the oracle residue") {
    const SpectralBackend b = SpectralBackend::torus({1, 1, 1, 1, 1, 1}, 1.0, 6);
    const FeynmanEvaluation eval =
        laurent_expansion(FeynmanGraph::bubble(), b, ExternalData::constants(2), 3);

    CHECK(eval.exact_continuation);
    CHECK(eval.series.pole_order() == 1);
    CHECK(std::abs(eval.series.coefficient(-1) - Complex(kBubbleResidue)) < 1e-10);
    REQUIRE(eval.coeff_at_cutoff.size() == eval.coeff_at_double.size());
    for (std::size_t i = 0; i < eval.coeff_at_cutoff.size(); ++i)
        CHECK(eval.coeff_at_cutoff[i] == eval.coeff_at_double[i]);

    // symmetry weight 1/2 halves every coefficient
    EvalOptions sym;
    sym.apply_symmetry_factor = true;
    const FeynmanEvaluation weighted =
        laurent_expansion(FeynmanGraph::bubble(), b, ExternalData::constants(2), 3, sym);
    CHECK(std::abs(weighted.series.coefficient(-1) - Complex(0.5 * kBubbleResidue)) < 1e-10);
}

TEST_CASE("log-divergent three-point window and coupling powers") {
    const SpectralBackend b = SpectralBackend::torus({1, 1, 1, 1, 1, 1}, 1.0, 6);
    const FeynmanEvaluation eval =
        laurent_expansion(FeynmanGraph::triangle(), b, ExternalData::constants(3), 2);

    // residue = (trace residue at s = 3) / 3 = 1/(384 pi^3)
    const double expected = 1.0 / (384.0 * std::pow(kPi, 3.0));
    CHECK(eval.exact_continuation);
    CHECK(std::abs(eval.series.coefficient(-1) - Complex(expected)) < 1e-10);

    // three internal vertices scale as coupling^3
    EvalOptions opts;
    opts.coupling = 2.0;
    const FeynmanEvaluation scaled =
        laurent_expansion(FeynmanGraph::triangle(), b, ExternalData::constants(3), 2, opts);
    CHECK(std::abs(scaled.series.coefficient(-1) - 8.0 * eval.series.coefficient(-1)) <
          1e-12);
    CHECK(std::abs(scaled.series.coefficient(0) - 8.0 * eval.series.coefficient(0)) < 1e-12);
}

TEST_CASE("convergent two-point window on the two-torus") {
    const SpectralBackend b8 = SpectralBackend::torus({1.0, 1.0}, 1.0, 8);
    const SpectralBackend b16 = SpectralBackend::torus({1.0, 1.0}, 1.0, 16);
    const FeynmanEvaluation eval =
        laurent_expansion(FeynmanGraph::bubble(), b8, ExternalData::constants(2), 2);

    CHECK_FALSE(eval.exact_continuation);
    CHECK(eval.series.pole_order() == 0);
    CHECK(eval.cutoff_shift > 0.0);
    CHECK(eval.cutoff_shift < 1e-2);
    REQUIRE(eval.coeff_at_cutoff.size() == 3);

    // the reported window lives at the doubled cutoff
    const Complex direct = pair(FeynmanGraph::bubble(), b16, ExternalData::constants(2), 0.0);
    CHECK(std::abs(eval.series.coefficient(0) - direct) < 1e-13 * std::abs(direct));

    // first log-moment against a central difference of the raw pairing
    const double h = 1e-4;
    const Complex diff = (pair(FeynmanGraph::bubble(), b16, ExternalData::constants(2), h) -
                          pair(FeynmanGraph::bubble(), b16, ExternalData::constants(2), -h)) /
                         (2.0 * h);
    CHECK(std::abs(eval.series.coefficient(1) - diff) < 1e-6 * std::abs(diff));

    // an unreachable stability demand reports non-convergence
    EvalOptions strict;
    strict.cutoff_tolerance = 1e-12;
    CHECK_THROWS_AS((void)laurent_expansion(FeynmanGraph::bubble(), b8,
                                            ExternalData::constants(2), 2, strict),
                    convergence_error);
}

TEST_CASE("cutoff verification on the raw pairing") {
    const SpectralBackend b = SpectralBackend::torus({1, 1, 1, 1, 1, 1}, 1.0, 4);
    EvalOptions verify;
    verify.verify_cutoff = true;

    // exponent 2(1+z) < 3 diverges with the cutoff and must be flagged
    CHECK_THROWS_AS((void)pair(FeynmanGraph::bubble(), b, ExternalData::constants(2),
                               Complex(0.1, 0.0), verify),
                    convergence_error);

    // deep in the convergent region the doubled value is stable and the sum
    // matches the analytic continuation of the trace
    const SpectralBackend b20 = SpectralBackend::torus({1, 1, 1, 1, 1, 1}, 1.0, 20);
    const Complex value = pair(FeynmanGraph::bubble(), b20, ExternalData::constants(2),
                               Complex(1.5, 0.0), verify);
    CHECK(std::abs(value - zeta_trace(b20, 5.0)) < 1e-10);
}

TEST_CASE("capability boundaries are reported, not silently crossed") {
    const SpectralBackend circle = SpectralBackend::circle(1.0, 1.0, 8);
    CHECK_THROWS_AS((void)laurent_expansion(FeynmanGraph::bubble(), circle,
                                            ExternalData::constants(2), 2),
                    capability_error);

    const SpectralBackend b = SpectralBackend::torus({1, 1, 1, 1, 1, 1}, 1.0, 4);
    CHECK_THROWS_AS((void)laurent_expansion(FeynmanGraph::nested_two_loop(), b,
                                            ExternalData::constants(2), 2),
                    capability_error);

    const SpectralBackend flat = SpectralBackend::torus({1.0, 1.0}, 1.0, 4);
    const std::size_t zero = find_torus_mode(flat, {0, 0});
    CHECK_THROWS_AS((void)laurent_expansion(FeynmanGraph::bubble(), flat,
                                            ExternalData::from_modes({zero, zero}), 2),
                    capability_error);

    const SpectralBackend skew = SpectralBackend::torus({1, 1, 1, 1, 1, 2}, 1.0, 4);
    CHECK_THROWS_AS((void)laurent_expansion(FeynmanGraph::bubble(), skew,
                                            ExternalData::constants(2), 2),
                    capability_error);

    CHECK_THROWS_AS((void)laurent_expansion(FeynmanGraph::bubble(), b,
                                            ExternalData::constants(2), -1),
                    std::domain_error);
    CHECK_THROWS_AS((void)pair(FeynmanGraph::bubble(), b, ExternalData::constants(3), 0.0),
                    std::domain_error);
}

TEST_CASE("resource guards on oversized sums") {
    // unequal periods disable the histogram, so the raw odometer size triggers
    const SpectralBackend skew = SpectralBackend::torus({1, 1, 1, 1, 1, 2}, 1.0, 40);
    CHECK_THROWS_AS((void)pair(FeynmanGraph::bubble(), skew, ExternalData::constants(2),
                               Complex(1.5, 0.0)),
                    resource_limit_error);

    // equal periods keep working at the same cutoff through the histogram
    const SpectralBackend big = SpectralBackend::torus({1, 1, 1, 1, 1, 1}, 1.0, 40);
    const Complex v = pair(FeynmanGraph::bubble(), big, ExternalData::constants(2),
                           Complex(1.5, 0.0));
    CHECK(std::abs(v - zeta_trace(big, 5.0)) < 1e-10);

    // the circle evaluator bounds its mode-assignment enumeration
    const SpectralBackend wide = SpectralBackend::circle(1.0, 1.0, 1000);
    CHECK_THROWS_AS((void)pair(FeynmanGraph::bubble(), wide, ExternalData::constants(2),
                               Complex(1.0, 0.0)),
                    resource_limit_error);
}

TEST_CASE("rule assembly over a one-loop universe") {
    GraphCatalog catalog;
    const std::string b_label = catalog.add(FeynmanGraph::bubble(), "B");
    const std::string t_label = catalog.add(FeynmanGraph::triangle(), "T");
    const SpectralBackend b = SpectralBackend::torus({1, 1, 1, 1, 1, 1}, 1.0, 6);

    const Character gamma = character_from_rules(b, {b_label, t_label}, catalog, 4);
    CHECK(gamma.order() == 4);
    CHECK(gamma.has(b_label));
    CHECK(gamma.has(t_label));
    CHECK(std::abs(gamma.rule(b_label).coefficient(-1) - Complex(kBubbleResidue)) < 1e-10);
    CHECK(std::abs(gamma.rule(t_label).coefficient(-1) -
                   Complex(1.0 / (384.0 * std::pow(kPi, 3.0)))) < 1e-10);
    CHECK(pole_orders_within_loop_bound(gamma, catalog));

    // failures cite the offending generator
    const std::string nested = catalog.add(FeynmanGraph::nested_two_loop(), "G2");
    try {
        (void)character_from_rules(b, {nested}, catalog, 4);
        FAIL("expected a capability report");
    } catch (const capability_error& e) {
        const std::string what = e.what();
        CHECK(what.find("generator " + nested) == 0);
    }
}

}  // TEST_SUITE
