#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "hopfren/errors.hpp"
#include "hopfren/spectral.hpp"

using namespace hopfren;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kZeta3 = 1.20205690315959428540;

std::size_t find_torus_mode(const SpectralBackend& b, const std::vector<int>& k) {
    for (std::size_t i = 0; i < b.mode_count(); ++i) {
        if (b.mode(i).k == k) return i;
    }
    FAIL("requested lattice mode not found");
    return 0;
}

// independent box sum over Z^6 (|k|_inf <= bound) of (4 pi^2 |k|^2 + 1)^(-s),
// assembled through per-axis convolution of squared-frequency counts
double unit_six_torus_box_sum(int bound, double s) {
    std::vector<double> axis(static_cast<std::size_t>(bound) * bound + 1, 0.0);
    for (int j = -bound; j <= bound; ++j) axis[static_cast<std::size_t>(j) * j] += 1.0;
    std::vector<double> counts{1.0};
    for (int d = 0; d < 6; ++d) {
        std::vector<double> next(counts.size() + axis.size() - 1, 0.0);
        for (std::size_t a = 0; a < counts.size(); ++a) {
            if (counts[a] == 0.0) continue;
            for (std::size_t c = 0; c < axis.size(); ++c) next[a + c] += counts[a] * axis[c];
        }
        counts = std::move(next);
    }
    double total = 0.0;
    for (std::size_t q = 0; q < counts.size(); ++q) {
        if (counts[q] == 0.0) continue;
        total += counts[q] * std::pow(4.0 * kPi * kPi * static_cast<double>(q) + 1.0, -s);
    }
    return total;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("gamma function reference values") {
    CHECK(std::abs(complex_gamma(0.5) - Complex(std::sqrt(kPi))) < 1e-12);
    CHECK(std::abs(complex_gamma(6.0) - Complex(120.0)) < 120.0 * 1e-12);
    // |Gamma(1+i)| = sqrt(pi / sinh(pi))
    const double expected = std::sqrt(kPi / std::sinh(kPi));
    CHECK(std::abs(std::abs(complex_gamma(Complex(1.0, 1.0))) - expected) < 1e-12);
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    const Complex zz(0.3, 0.2);
    const Complex lhs = complex_gamma(zz) * complex_gamma(Complex(1.0, 0.0) - zz);
    const Complex rhs = kPi / std::sin(kPi * zz);
    CHECK(std::abs(lhs - rhs) < 1e-11 * std::abs(rhs));
}

TEST_CASE("backend construction and mode tables") {
    const SpectralBackend c = SpectralBackend::circle(1.0, 1.0, 3);
    CHECK(c.kind() == ManifoldKind::circle);
    CHECK(c.dimension() == 1);
    CHECK(c.mode_count() == 7);
    CHECK_FALSE(c.zero_mode_dropped());
    CHECK(c.volume() == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(c.min_eigenvalue() == doctest::Approx(1.0));
    const std::vector<double> expected{1.0, 2.0, 2.0, 5.0, 5.0, 10.0, 10.0};
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(c.eigenvalue(i) == doctest::Approx(expected[i]).epsilon(1e-14));

    const SpectralBackend c0 = SpectralBackend::circle(1.0, 0.0, 3);
    CHECK(c0.mode_count() == 6);
    CHECK(c0.zero_mode_dropped());
    CHECK(c0.min_eigenvalue() == doctest::Approx(1.0));

    const SpectralBackend t = SpectralBackend::torus({1.0, 2.0}, 0.0, 2);
    CHECK(t.mode_count() == 24);
    CHECK(t.volume() == doctest::Approx(2.0));
    CHECK(t.mode(0).lambda == doctest::Approx(kPi * kPi).epsilon(1e-13));

    // deterministic tie-breaking by lattice vector
    const SpectralBackend ts = SpectralBackend::torus({1.0, 1.0}, 0.0, 1);
    CHECK(ts.mode_count() == 8);
    CHECK(ts.mode(0).k == std::vector<int>{-1, 0});
    CHECK(ts.mode(1).k == std::vector<int>{0, -1});
    CHECK(ts.mode(2).k == std::vector<int>{0, 1});
    CHECK(ts.mode(3).k == std::vector<int>{1, 0});

    CHECK(SpectralBackend::circle(2.0, 0.0, 3).min_eigenvalue() == doctest::Approx(0.25));
    CHECK(SpectralBackend::torus({1.0, 3.0}, 0.0, 2).min_eigenvalue() ==
          doctest::Approx(4.0 * kPi * kPi / 9.0));

    CHECK_THROWS_AS(SpectralBackend::circle(-1.0, 0.0, 3), std::domain_error);
    CHECK_THROWS_AS(SpectralBackend::circle(1.0, -0.5, 3), std::domain_error);
    CHECK_THROWS_AS(SpectralBackend::circle(1.0, 1.0, 0), std::domain_error);
    CHECK_THROWS_AS(SpectralBackend::torus({}, 1.0, 3), std::domain_error);
    CHECK_THROWS_AS(SpectralBackend::torus({1.0, -2.0}, 1.0, 3), std::domain_error);
}

TEST_CASE("basis orthonormality under quadrature") {
    CHECK(orthonormality_residual(SpectralBackend::circle(1.0, 1.0, 8)) < 1e-12);
    CHECK(orthonormality_residual(SpectralBackend::torus({1.0, 1.0}, 1.0, 3)) < 1e-12);
    CHECK(orthonormality_residual(SpectralBackend::torus({2.0, 0.5}, 0.0, 3), 20) < 1e-12);
    // a backend past the materialization cap has no mode list to integrate
    CHECK_THROWS_AS(orthonormality_residual(SpectralBackend::torus({1.0, 1.0, 1.0}, 1.0, 40)),
                    resource_limit_error);
}

TEST_CASE("massless circle trace: even zeta values, pole, and zero point") {
    const SpectralBackend b = SpectralBackend::circle(1.0, 0.0, 4);

    // trace(s) = 2 zeta(2s): at s=2 this is pi^4/45, at s=3 it is 2 pi^6/945
    CHECK(std::abs(zeta_trace(b, 2.0) - Complex(std::pow(kPi, 4) / 45.0)) < 1e-10);
    CHECK(std::abs(zeta_trace(b, 3.0) - Complex(2.0 * std::pow(kPi, 6) / 945.0)) < 1e-12);
    CHECK(std::abs(zeta_trace(b, 1.5) - Complex(2.0 * kZeta3)) < 1e-11);

    CHECK(zeta_trace_has_pole(b, 0.5));
    CHECK_FALSE(zeta_trace_has_pole(b, -0.5));
    CHECK_FALSE(zeta_trace_has_pole(b, 2.0));
    CHECK(std::abs(zeta_trace_residue(b, 0.5) - Complex(1.0)) < 1e-10);

    // Laurent window at the pole: 2 zeta(2s) = 1/(s - 1/2) + 2 gamma_E + O(s - 1/2)
    const LaurentSeries window = zeta_trace_expansion(b, 0.5, 1);
    CHECK(window.pole_order() == 1);
    CHECK(std::abs(window.coefficient(-1) - Complex(1.0)) < 1e-6);
    CHECK(std::abs(window.coefficient(0) - Complex(2.0 * kEulerGamma)) < 1e-6);

    // the dropped zero mode leaves a removable point with value -1 at s=0
    CHECK(std::abs(zeta_trace(b, 0.0) - Complex(-1.0)) < 1e-8);
}

TEST_CASE("circle radius scaling of the trace") {
    const SpectralBackend b1 = SpectralBackend::circle(1.0, 0.0, 4);
    const SpectralBackend b2 = SpectralBackend::circle(2.0, 0.0, 4);

    CHECK(std::abs(zeta_trace(b2, 2.0) - Complex(16.0 * std::pow(kPi, 4) / 45.0)) <
          16.0 * std::pow(kPi, 4) / 45.0 * 1e-10);
    CHECK(std::abs(zeta_trace_residue(b2, 0.5) - Complex(2.0)) < 1e-10);

    // trace_R(s) = R^(2s) trace_1(s)
    const Complex s(1.7, 0.0);
    const Complex lhs = zeta_trace(b2, s);
    const Complex rhs = std::pow(4.0, 1.7) * zeta_trace(b1, s);
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(rhs));
}

TEST_CASE("massive circle trace: odd-dimension zero values and direct sum") {
    const SpectralBackend b = SpectralBackend::circle(1.0, 1.0, 4);

    // no integer-power heat coefficients in one dimension: trace(0) = trace(-1) = 0
    CHECK(std::abs(zeta_trace(b, 0.0)) < 1e-8);
    CHECK(std::abs(zeta_trace(b, -1.0)) < 1e-8);

    CHECK(zeta_trace_has_pole(b, 0.5));
    CHECK(zeta_trace_has_pole(b, -0.5));
    CHECK(zeta_trace_has_pole(b, -1.5));
    CHECK_FALSE(zeta_trace_has_pole(b, 0.0));

    // direct eigenvalue sum at s=2: 1 + 2 sum_k (k^2+1)^(-2)
    double direct = 1.0;
    for (int k = 1; k <= 4000; ++k) {
        const double lambda = static_cast<double>(k) * k + 1.0;
        direct += 2.0 / (lambda * lambda);
    }
    CHECK(std::abs(zeta_trace(b, 2.0) - Complex(direct)) < 1e-9);
}

TEST_CASE("square torus trace against the two-squares counting function") {
    const SpectralBackend b = SpectralBackend::torus({2.0 * kPi, 2.0 * kPi}, 0.0, 2);

    // eigenvalues are |k|^2 over Z^2 minus the origin, so
    // trace(3) = sum r2(n) n^-3 = 4 zeta(3) beta(3) with beta(3) = pi^3/32
    const double expected = kZeta3 * std::pow(kPi, 3) / 8.0;
    CHECK(std::abs(zeta_trace(b, 3.0) - Complex(expected)) < 1e-10 * expected);

    // Weyl pole at s = 1 with residue V/(4 pi) = pi
    CHECK(zeta_trace_has_pole(b, 1.0));
    CHECK(std::abs(zeta_trace_residue(b, 1.0) - Complex(kPi)) < 1e-12);
    const LaurentSeries window = zeta_trace_expansion(b, 1.0, 0);
    CHECK(std::abs(window.coefficient(-1) - Complex(kPi)) < 1e-8);

    CHECK_FALSE(zeta_trace_has_pole(b, 0.0));
    CHECK(std::abs(zeta_trace(b, 0.0) - Complex(-1.0)) < 1e-8);
}

TEST_CASE("unit six-torus trace: box-sum cross-check and residue ladder") {
    const SpectralBackend b = SpectralBackend::torus({1, 1, 1, 1, 1, 1}, 1.0, 6);

    // s = 4 sits far from the poles; the |k|_inf <= 8 box sum has tail < 1e-7
    const double direct = unit_six_torus_box_sum(8, 4.0);
    CHECK(std::abs(zeta_trace(b, 4.0) - Complex(direct)) < 5e-7);

    CHECK(zeta_trace_has_pole(b, 3.0));
    CHECK(zeta_trace_has_pole(b, 2.0));
    CHECK(zeta_trace_has_pole(b, 1.0));
    CHECK_FALSE(zeta_trace_has_pole(b, 0.0));   // cancelled by the gamma factor
    CHECK_FALSE(zeta_trace_has_pole(b, -1.0));

    // residues V (4 pi)^(-3) (-m^2)^k / (k! Gamma(3-k)) at s = 3 - k
    const double base = std::pow(4.0 * kPi, -3.0);
    CHECK(std::abs(zeta_trace_residue(b, 3.0) - Complex(base / 2.0)) < 1e-12);
    CHECK(std::abs(zeta_trace_residue(b, 2.0) - Complex(-base)) < 1e-12);
    CHECK(std::abs(zeta_trace_residue(b, 2.0) - Complex(-1.0 / (64.0 * kPi * kPi * kPi))) <
          1e-15);

    // numerical residue from the contour window agrees with the bookkeeping
    const LaurentSeries window = zeta_trace_expansion(b, 2.0, 0);
    CHECK(std::abs(window.coefficient(-1) - Complex(-base)) < 1e-8);
}

TEST_CASE("mass pole cancellation bookkeeping in two dimensions") {
    const SpectralBackend b = SpectralBackend::torus({2.0 * kPi, 2.0 * kPi}, 1.0, 2);
    CHECK(zeta_trace_has_pole(b, 1.0));
    // s = 0 and below: numerator poles are cancelled by 1/Gamma zeros
    CHECK_FALSE(zeta_trace_has_pole(b, 0.0));
    CHECK_FALSE(zeta_trace_has_pole(b, -1.0));
    // the mass-independent leading residue
    CHECK(std::abs(zeta_trace_residue(b, 1.0) - Complex(kPi)) < 1e-12);
}

TEST_CASE("trace expansion guards and regular-point consistency") {
    const SpectralBackend b = SpectralBackend::circle(1.0, 0.0, 4);
    CHECK_THROWS_AS((void)zeta_trace_expansion(b, 2.0, 17), capability_error);
    CHECK_THROWS_AS((void)zeta_trace_expansion(b, 2.0, -1), std::domain_error);
    CHECK_THROWS_AS((void)heat_kernel_expansion(b, 17), capability_error);
    CHECK_THROWS_AS((void)heat_kernel_expansion(b, -1), std::domain_error);

    const std::vector<double> heat = heat_kernel_expansion(b, 3);
    REQUIRE(heat.size() == 3);
    CHECK(heat[0] == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(heat[1] == 0.0);
    CHECK(heat[2] == 0.0);

    const LaurentSeries window = zeta_trace_expansion(b, 2.0, 1);
    CHECK(window.pole_order() == 0);
    CHECK(std::abs(window.coefficient(0) - zeta_trace(b, 2.0)) < 1e-9);
    // first derivative against a central difference of the direct evaluation
    const double h = 1e-3;
    const Complex diff = (zeta_trace(b, 2.0 + h) - zeta_trace(b, 2.0 - h)) / (2.0 * h);
    CHECK(std::abs(window.coefficient(1) - diff) < 1e-5);
}

TEST_CASE("torus momentum tensor obeys the lattice selection rule") {
    const SpectralBackend b = SpectralBackend::torus({1.0, 1.0}, 1.0, 2);
    const std::size_t zero = find_torus_mode(b, {0, 0});
    const std::size_t plus = find_torus_mode(b, {1, 0});
    const std::size_t minus = find_torus_mode(b, {-1, 0});
    const std::size_t diag = find_torus_mode(b, {1, 1});
    const std::size_t off = find_torus_mode(b, {0, -1});

    // momentum-conserving triples on the unit torus evaluate to exactly 1
    CHECK(std::abs(momentum_tensor(b, plus, minus, zero) - Complex(1.0)) < 1e-12);
    CHECK(std::abs(momentum_tensor(b, diag, minus, off) - Complex(1.0)) < 1e-12);
    CHECK(std::abs(momentum_tensor(b, zero, zero, zero) - Complex(1.0)) < 1e-12);

    // non-conserving triples are exactly zero, not merely small
    const Complex violating = momentum_tensor(b, plus, plus, zero);
    CHECK(violating.real() == 0.0);
    CHECK(violating.imag() == 0.0);
    const Complex violating2 = momentum_tensor(b, diag, diag, diag);
    CHECK(violating2.real() == 0.0);
    CHECK(violating2.imag() == 0.0);

    // general periods scale as 1/sqrt(V)
    const SpectralBackend br = SpectralBackend::torus({2.0, 1.0}, 1.0, 2);
    const std::size_t z2 = find_torus_mode(br, {0, 0});
    const std::size_t p2 = find_torus_mode(br, {1, 0});
    const std::size_t m2 = find_torus_mode(br, {-1, 0});
    CHECK(std::abs(momentum_tensor(br, p2, m2, z2) - Complex(1.0 / std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("circle momentum tensor against closed forms and quadrature") {
    const SpectralBackend b = SpectralBackend::circle(1.0, 1.0, 5);
    // sorted modes: constant, cos(1), sin(1), cos(2), sin(2), ...
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * kPi);
    CHECK(std::abs(momentum_tensor(b, 0, 0, 0) - Complex(inv_sqrt_2pi)) < 1e-13);
    CHECK(std::abs(momentum_tensor(b, 0, 1, 1) - Complex(inv_sqrt_2pi)) < 1e-13);
    CHECK(std::abs(momentum_tensor(b, 0, 2, 2) - Complex(inv_sqrt_2pi)) < 1e-13);
    // parity-odd integrand vanishes
    CHECK(std::abs(momentum_tensor(b, 0, 1, 2)) < 1e-13);
    // cos(1) cos(2) cos(3) and cos(1) sin(1) sin(2) both integrate to pi/2
    const double expected = 0.5 / std::sqrt(kPi);
    CHECK(std::abs(momentum_tensor(b, 1, 3, 5) - Complex(expected)) < 1e-13);
    CHECK(std::abs(momentum_tensor(b, 1, 2, 4) - Complex(expected)) < 1e-13);

    // independent dense trapezoid quadrature over a few triples
    const std::size_t triples[4][3] = {{1, 1, 3}, {2, 2, 3}, {2, 4, 5}, {3, 3, 0}};
    for (const auto& tri : triples) {
        Complex quad = 0.0;
        const int n = 4096;
        for (int q = 0; q < n; ++q) {
            const std::vector<double> x{2.0 * kPi * q / n};
            quad += b.basis(tri[0], x) * b.basis(tri[1], x) * b.basis(tri[2], x);
        }
        quad *= 2.0 * kPi / n;
        CHECK(std::abs(momentum_tensor(b, tri[0], tri[1], tri[2]) - quad) < 1e-12);
    }
}

TEST_CASE("circle kernel sum matches the hyperbolic closed form") {
    // kernel of (-d^2/dx^2 + 1)^(-1) on the circumference-2pi circle:
    // G(x, y) = cosh(pi - |x - y|) / (2 sinh(pi))
    const SpectralBackend b = SpectralBackend::circle(1.0, 1.0, 2000);
    const auto closed = [](double d) { return std::cosh(kPi - d) / (2.0 * std::sinh(kPi)); };

    CHECK(std::abs(green_function(b, 0.0, {0.4}, {1.7}) - Complex(closed(1.3))) < 1e-3);
    CHECK(std::abs(green_function(b, 0.0, {2.0}, {2.0}) - Complex(closed(0.0))) < 1e-3);
    CHECK(std::abs(green_function(b, 0.0, {5.9}, {0.2}) - Complex(closed(2.0 * kPi - 5.7))) <
          1e-3);

    GreenDiagnostics diag;
    (void)green_function(b, 1.0, {0.4}, {1.7}, &diag);
    CHECK(diag.converged);
    CHECK(diag.modes_used == 4001);
    CHECK(diag.tail_growth < 1e-6);

    // exponent too shallow for convergence: the cutoff growth must be flagged
    GreenDiagnostics bad;
    (void)green_function(b, Complex(-0.6, 0.0), {0.0}, {0.0}, &bad);
    CHECK_FALSE(bad.converged);
}

TEST_CASE("oversize backends keep trace routines but refuse mode materialization") {
    const SpectralBackend big = SpectralBackend::torus({1, 1, 1, 1, 1, 1}, 1.0, 40);
    CHECK(big.mode_count() == 0);
    CHECK_THROWS_AS((void)big.mode(0), resource_limit_error);
    CHECK_THROWS_AS((void)green_function(big, 1.0, {0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0}),
                    resource_limit_error);
    CHECK_THROWS_AS((void)momentum_tensor(big, 0, 0, 0), resource_limit_error);

    // the analytically continued trace is cutoff-independent
    const SpectralBackend small = SpectralBackend::torus({1, 1, 1, 1, 1, 1}, 1.0, 6);
    CHECK(std::abs(zeta_trace(big, 4.0) - zeta_trace(small, 4.0)) < 1e-12);
}

TEST_CASE("basis point dimension is validated") {
    const SpectralBackend c = SpectralBackend::circle(1.0, 1.0, 2);
    CHECK_THROWS_AS((void)c.basis(0, {0.1, 0.2}), std::domain_error);
    const SpectralBackend t = SpectralBackend::torus({1.0, 1.0}, 1.0, 2);
    CHECK_THROWS_AS((void)green_function(t, 0.0, {0.1}, {0.2}), std::domain_error);
}

}  // TEST_SUITE
