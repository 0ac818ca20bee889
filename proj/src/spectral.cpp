#include "hopfren/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "hopfren/errors.hpp"

namespace hopfren {

namespace {

constexpr std::size_t kMaxMaterializedModes = 400000;

// 16-point Gauss-Legendre rule on [-1, 1] (positive nodes; weights symmetric)
constexpr double kGlNode[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                               0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                               0.9445750230732326, 0.9894009349916499};
constexpr double kGlWeight[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                 0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};

template <typename F>
Complex integrate_panel(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Complex total = 0.0;
    for (int i = 0; i < 8; ++i) {
        total += kGlWeight[i] * (f(mid + half * kGlNode[i]) + f(mid - half * kGlNode[i]));
    }
    return total * half;
}

}  // namespace

Complex complex_gamma(Complex z) {
    static const double kLanczos[9] = {0.99999999999980993,     676.5203681218851,
                                       -1259.1392167224028,     771.32342877765313,
                                       -176.61502916214059,     12.507343278686905,
                                       -0.13857109526572012,    9.9843695780195716e-6,
                                       1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // reflection keeps the recursion in the well-conditioned half plane
        return M_PI / (std::sin(M_PI * z) * complex_gamma(Complex(1.0, 0.0) - z));
    }
    z -= 1.0;
    Complex x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    Complex t = z + 7.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

SpectralBackend SpectralBackend::circle(double radius, double mass, int cutoff) {
    if (radius <= 0.0) throw std::domain_error("circle radius must be positive");
    if (mass < 0.0) throw std::domain_error("mass must be non-negative");
    if (cutoff < 1) throw std::domain_error("mode cutoff must be at least 1");

    SpectralBackend b;
    b.kind_ = ManifoldKind::circle;
    b.dim_ = 1;
    b.radius_ = radius;
    b.periods_ = {2.0 * M_PI * radius};
    b.mass_ = mass;
    b.cutoff_ = cutoff;
    b.volume_ = 2.0 * M_PI * radius;
    b.drop_zero_ = (mass == 0.0);

    if (!b.drop_zero_) b.modes_.push_back({{0}, 0, mass * mass});
    for (int j = 1; j <= cutoff; ++j) {
        const double lambda = (static_cast<double>(j) / radius) * (static_cast<double>(j) / radius) +
                              mass * mass;
        b.modes_.push_back({{j}, 1, lambda});
        b.modes_.push_back({{j}, 2, lambda});
    }
    return b;
}

SpectralBackend SpectralBackend::torus(std::vector<double> periods, double mass, int cutoff) {
    if (periods.empty() || periods.size() > 8)
        throw std::domain_error("torus dimension must be between 1 and 8");
    for (double p : periods)
        if (p <= 0.0) throw std::domain_error("torus periods must be positive");
    if (mass < 0.0) throw std::domain_error("mass must be non-negative");
    if (cutoff < 1) throw std::domain_error("mode cutoff must be at least 1");

    SpectralBackend b;
    b.kind_ = ManifoldKind::torus;
    b.dim_ = static_cast<int>(periods.size());
    b.periods_ = std::move(periods);
    b.mass_ = mass;
    b.cutoff_ = cutoff;
    b.volume_ = 1.0;
    for (double p : b.periods_) b.volume_ *= p;
    b.drop_zero_ = (mass == 0.0);

    double count = 1.0;
    for (int i = 0; i < b.dim_; ++i) count *= 2.0 * cutoff + 1.0;
    if (count <= static_cast<double>(kMaxMaterializedModes)) {
        std::vector<int> k(b.dim_, -cutoff);
        while (true) {
            bool all_zero = std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
            if (!(all_zero && b.drop_zero_)) {
                double lambda = mass * mass;
                for (int i = 0; i < b.dim_; ++i) {
                    const double freq = 2.0 * M_PI * k[i] / b.periods_[i];
                    lambda += freq * freq;
                }
                b.modes_.push_back({k, 0, lambda});
            }
            int axis = b.dim_ - 1;
            while (axis >= 0 && k[axis] == cutoff) k[axis--] = -cutoff;
            if (axis < 0) break;
            ++k[axis];
        }
        std::stable_sort(b.modes_.begin(), b.modes_.end(), [](const Mode& a, const Mode& c) {
            return std::make_tuple(a.lambda, a.k, a.trig) < std::make_tuple(c.lambda, c.k, c.trig);
        });
    }
    return b;
}

const Mode& SpectralBackend::mode(std::size_t i) const {
    if (modes_.empty())
        throw resource_limit_error(
            "mode list not materialized for this backend size; use trace/lattice routines");
    if (i >= modes_.size()) throw std::out_of_range("mode index beyond cutoff");
    return modes_[i];
}

double SpectralBackend::min_eigenvalue() const {
    if (mass_ > 0.0) return mass_ * mass_;
    double freq = 2.0 * M_PI / *std::max_element(periods_.begin(), periods_.end());
    return freq * freq;
}

Complex SpectralBackend::basis(std::size_t i, const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw std::domain_error("point dimension does not match backend dimension");
    const Mode& md = mode(i);
    if (kind_ == ManifoldKind::circle) {
        const double theta = x[0] / radius_;
        switch (md.trig) {
            case 0: return Complex(1.0 / std::sqrt(2.0 * M_PI * radius_), 0.0);
            case 1: return Complex(std::cos(md.k[0] * theta) / std::sqrt(M_PI * radius_), 0.0);
            default: return Complex(std::sin(md.k[0] * theta) / std::sqrt(M_PI * radius_), 0.0);
        }
    }
    double phase = 0.0;
    for (int a = 0; a < dim_; ++a) phase += 2.0 * M_PI * md.k[a] * x[a] / periods_[a];
    return std::exp(Complex(0.0, phase)) / std::sqrt(volume_);
}

Complex green_function(const SpectralBackend& b, Complex z, const std::vector<double>& x,
                       const std::vector<double>& y, GreenDiagnostics* diag) {
    const Complex power = -(Complex(1.0, 0.0) + z);
    const std::size_t n = b.mode_count();
    if (n == 0)
        throw resource_limit_error("mode list not materialized; shrink the cutoff or dimension");
    const std::size_t half = n / 2;
    Complex sum = 0.0;
    Complex sum_half = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex term = b.basis(i, x) * std::conj(b.basis(i, y)) *
                             std::exp(power * std::log(b.eigenvalue(i)));
        sum += term;
        if (i + 1 == half) sum_half = sum;
    }
    if (diag != nullptr) {
        diag->partial_half = sum_half;
        diag->partial_full = sum;
        diag->tail_growth = std::abs(sum - sum_half);
        diag->modes_used = n;
        diag->converged = diag->tail_growth <= 1e-4 * std::max(1.0, std::abs(sum));
    }
    return sum;
}

namespace {

// tail weight of the per-axis theta after Poisson resummation:
// w(p, t) = 2 sum_{j>=1} exp(-p^2 j^2 / (4t))
double theta_axis_tail(double p, double t) {
    double w = 0.0;
    for (int j = 1; j < 100000; ++j) {
        const double e = std::exp(-p * p * j * j / (4.0 * t));
        w += 2.0 * e;
        if (e < 1e-30) break;
    }
    return w;
}

// per-axis theta sum_{j in Z} exp(-(2 pi j / p)^2 t), direct form for t >= O(1)
double theta_axis_direct(double p, double t) {
    double s = 1.0;
    for (int j = 1; j < 100000; ++j) {
        const double freq = 2.0 * M_PI * j / p;
        const double e = std::exp(-freq * freq * t);
        s += 2.0 * e;
        if (e < 1e-30) break;
    }
    return s;
}

// full heat trace minus its leading flat term, written cancellation-free:
// exp(-m^2 t) V (4 pi t)^{-n/2} (prod_i (1 + w_i) - 1)
double heat_trace_remainder(const SpectralBackend& b, double t) {
    double prod = 1.0;
    for (double p : b.periods()) prod *= 1.0 + theta_axis_tail(p, t);
    const double w = prod - 1.0;
    if (w == 0.0) return 0.0;
    const int n = b.dimension();
    return std::exp(-b.mass() * b.mass() * t) * b.volume() *
           std::pow(4.0 * M_PI * t, -0.5 * n) * w;
}

// heat trace over the retained spectrum for t >= O(1)
double heat_trace_retained(const SpectralBackend& b, double t) {
    double prod = 1.0;
    for (double p : b.periods()) prod *= theta_axis_direct(p, t);
    double full = std::exp(-b.mass() * b.mass() * t) * prod;
    if (b.zero_mode_dropped()) full -= std::exp(-b.mass() * b.mass() * t);
    return full;
}

// G(sigma) = sum_{j>=0} (-m^2)^j / (j! (sigma + j)): the analytically continued
// integral over (0,1] of t^{sigma-1} exp(-m^2 t)
Complex mellin_lower_core(Complex sigma, double m2) {
    Complex total = 0.0;
    double coeff = 1.0;
    for (int j = 0; j < 170; ++j) {
        total += coeff / (sigma + static_cast<double>(j));
        coeff *= -m2 / (j + 1.0);
        if (std::abs(coeff) < 1e-25 && j >= 4) break;
    }
    return total;
}

// integral over (0,1] of t^{s-1} * remainder, geometric panels toward 0
Complex mellin_lower_remainder(const SpectralBackend& b, Complex s) {
    Complex total = 0.0;
    int quiet = 0;
    double hi = 1.0;
    for (int j = 0; j < 120 && quiet < 3; ++j) {
        const double lo = hi * 0.5;
        const Complex panel = integrate_panel(
            [&](double t) {
                const double rem = heat_trace_remainder(b, t);
                if (rem == 0.0) return Complex(0.0, 0.0);
                return std::exp((s - 1.0) * std::log(t)) * rem;
            },
            lo, hi);
        total += panel;
        quiet = (std::abs(panel) < 1e-24) ? quiet + 1 : 0;
        hi = lo;
    }
    return total;
}

// integral over [1, infinity) of t^{s-1} * retained heat trace
Complex mellin_upper(const SpectralBackend& b, Complex s) {
    Complex total = 0.0;
    int quiet = 0;
    double a = 1.0;
    for (int j = 0; j < 4000 && quiet < 3; ++j) {
        const Complex panel = integrate_panel(
            [&](double t) {
                const double th = heat_trace_retained(b, t);
                if (th == 0.0) return Complex(0.0, 0.0);
                return std::exp((s - 1.0) * std::log(t)) * th;
            },
            a, a + 1.0);
        total += panel;
        quiet = (std::abs(panel) < 1e-25 && a > 3.0) ? quiet + 1 : 0;
        a += 1.0;
    }
    return total;
}

Complex zeta_trace_plain(const SpectralBackend& b, Complex s) {
    const int n = b.dimension();
    const double m2 = b.mass() * b.mass();
    Complex numerator = b.volume() * std::pow(4.0 * M_PI, -0.5 * n) *
                        mellin_lower_core(s - 0.5 * n, m2);
    numerator += mellin_lower_remainder(b, s);
    if (b.zero_mode_dropped()) numerator -= mellin_lower_core(s, m2);
    numerator += mellin_upper(b, s);
    return numerator / complex_gamma(s);
}

// points where the Mellin numerator has a pole (before division by Gamma)
std::vector<double> numerator_pole_locations(const SpectralBackend& b) {
    std::vector<double> poles;
    const int n = b.dimension();
    const double m2 = b.mass() * b.mass();
    for (int k = 0; k <= 80; ++k) {
        if (k >= 1 && m2 == 0.0) break;  // only the leading term survives at zero mass
        poles.push_back(0.5 * n - k);
    }
    if (b.zero_mode_dropped()) poles.push_back(0.0);
    std::sort(poles.begin(), poles.end());
    poles.erase(std::unique(poles.begin(), poles.end()), poles.end());
    return poles;
}

bool is_nonpositive_integer(double x) {
    return x <= 1e-9 && std::abs(x - std::round(x)) < 1e-9;
}

}  // namespace

bool zeta_trace_has_pole(const SpectralBackend& b, Complex s0) {
    if (std::abs(s0.imag()) > 1e-9) return false;
    const double re = s0.real();
    const int n = b.dimension();
    const double m2 = b.mass() * b.mass();
    for (int k = 0; k <= 80; ++k) {
        if (k >= 1 && m2 == 0.0) break;
        const double sk = 0.5 * n - k;
        if (std::abs(re - sk) < 1e-9) return !is_nonpositive_integer(sk);
    }
    return false;
}

Complex zeta_trace_residue(const SpectralBackend& b, Complex s0) {
    if (!zeta_trace_has_pole(b, s0)) return 0.0;
    const int n = b.dimension();
    const double m2 = b.mass() * b.mass();
    const int k = static_cast<int>(std::llround(0.5 * n - s0.real()));
    double coeff = b.volume() * std::pow(4.0 * M_PI, -0.5 * n);
    for (int j = 1; j <= k; ++j) coeff *= -m2 / j;
    return coeff / complex_gamma(s0);
}

Complex zeta_trace(const SpectralBackend& b, Complex s) {
    // the numerator poles that the 1/Gamma zeros cancel leave removable points;
    // near one of them, recover the value as the mean over a small circle
    double nearest_removable = 1e30;
    for (double p : numerator_pole_locations(b)) {
        if (!is_nonpositive_integer(p)) continue;
        nearest_removable = std::min(nearest_removable, std::abs(s - Complex(p, 0.0)));
    }
    if (nearest_removable >= 0.05) return zeta_trace_plain(b, s);

    const int kPoints = 32;
    const double rho = 0.1;
    Complex mean = 0.0;
    for (int i = 0; i < kPoints; ++i) {
        const double theta = 2.0 * M_PI * (i + 0.5) / kPoints;
        mean += zeta_trace_plain(b, s + rho * std::exp(Complex(0.0, theta)));
    }
    return mean / static_cast<double>(kPoints);
}

LaurentSeries zeta_trace_expansion(const SpectralBackend& b, Complex s0, int order) {
    if (order < 0) throw std::domain_error("expansion order must be non-negative");
    if (order > 16)
        throw capability_error("trace expansion order exceeds the available heat coefficients");

    // keep the contour clear of every true pole other than s0 itself
    double clearance = 1e30;
    for (double p : numerator_pole_locations(b)) {
        if (is_nonpositive_integer(p)) continue;  // removable after 1/Gamma
        const double d = std::abs(s0 - Complex(p, 0.0));
        if (d > 1e-9) clearance = std::min(clearance, d);
    }
    const double rho = std::min(0.2, 0.5 * clearance);

    const int kPoints = 96;
    std::vector<Complex> samples(kPoints);
    for (int i = 0; i < kPoints; ++i) {
        const double theta = 2.0 * M_PI * (i + 0.5) / kPoints;
        samples[i] = zeta_trace(b, s0 + rho * std::exp(Complex(0.0, theta)));
    }

    const bool pole = zeta_trace_has_pole(b, s0);
    const int lo = pole ? -1 : 0;
    std::vector<Complex> coeffs;
    for (int j = lo; j <= order; ++j) {
        Complex c = 0.0;
        for (int i = 0; i < kPoints; ++i) {
            const double theta = 2.0 * M_PI * (i + 0.5) / kPoints;
            c += samples[i] * std::exp(Complex(0.0, -j * theta));
        }
        c /= static_cast<double>(kPoints) * std::pow(rho, j);
        coeffs.push_back(c);
    }
    return LaurentSeries(lo, std::move(coeffs));
}

std::vector<double> heat_kernel_expansion(const SpectralBackend& b, int count) {
    if (count < 0) throw std::domain_error("coefficient count must be non-negative");
    if (count > 16)
        throw capability_error("heat coefficients beyond order 16 are not tabulated");
    std::vector<double> coeffs(count, 0.0);
    if (count > 0) coeffs[0] = b.volume();
    return coeffs;
}

Complex momentum_tensor(const SpectralBackend& b, std::size_t i, std::size_t j, std::size_t k) {
    const Mode& mi = b.mode(i);
    const Mode& mj = b.mode(j);
    const Mode& mk = b.mode(k);

    if (b.kind() == ManifoldKind::torus) {
        for (int a = 0; a < b.dimension(); ++a)
            if (mi.k[a] + mj.k[a] + mk.k[a] != 0) return Complex(0.0, 0.0);
        return Complex(1.0 / std::sqrt(b.volume()), 0.0);
    }

    // aliasing-free trapezoid rule: exact for band-limited products
    const int band = std::abs(mi.k[0]) + std::abs(mj.k[0]) + std::abs(mk.k[0]);
    const int points = 4 * band + 8;
    const double length = b.periods()[0];
    Complex total = 0.0;
    for (int q = 0; q < points; ++q) {
        const std::vector<double> x{length * q / points};
        total += b.basis(i, x) * b.basis(j, x) * b.basis(k, x);
    }
    return total * (length / points);
}

double orthonormality_residual(const SpectralBackend& b, std::size_t limit) {
    if (b.mode_count() == 0)
        throw resource_limit_error("mode list not materialized; shrink the cutoff or dimension");
    const std::size_t n = std::min(limit, b.mode_count());

    // product trapezoid grid, fine enough to integrate every mode pair exactly
    int band = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (int a = 0; a < b.dimension(); ++a) band = std::max(band, std::abs(b.mode(i).k[a]));
    const int per_axis = 4 * band + 8;
    double grid_points = 1.0;
    for (int a = 0; a < b.dimension(); ++a) grid_points *= per_axis;
    if (grid_points > 1.5e6)
        throw resource_limit_error("orthonormality quadrature grid too large");

    const int total_points = static_cast<int>(grid_points);
    std::vector<std::vector<double>> points(total_points,
                                            std::vector<double>(b.dimension(), 0.0));
    for (int idx = 0; idx < total_points; ++idx) {
        int rest = idx;
        for (int a = 0; a < b.dimension(); ++a) {
            points[idx][a] = b.periods()[a] * (rest % per_axis) / per_axis;
            rest /= per_axis;
        }
    }
    const double cell = b.volume() / total_points;

    std::vector<std::vector<Complex>> values(n, std::vector<Complex>(total_points));
    for (std::size_t i = 0; i < n; ++i)
        for (int idx = 0; idx < total_points; ++idx) values[i][idx] = b.basis(i, points[idx]);

    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            Complex inner = 0.0;
            for (int idx = 0; idx < total_points; ++idx)
                inner += values[i][idx] * std::conj(values[j][idx]);
            inner *= cell;
            const double target = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(inner - target));
        }
    }
    return worst;
}

}  // namespace hopfren
