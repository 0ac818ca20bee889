#include "hopfren/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hopfren/errors.hpp"

namespace hopfren {

namespace {

constexpr int kMaxDenseDimension = 4096;  // 64 x 64 grid

void validate_grid(const Grid& grid) {
    if (grid.dim != 1 && grid.dim != 2) {
        throw std::domain_error("grid dimension must be 1 or 2");
    }
    if (grid.points_per_axis < 3) {
        throw std::domain_error("grid needs at least 3 points per axis");
    }
}

int wrap(int i, int n) { return (i % n + n) % n; }

// flat index of the periodic neighbor shifted by `step` along `axis`
int neighbor(const Grid& grid, int index, int axis, int step) {
    const int n = grid.points_per_axis;
    if (grid.dim == 1) return wrap(index + step, n);
    const int row = index / n;
    const int col = index % n;
    if (axis == 0) return wrap(row + step, n) * n + col;
    return row * n + wrap(col + step, n);
}

// Flux-form stencil of div(e^{(n-2) f} grad .) with midpoint weights; negative
// semi-definite and exactly symmetric by construction.
Eigen::MatrixXd flux_matrix(const ConformalMetric& gm) {
    const Grid& grid = gm.grid();
    const int m = grid.size();
    if (m > kMaxDenseDimension) {
        throw resource_limit_error("grid too large for dense operator assembly");
    }
    const double h = grid.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const auto& f = gm.f();
    const double exponent = grid.dim - 2;
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int axis = 0; axis < grid.dim; ++axis) {
            const int plus = neighbor(grid, i, axis, 1);
            const double w = std::exp(exponent * 0.5 * (f[i] + f[plus])) * inv_h2;
            k(i, i) -= w;
            k(plus, plus) -= w;
            k(i, plus) += w;
            k(plus, i) += w;
        }
    }
    return k;
}

double check_and_symmetrize(Eigen::MatrixXd& a) {
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double asymmetry = (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
    if (asymmetry >= 1e-10) {
        throw invariant_violation("operator assembly lost symmetry");
    }
    a = 0.5 * (a + a.transpose()).eval();
    return asymmetry;
}

// largest singular value by power iteration on M^H M (deterministic start)
double spectral_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(m.cols());
    v /= v.norm();
    double sigma = 0.0;
    for (int it = 0; it < 80; ++it) {
        Eigen::VectorXcd w = m.adjoint() * (m * v);
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        const double next = std::sqrt(norm);
        v = w / norm;
        if (it > 4 && std::abs(next - sigma) <= 1e-13 * std::max(1.0, next)) {
            sigma = next;
            break;
        }
        sigma = next;
    }
    return sigma;
}

struct EigenPair {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

EigenPair positive_eigensystem(const Eigen::MatrixXd& sym, const char* what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw convergence_error("eigen-decomposition failed");
    }
    EigenPair pair{solver.eigenvalues(), solver.eigenvectors()};
    if (pair.values.minCoeff() <= 0.0) {
        throw spectrum_error(what);
    }
    return pair;
}

}  // namespace

int Grid::size() const {
    validate_grid(*this);
    int total = 1;
    for (int axis = 0; axis < dim; ++axis) total *= points_per_axis;
    return total;
}

ConformalMetric::ConformalMetric(Grid grid, std::vector<double> f)
    : grid_(grid), f_(std::move(f)) {
    validate_grid(grid_);
    if (static_cast<int>(f_.size()) != grid_.size()) {
        throw std::invalid_argument("conformal factor length must match the grid");
    }
    for (double value : f_) {
        if (!std::isfinite(value)) {
            throw std::invalid_argument("conformal factor must be finite");
        }
    }
}

ConformalMetric ConformalMetric::flat(Grid grid) {
    validate_grid(grid);
    return ConformalMetric(grid, std::vector<double>(grid.size(), 0.0));
}

bool ConformalMetric::has_constant_f() const {
    const auto [lo, hi] = std::minmax_element(f_.begin(), f_.end());
    return *hi - *lo < 1e-14;
}

double ConformalMetric::volume() const {
    const double cell = std::pow(grid_.spacing(), grid_.dim);
    double total = 0.0;
    for (double value : f_) total += std::exp(grid_.dim * value);
    return total * cell;
}

std::vector<double> ConformalMetric::scalar_curvature() const {
    const int m = grid_.size();
    std::vector<double> r(m, 0.0);
    if (grid_.dim == 1) return r;
    const double inv_h2 = 1.0 / (grid_.spacing() * grid_.spacing());
    for (int i = 0; i < m; ++i) {
        double lap = 0.0;
        for (int axis = 0; axis < grid_.dim; ++axis) {
            lap += (f_[neighbor(grid_, i, axis, 1)] + f_[neighbor(grid_, i, axis, -1)] -
                    2.0 * f_[i]) *
                   inv_h2;
        }
        r[i] = -2.0 * std::exp(-2.0 * f_[i]) * lap;
    }
    return r;
}

Density::Density(double w, std::vector<double> v, ConformalMetric m)
    : weight(w), values(std::move(v)), metric(std::move(m)) {
    if (static_cast<int>(values.size()) != metric.grid().size()) {
        throw std::invalid_argument("density values must match the metric grid");
    }
}

double density_norm(const Density& phi) {
    const Grid& grid = phi.metric.grid();
    const int n = grid.dim;
    if (phi.weight < 0.0) {
        throw std::domain_error("density norm needs a non-negative weight");
    }
    if (phi.weight == 0.0) {
        double sup = 0.0;
        for (double value : phi.values) sup = std::max(sup, std::abs(value));
        return sup;
    }
    if (phi.weight > n + 1e-12) {
        throw std::domain_error("density norm needs weight <= dimension");
    }
    const double p = n / phi.weight;
    const double cell = std::pow(grid.spacing(), n);
    const auto& f = phi.metric.f();
    double total = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        total += std::pow(std::abs(phi.values[i]), p) * std::exp(n * f[i]);
    }
    return std::pow(total * cell, 1.0 / p);
}

double inner_product(const Density& a, const Density& b) {
    const Grid& grid = a.metric.grid();
    const int n = grid.dim;
    if (b.metric.grid().dim != n || b.metric.grid().points_per_axis != grid.points_per_axis) {
        throw std::invalid_argument("densities live on different grids");
    }
    const double half = 0.5 * n;
    if (std::abs(a.weight - half) > 1e-12 || std::abs(b.weight - half) > 1e-12) {
        throw std::domain_error("inner product needs two weight-n/2 densities");
    }
    // product of two weight-n/2 densities is a 1-density: integrate the
    // coefficients against sqrt(det) of each reference metric
    const auto& fa = a.metric.f();
    const auto& fb = b.metric.f();
    const double cell = std::pow(grid.spacing(), n);
    double total = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        total += a.values[i] * b.values[i] * std::exp(half * (fa[i] + fb[i]));
    }
    return total * cell;
}

Density change_weight(const Density& phi, double new_weight) {
    const int n = phi.metric.grid().dim;
    std::vector<double> scaled = phi.values;
    const auto& f = phi.metric.f();
    const double delta = new_weight - phi.weight;
    for (int i = 0; i < static_cast<int>(scaled.size()); ++i) {
        scaled[i] *= std::exp(delta * f[i]);  // |g|^{delta/2n} = e^{delta f}
    }
    (void)n;
    return Density(new_weight, std::move(scaled), phi.metric);
}

Density retrivialize(const Density& phi, const ConformalMetric& target) {
    const Grid& grid = phi.metric.grid();
    if (target.grid().dim != grid.dim ||
        target.grid().points_per_axis != grid.points_per_axis) {
        throw std::invalid_argument("target metric lives on a different grid");
    }
    std::vector<double> scaled = phi.values;
    const auto& f_old = phi.metric.f();
    const auto& f_new = target.f();
    for (int i = 0; i < static_cast<int>(scaled.size()); ++i) {
        scaled[i] *= std::exp(phi.weight * (f_old[i] - f_new[i]));
    }
    return Density(phi.weight, std::move(scaled), target);
}

Density density_product(const Density& a, const Density& b) {
    const Density aligned = retrivialize(b, a.metric);
    std::vector<double> values = a.values;
    for (int i = 0; i < static_cast<int>(values.size()); ++i) values[i] *= aligned.values[i];
    return Density(a.weight + b.weight, std::move(values), a.metric);
}

Eigen::MatrixXd conformal_laplacian(const ConformalMetric& gm) {
    const Grid& grid = gm.grid();
    if (grid.dim < 2) {
        throw std::domain_error("conformally corrected laplacian needs dimension >= 2");
    }
    const int n = grid.dim;
    const int m = grid.size();
    Eigen::MatrixXd k = flux_matrix(gm);
    // conjugate the flux stencil into the volume-orthonormal frame so the
    // representative stays exactly symmetric for non-constant factors
    const auto& f = gm.f();
    Eigen::VectorXd dinv(m);
    for (int i = 0; i < m; ++i) dinv(i) = std::exp(-0.5 * n * f[i]);
    Eigen::MatrixXd a = dinv.asDiagonal() * k * dinv.asDiagonal();
    const double coupling = 0.25 * (n - 2) / double(n - 1);
    if (coupling != 0.0) {
        const std::vector<double> r = gm.scalar_curvature();
        for (int i = 0; i < m; ++i) a(i, i) -= coupling * r[i];
    }
    check_and_symmetrize(a);
    return a;
}

double yamabe_pairing(const Density& phi, const ConformalMetric& gm) {
    const Grid& grid = gm.grid();
    if (grid.dim < 2) {
        throw std::domain_error("yamabe pairing needs dimension >= 2");
    }
    if (phi.metric.grid().dim != grid.dim ||
        phi.metric.grid().points_per_axis != grid.points_per_axis) {
        throw std::invalid_argument("density lives on a different grid");
    }
    const int n = grid.dim;
    const double expected_weight = 0.5 * (n - 2);
    if (std::abs(phi.weight - expected_weight) > 1e-12) {
        throw std::domain_error("yamabe pairing needs a weight-(n-2)/2 density");
    }
    const auto& f = gm.f();
    const auto& v = phi.values;
    const double h = grid.spacing();
    const double cell = std::pow(h, n);
    const double exponent = n - 2;
    // gradient part in flux form: sum of midpoint-weighted squared differences
    double gradient = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        for (int axis = 0; axis < n; ++axis) {
            const int plus = neighbor(grid, i, axis, 1);
            const double diff = (v[plus] - v[i]) / h;
            gradient += std::exp(exponent * 0.5 * (f[i] + f[plus])) * diff * diff;
        }
    }
    double curvature = 0.0;
    const double coupling = 0.25 * (n - 2) / double(n - 1);
    if (coupling != 0.0) {
        const std::vector<double> r = gm.scalar_curvature();
        for (int i = 0; i < grid.size(); ++i) {
            curvature += coupling * r[i] * v[i] * v[i] * std::exp(n * f[i]);
        }
    }
    return (gradient + curvature) * cell;
}

Eigen::MatrixXd y_operator(const ConformalMetric& gm, double m) {
    if (m < 0.0) throw std::domain_error("mass must be non-negative");
    if (m == 0.0) {
        throw spectrum_error("constant mode is retained, so a massless operator is not positive");
    }
    const Grid& grid = gm.grid();
    const int size = grid.size();
    Eigen::MatrixXd core = -conformal_laplacian(gm);
    core += (m * m) * Eigen::MatrixXd::Identity(size, size);
    const auto& f = gm.f();
    Eigen::VectorXd uinv(size);
    for (int i = 0; i < size; ++i) uinv(i) = std::exp(-f[i]);
    Eigen::MatrixXd y = uinv.asDiagonal() * core * uinv.asDiagonal();
    check_and_symmetrize(y);
    return y;
}

Eigen::MatrixXcd y_tilde(const ConformalMetric& gm, double m, Complex z) {
    const Eigen::MatrixXd y = y_operator(gm, m);
    const EigenPair pair = positive_eigensystem(y, "operator is not positive definite");
    const int size = y.rows();
    Eigen::VectorXcd powers(size);
    for (int i = 0; i < size; ++i) {
        powers(i) = std::exp((1.0 + z) * std::log(pair.values(i)));
    }
    Eigen::MatrixXcd fractional =
        pair.vectors.cast<Complex>() * powers.asDiagonal() * pair.vectors.transpose().cast<Complex>();
    const auto& f = gm.f();
    Eigen::VectorXcd u(size);
    for (int i = 0; i < size; ++i) u(i) = std::exp(f[i]);
    return u.asDiagonal() * fractional * u.asDiagonal();
}

std::vector<Eigen::MatrixXd> y_tilde_series(const ConformalMetric& gm, double m, int order) {
    if (order < 0) throw std::domain_error("series order must be non-negative");
    if (order > 16) throw capability_error("series order capped at 16");
    const Eigen::MatrixXd y = y_operator(gm, m);
    const EigenPair pair = positive_eigensystem(y, "operator is not positive definite");
    const int size = y.rows();
    const auto& f = gm.f();
    Eigen::VectorXd u(size);
    for (int i = 0; i < size; ++i) u(i) = std::exp(f[i]);
    std::vector<Eigen::MatrixXd> coefficients;
    coefficients.reserve(order + 1);
    Eigen::VectorXd term = pair.values;  // lambda * (log lambda)^j / j!
    for (int j = 0; j <= order; ++j) {
        Eigen::MatrixXd layer = pair.vectors * term.asDiagonal() * pair.vectors.transpose();
        coefficients.push_back(u.asDiagonal() * layer * u.asDiagonal());
        for (int i = 0; i < size; ++i) {
            term(i) *= std::log(pair.values(i)) / double(j + 1);
        }
    }
    return coefficients;
}

ExpansionCheckReport conformal_expansion_check(const ConformalMetric& base,
                                               const std::vector<double>& f, Complex z,
                                               double m) {
    const Grid& grid = base.grid();
    const int size = grid.size();
    if (static_cast<int>(f.size()) != size) {
        throw std::invalid_argument("conformal factor length must match the grid");
    }
    const Eigen::MatrixXd y = y_operator(base, m);

    Eigen::VectorXd u(size), uinv(size);
    for (int i = 0; i < size; ++i) {
        u(i) = std::exp(f[i]);
        uinv(i) = std::exp(-f[i]);
    }
    Eigen::MatrixXd conjugated = uinv.asDiagonal() * y * uinv.asDiagonal();
    check_and_symmetrize(conjugated);
    const EigenPair rescaled =
        positive_eigensystem(conjugated, "rescaled operator is not positive definite");
    const EigenPair plain = positive_eigensystem(y, "operator is not positive definite");

    const auto power = [&](const EigenPair& pair) {
        Eigen::VectorXcd powers(size);
        for (int i = 0; i < size; ++i) {
            powers(i) = std::exp((1.0 + z) * std::log(pair.values(i)));
        }
        return Eigen::MatrixXcd(pair.vectors.cast<Complex>() * powers.asDiagonal() *
                                pair.vectors.transpose().cast<Complex>());
    };

    const auto& f0 = base.f();
    Eigen::VectorXcd outer(size);
    for (int i = 0; i < size; ++i) outer(i) = std::exp(f0[i]);

    Eigen::MatrixXcd lhs = outer.asDiagonal() *
                           (u.asDiagonal() * power(rescaled) * u.asDiagonal()) *
                           outer.asDiagonal();

    Eigen::VectorXcd multiplier(size);
    for (int i = 0; i < size; ++i) multiplier(i) = std::exp(-2.0 * f[i] * z);
    Eigen::MatrixXcd rhs = multiplier.asDiagonal() *
                           (outer.asDiagonal() * power(plain) * outer.asDiagonal());

    ExpansionCheckReport report;
    report.grid_points = size;
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    report.f_constant = (*hi - *lo) < 1e-14;
    report.rhs_norm = spectral_norm(rhs);
    report.lhs_norm = spectral_norm(lhs);
    const double gap = spectral_norm(lhs - rhs);
    report.relative_deviation = gap / std::max(report.rhs_norm, 1e-300);
    return report;
}

}  // namespace hopfren
