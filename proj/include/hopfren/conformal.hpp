#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hopfren/laurent.hpp"

namespace hopfren {

// Uniform periodic grid on the unit 1- or 2-torus.
struct Grid {
    int dim = 2;
    int points_per_axis = 32;

    int size() const;
    double spacing() const { return 1.0 / points_per_axis; }
};

// Conformally flat metric g = e^{2f} delta on a periodic grid.
class ConformalMetric {
  public:
    ConformalMetric(Grid grid, std::vector<double> f);
    static ConformalMetric flat(Grid grid);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& f() const { return f_; }
    bool has_constant_f() const;
    double volume() const;  // integral of e^{n f}

    // n = 2: R = -2 e^{-2f} (flat laplacian of f); identically zero for n = 1
    std::vector<double> scalar_curvature() const;

  private:
    Grid grid_;
    std::vector<double> f_;
};

// Trivialized conformal density: abstract section phi = values * |g|^{weight/2n}
// relative to the carried reference metric.
struct Density {
    double weight = 0.0;
    std::vector<double> values;
    ConformalMetric metric;

    Density(double w, std::vector<double> v, ConformalMetric m);
};

// (integral of |phi|^{n/r} dvol)^{r/n}; weight 0 uses the sup norm
double density_norm(const Density& phi);

// metric-free pairing of two weight-n/2 densities: integral of the product
double inner_product(const Density& a, const Density& b);

// same abstract density expressed at a new weight: coefficient times
// |g|^{(new-old)/2n}
Density change_weight(const Density& phi, double new_weight);

// same abstract density re-expressed relative to another conformal metric on
// the same grid
Density retrivialize(const Density& phi, const ConformalMetric& target);

// pointwise product: weights add, coefficients multiply (b is re-expressed
// relative to a's metric first)
Density density_product(const Density& a, const Density& b);

// Symmetric grid representative of the conformally corrected laplacian
// Delta_g - (n-2)/(4(n-1)) R: flux-form second-order stencil conjugated into
// the volume-orthonormal frame.  Rejects n = 1 (the correction factor needs
// n >= 2).
Eigen::MatrixXd conformal_laplacian(const ConformalMetric& gm);

// integral of phi (-Delta_g + (n-2)/(4(n-1)) R) phi dvol(g) for a
// weight-(n-2)/2 density, evaluated matrix-free in flux form
double yamabe_pairing(const Density& phi, const ConformalMetric& gm);

// symmetric positive operator e^{-f} (-Delta_corrected + m^2) e^{-f} on
// weight-n/2 coefficients; requires m > 0 so the retained constant mode stays
// off zero
Eigen::MatrixXd y_operator(const ConformalMetric& gm, double m);

// |g|^{1/2n} Y^{1+z} |g|^{1/2n} through the spectral decomposition of Y
Eigen::MatrixXcd y_tilde(const ConformalMetric& gm, double m, Complex z);

// coefficients of the z-power series of y_tilde around z = 0
std::vector<Eigen::MatrixXd> y_tilde_series(const ConformalMetric& gm, double m, int order);

struct ExpansionCheckReport {
    double relative_deviation = 0.0;  // spectral-norm distance over the target norm
    double lhs_norm = 0.0;
    double rhs_norm = 0.0;
    bool f_constant = false;
    int grid_points = 0;
};

// Compares the conformally rescaled operator built from first principles,
// |g|^{1/2n} u ((u^{-1} Y u^{-1})^{1+z}) u |g|^{1/2n} with u = e^{f}, against
// the pointwise-multiplier form e^{-2 f z} applied to the unrescaled operator.
// Constant f must agree to round-off; non-constant f reports the measured gap.
ExpansionCheckReport conformal_expansion_check(const ConformalMetric& base,
                                               const std::vector<double>& f, Complex z,
                                               double m);

}  // namespace hopfren
