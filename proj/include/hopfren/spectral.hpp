#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hopfren/laurent.hpp"

namespace hopfren {

enum class ManifoldKind { circle, torus };

// One eigenmode of A = -laplacian + m^2.  On the circle `k` holds the single
// frequency j and `trig` distinguishes constant/cosine/sine; on the torus `k`
// is the integer lattice vector of the exponential mode.
struct Mode {
    std::vector<int> k;
    int trig = 0;  // 0 constant/exponential, 1 cosine, 2 sine
    double lambda = 0.0;
};

// Eigen-data provider for the compact flat model geometries.  Modes are
// materialized sorted by (eigenvalue, lattice vector, trig) so reductions are
// reproducible; construction refuses mode lists that would not fit in memory.
class SpectralBackend {
  public:
    static SpectralBackend circle(double radius, double mass, int cutoff);
    static SpectralBackend torus(std::vector<double> periods, double mass, int cutoff);

    ManifoldKind kind() const { return kind_; }
    int dimension() const { return dim_; }
    double mass() const { return mass_; }
    int cutoff() const { return cutoff_; }
    double volume() const { return volume_; }
    double radius() const { return radius_; }
    // circle backends report the equivalent single period 2*pi*radius
    const std::vector<double>& periods() const { return periods_; }
    bool zero_mode_dropped() const { return drop_zero_; }

    std::size_t mode_count() const { return modes_.size(); }
    const Mode& mode(std::size_t i) const;
    double eigenvalue(std::size_t i) const { return mode(i).lambda; }
    double min_eigenvalue() const;
    Complex basis(std::size_t i, const std::vector<double>& x) const;

  private:
    SpectralBackend() = default;

    ManifoldKind kind_ = ManifoldKind::circle;
    int dim_ = 1;
    std::vector<double> periods_;
    double radius_ = 0.0;
    double mass_ = 0.0;
    int cutoff_ = 0;
    double volume_ = 0.0;
    bool drop_zero_ = false;
    std::vector<Mode> modes_;
};

struct GreenDiagnostics {
    Complex partial_half = 0.0;   // sum over the lower-eigenvalue half of the modes
    Complex partial_full = 0.0;   // full truncated sum
    double tail_growth = 0.0;     // |partial_full - partial_half|
    bool converged = true;
    std::size_t modes_used = 0;
};

// truncated mode sum for the kernel of A^{-(1+z)}; fills `diag` (when given)
// with cutoff-growth data, flagging non-convergence instead of throwing
Complex green_function(const SpectralBackend& b, Complex z, const std::vector<double>& x,
                       const std::vector<double>& y, GreenDiagnostics* diag = nullptr);

// Tr A^{-s} by Mellin split at t = 1: the small-t half is continued
// analytically through the flat heat expansion, the large-t half integrated
// with exponentially convergent theta sums.  Valid at any s off the pole set.
Complex zeta_trace(const SpectralBackend& b, Complex s);

// Laurent window [-1, order] of the trace at s0, computed by contour
// integration on a small circle; exact pole bookkeeping decides whether a
// residue term is present.
LaurentSeries zeta_trace_expansion(const SpectralBackend& b, Complex s0, int order);

// true when s0 sits on a trace pole (simple poles at s = n/2 - k, k >= 0,
// except where the 1/Gamma zero cancels them)
bool zeta_trace_has_pole(const SpectralBackend& b, Complex s0);
// residue prefactor data: the pole at s = n/2 - k carries residue
// V (4pi)^{-n/2} (-m^2)^k / (k! Gamma(n/2 - k))
Complex zeta_trace_residue(const SpectralBackend& b, Complex s0);

// small-t expansion coefficients of the massless heat trace with the
// (4 pi t)^{-n/2} prefactor convention: {volume, 0, 0, ...} on flat backends
std::vector<double> heat_kernel_expansion(const SpectralBackend& b, int count);

// integral of three basis functions; exact lattice selection rule on the torus,
// aliasing-free trapezoid quadrature on the circle
Complex momentum_tensor(const SpectralBackend& b, std::size_t i, std::size_t j, std::size_t k);

// max_{i,j < limit} |<phi_i, phi_j> - delta_ij| via quadrature
double orthonormality_residual(const SpectralBackend& b, std::size_t limit = 48);

// gamma function for complex argument (Lanczos approximation with reflection)
Complex complex_gamma(Complex z);

}  // namespace hopfren
