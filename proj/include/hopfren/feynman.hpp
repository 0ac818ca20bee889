#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hopfren/character.hpp"
#include "hopfren/graph.hpp"
#include "hopfren/hopf.hpp"
#include "hopfren/laurent.hpp"
#include "hopfren/spectral.hpp"

namespace hopfren {

// External-leg data: one entry per leg (ordered by leg index), each either a
// backend mode index or the constant function 1.
struct ExternalData {
    struct Leg {
        bool is_constant = true;
        std::size_t mode_index = 0;
    };
    std::vector<Leg> legs;

    static ExternalData constants(int count);
    static ExternalData from_modes(const std::vector<std::size_t>& indices);
    bool all_constant() const;
};

struct EvalOptions {
    double coupling = 1.0;
    // The combinatorial 1/|Aut| weight is kept separate from the raw mode sum
    // by default so values match the bare lattice formulas; enable to fold it in.
    bool apply_symmetry_factor = false;
    bool verify_cutoff = false;       // for pair(): re-evaluate at doubled cutoff
    double cutoff_tolerance = 1e-2;   // relative stability bound under doubling
};

struct FeynmanEvaluation {
    std::string label;
    LaurentSeries series{LaurentSeries::zero()};
    int cutoff = 0;                         // per-axis cutoff of the reported sums
    std::vector<Complex> coeff_at_cutoff;   // window coefficients at the cutoff
    std::vector<Complex> coeff_at_double;   // and at twice the cutoff
    double cutoff_shift = 0.0;              // max relative coefficient movement
    bool exact_continuation = false;        // polar data from the trace continuation
};

// Regularized value of the graph's mode sum at parameter z: product of
// propagator weights lambda^{-(1+z)} over internal edges, momentum conservation
// at every internal vertex, volume normalization from the vertex integrals,
// coupling^(internal vertices), optional symmetry weight.
Complex pair(const FeynmanGraph& g, const SpectralBackend& b, const ExternalData& ext,
             Complex z, const EvalOptions& opts = {});

// Laurent window [-loops(effective), order] of the pairing at z = 0 for
// constant external data: trees are constant, divergent one-loop graphs are
// continued exactly through the spectral trace, convergent graphs are summed
// directly with log-weight coefficients and cutoff-doubling diagnostics.
FeynmanEvaluation laurent_expansion(const FeynmanGraph& g, const SpectralBackend& b,
                                    const ExternalData& ext, int order,
                                    const EvalOptions& opts = {});

// the character assigning each universe generator its expansion with
// zero-momentum (constant) external data
Character character_from_rules(const SpectralBackend& b, const std::vector<std::string>& universe,
                               GraphCatalog& catalog, int order = LaurentSeries::kDefaultOrder,
                               const EvalOptions& opts = {});

}  // namespace hopfren
