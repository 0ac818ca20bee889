#pragma once

#include <map>
#include <string>
#include <vector>

#include "hopfren/character.hpp"
#include "hopfren/hopf.hpp"
#include "hopfren/laurent.hpp"

namespace hopfren {

// Scale action of the renormalization flow on a character: each generator is
// multiplied by exp(z * loops * ln t) to truncation order, so a scaled
// character is determined by (base, t) with scale(1) the identity and
// scale(t1) after scale(t2) equal to scale(t1*t2).
Character scale(const Character& gamma, double t, const GraphCatalog& catalog);

struct LocalityReport {
    bool pass = true;
    double tolerance = 0.0;
    double worst_deviation = 0.0;
    std::map<std::string, double> deviation;  // per-generator max over samples
};

// Counterterm scale-independence audit: rerun the subtraction recursion on the
// scaled character at each sample and compare its polar factor, generator by
// generator, with the unscaled one.
LocalityReport check_locality(const Character& gamma, const std::vector<double>& t_samples,
                              GraphCatalog& catalog, double tolerance = 1e-9);

// Flow coefficient per generator: the d/d(ln t) at t = 1 of the z^0 coefficient
// of star_inverse(gamma) * scale(gamma, t), read off from its exact polynomial
// dependence on ln t (interpolated at loop_count + 1 integer log-scales).
// Throws locality_error when the counterterms are scale-dependent.
std::map<std::string, Complex> beta(const Character& gamma, GraphCatalog& catalog,
                                    double locality_tolerance = 1e-9);

struct BetaTableEntry {
    std::string theory;
    std::string coupling;
    std::string one_loop_value;
    std::string note;
};

// Literature one-loop flow values for reference output (documented values, not
// computed claims).  Tag "all" returns the whole table; unknown tags throw.
std::vector<BetaTableEntry> physics_beta_report(const std::string& tag);

}  // namespace hopfren
