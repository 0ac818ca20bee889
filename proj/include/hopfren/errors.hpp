#pragma once

#include <stdexcept>
#include <string>

namespace hopfren {

// Structural precondition broken on a value object (bad valence, dangling edge id,
// malformed JSON shape, ...). Maps to CLI exit code 64 when caused by user input.
struct invariant_violation : std::runtime_error {
    explicit invariant_violation(const std::string& what) : std::runtime_error(what) {}
};

// A requested computation exceeds a configured bound (loop order, cutoff, grid size).
// Maps to CLI exit code 2.
struct resource_limit_error : std::runtime_error {
    explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed to reach its tolerance (cutoff instability, fit residual).
// Maps to CLI exit code 1.
struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation of a series at z = 0 hit a pole; carries the offending pole order.
struct pole_error : std::runtime_error {
    int order;
    pole_error(const std::string& what, int pole_order)
        : std::runtime_error(what), order(pole_order) {}
};

// A generator label was used that the catalog has never seen.
struct unknown_generator_error : std::runtime_error {
    std::string label;
    explicit unknown_generator_error(const std::string& lbl)
        : std::runtime_error("unknown generator label: " + lbl), label(lbl) {}
};

// The supplied generator universe is not closed under the coproduct.
struct incomplete_universe_error : std::runtime_error {
    std::string missing_label;
    explicit incomplete_universe_error(const std::string& lbl)
        : std::runtime_error("universe is not closed: missing generator " + lbl),
          missing_label(lbl) {}
};

// Operation is defined by the contract but not supported for the given inputs
// (wrong backend family, subtraction depth beyond what the evaluator provides, ...).
struct capability_error : std::runtime_error {
    explicit capability_error(const std::string& what) : std::runtime_error(what) {}
};

// Character fails the renormalization-group locality requirement.
struct locality_error : std::runtime_error {
    double deviation;
    locality_error(const std::string& what, double dev)
        : std::runtime_error(what), deviation(dev) {}
};

// Operator spectrum violates a positivity requirement.
struct spectrum_error : std::runtime_error {
    explicit spectrum_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hopfren
