#pragma once

#include "powerwall/types.hpp"

namespace powerwall {

// Caustic denominator for a C/D/E path; A^2 is singular where it vanishes.
struct CausticProbe {
    double denom = 0.0;
    bool on_caustic = false;
};

double action(const ClassicalPath& path, const Potential& p);

// Signed A^2 = -d2S/dxdy plus the Maslov count inferred from its sign.
// Throws CausticSingular when the caustic denominator is below tolerance.
std::pair<double, int> amplitude_sq(const ClassicalPath& path, const Potential& p);

// dA/A entering the Q kernel (second x-derivative of |A| over |A|).
double residual(const ClassicalPath& path, const Potential& p);

CausticProbe caustic_probe(const ClassicalPath& path, const Potential& p);

SclTerm scl_term(const ClassicalPath& path, const Potential& p);

double caustic_tolerance(const BoundaryProblem& bp);

}  // namespace powerwall
