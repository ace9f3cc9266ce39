#pragma once

#include "powerwall/types.hpp"

namespace powerwall {

// Exact reference kernels (hbar = 1, m = 1/2).
Complex k_free(double x, double y, double t);
Complex k_harmonic(double x, double y, double t, double omega);
Complex k_linear(double x, double y, double t, double k);

// Maslov-phased sum over classical paths. Classically forbidden inputs give 0.
PropagatorValue k_scl(const BoundaryProblem& bp, const Potential& p);

// One semiclassical term: (2 pi i)^{-1/2} |A^2|^{1/2} (-i)^maslov e^{iS}.
Complex scl_term_value(const SclTerm& term);

}  // namespace powerwall
