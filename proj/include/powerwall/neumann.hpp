#pragma once

#include <array>
#include <functional>
#include <vector>

#include "powerwall/types.hpp"

namespace powerwall {

// C-x-D concatenation multiplicity for the quadratic wall: number of paths
// y -> q in time tau times number of paths q -> x in time t - tau.
int classify_domain(const Potential& p, const BoundaryProblem& bp, double q, double tau);

struct ConcatenationDomain {
    Potential p;
    BoundaryProblem bp;

    int count(double q, double tau) const { return classify_domain(p, bp, q, tau); }
};

// Q(x,t;y,tau) = hbar^2 sum_paths (dA/A) * term value, hbar = 1.
Complex q_kernel(const Potential& p, double x, double t, double y, double tau);

struct QuadratureSpec {
    int space_points = 31;     // trapezoid nodes per spatial integral
    int time_points = 8;       // Gauss-Legendre nodes per time panel
    int time_panels = 2;
    double y_lo = -4.0, y_hi = 0.0;    // support of phi
    double x1_lo = 0.0, x1_hi = 4.0;   // joint location range
    double guard = 1e-2;               // caustic guard half-width in denom units
};

struct FirstOrderResult {
    Complex value{0.0, 0.0};
    long guard_skips = 0;      // path contributions excised by the guard band
    std::vector<std::array<double, 4>> guarded;  // (x1, t1, y, tau) samples skipped
};

// Numerical K_scl Q phi at a single endpoint.
FirstOrderResult first_order_term(const Potential& p, double x, double t,
                                  const std::function<Complex(double, double)>& phi,
                                  const QuadratureSpec& quad);

// Same with the inner double integral shared across all endpoints.
std::vector<FirstOrderResult> first_order_term_grid(
    const Potential& p, const std::vector<double>& xs, double t,
    const std::function<Complex(double, double)>& phi, const QuadratureSpec& quad);

// Gauss-Legendre nodes/weights on [a, b] (Newton on Legendre polynomials).
void gauss_legendre(int n, double a, double b,
                    std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace powerwall
