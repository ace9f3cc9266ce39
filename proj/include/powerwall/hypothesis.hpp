#pragma once

#include <array>
#include <functional>
#include <vector>

#include "powerwall/types.hpp"

namespace powerwall {

struct Window {
    double y_lo, y_hi;
    double x_lo, x_hi;
    double t_lo, t_hi;
};

struct OpnormEstimate {
    double t = 0.0;
    double tau = 0.0;
    double norm = 0.0;
};

struct HypothesisReport {
    Window window{};
    double sup_residual = 0.0;
    bool sup_divergent = false;             // refinement-divergent (caustic pole)
    std::vector<std::array<double, 3>> caustic_hits;  // (y, x, t) nodes flagged singular
    std::vector<OpnormEstimate> opnorm_estimates;
    bool verdict_i = false;
    bool verdict_ii = false;
};

// Grid scan of sup |dA/A| over all paths; refines 2x twice and flags
// divergence when the sup grows by more than 4x at each refinement.
HypothesisReport scan_residual(const Potential& p, const Window& window, int n);

// Largest singular value of the trapezoid-weighted kernel matrix
// M_ij = K(x_i, t; y_j, tau) sqrt(w_i w_j) on [x_lo, x_hi]^2.
double estimate_opnorm(const Potential& p, double t, double tau,
                       double x_lo, double x_hi, int n);

// Same estimator for an arbitrary kernel slice K(x, y).
double estimate_opnorm_kernel(const std::function<Complex(double, double)>& kernel,
                              double x_lo, double x_hi, int n);

}  // namespace powerwall
