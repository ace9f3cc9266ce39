#pragma once

#include <functional>
#include <vector>

#include "powerwall/types.hpp"

namespace powerwall {

struct ShootResult {
    double x_final = 0.0;
    double v_final = 0.0;
    double action = 0.0;
    std::vector<double> crossings;  // axis-crossing times, bisection-refined
};

// RK4 forward integration of q'' = -2 V'(q) from (y, v0) with the action
// accumulated alongside (L = v^2/4 - V).
ShootResult shoot(const Potential& p, double y, double v0, double t, double dt);

// Central-difference evaluation of [-d2/dx2 + V - i d/dt] applied to a kernel.
Complex pde_residual(const std::function<Complex(double, double)>& kernel,
                     const Potential& p, double x, double t, double h);

// Uniform grid sample of a wavefunction on [x0, x0 + dx*(n-1)].
struct SampledFunction {
    double x0 = 0.0;
    double dx = 0.0;
    std::vector<Complex> values;

    double grid_x(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
    double l2_norm() const;
};

// Crank-Nicolson evolution in a reflecting box; throws std::runtime_error on
// box-edge contamination (|psi| > 1e-6 at either edge).
SampledFunction crank_nicolson(const Potential& p, const SampledFunction& psi0,
                               double t, double dt);

// Same stepper with an arbitrary potential sample (sanity variants).
SampledFunction crank_nicolson_potential(const std::vector<double>& v,
                                         const SampledFunction& psi0,
                                         double t, double dt);

}  // namespace powerwall
