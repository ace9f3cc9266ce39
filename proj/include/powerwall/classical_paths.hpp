#pragma once

#include <vector>

#include "powerwall/types.hpp"

namespace powerwall {

// Quadratic-wall type-C root analysis in scaled variables.
// rho = -y/x, T = omega*t; roots are Omega = omega*(t-t1) in (0,pi) of
// f(Omega) = rho sin(Omega) + Omega - T.
struct RootAnalysisQuadC {
    double rho = 0.0;
    double T = 0.0;
    std::optional<double> Tstar;  // tangency threshold, present iff rho >= 1
    std::vector<double> omegas;   // 0, 1 or 2 roots
};

// Linear-wall type-C cubic analysis: monic cubic t1^3 + a2 t1^2 + a1 t1 + a0.
struct CubicAnalysisLinC {
    double a2 = 0.0, a1 = 0.0, a0 = 0.0;
    double Qc = 0.0, Rc = 0.0;
    double D = 0.0;              // discriminant R^2 + Q^3
    double s = 0.0;              // s = 8x + y
    std::vector<double> roots;   // physical t1 roots in (0, t)
};

ClassicalPath solve_type_A(const BoundaryProblem& bp);
std::optional<ClassicalPath> solve_type_B(const BoundaryProblem& bp, const Potential& p);
ClassicalPath solve_type_B_special(double omega, double v);
std::vector<ClassicalPath> solve_type_E(const BoundaryProblem& bp, const Potential& p);

RootAnalysisQuadC analyze_type_C_quadratic(const BoundaryProblem& bp, double omega);
RootAnalysisQuadC analyze_master_equation(double rho, double T);

CubicAnalysisLinC analyze_type_C_linear(const BoundaryProblem& bp, double k);

std::vector<ClassicalPath> solve_type_C(const BoundaryProblem& bp, const Potential& p);
std::vector<ClassicalPath> solve_type_D(const BoundaryProblem& bp, const Potential& p);

std::vector<ClassicalPath> enumerate_paths(const BoundaryProblem& bp, const Potential& p);

// Piecewise evaluation of the solved trajectory.
double path_position(const ClassicalPath& path, const Potential& p, double tau);
double path_velocity(const ClassicalPath& path, const Potential& p, double tau);

// Real roots of the monic cubic z^3 + a2 z^2 + a1 z + a0, Viete form when the
// discriminant is non-positive, Cardano otherwise, all Newton-polished.
std::vector<double> solve_monic_cubic(double a2, double a1, double a0);

}  // namespace powerwall
