#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Core domain types for the power-wall semiclassical propagator.
// Conventions fixed throughout: hbar = 1, m = 1/2.

namespace powerwall {

using Complex = std::complex<double>;

inline constexpr double kMass = 0.5;
inline constexpr double kPi = 3.14159265358979323846;

struct CausticSingular : std::runtime_error {
    explicit CausticSingular(const std::string& what) : std::runtime_error(what) {}
};

enum class WallKind { QuadraticWall, LinearWall };

// V(x) = 0 for x<0; omega^2 x^2/4 (quadratic) or k x (linear) for x>=0.
struct Potential {
    WallKind kind;
    double omega = 0.0;  // quadratic wall only
    double k = 0.0;      // linear wall only

    static Potential quadratic(double omega) {
        if (!(omega > 0.0)) throw std::invalid_argument("quadratic wall requires omega > 0");
        return Potential{WallKind::QuadraticWall, omega, 0.0};
    }
    static Potential linear(double k) {
        if (!(k > 0.0)) throw std::invalid_argument("linear wall requires k > 0");
        return Potential{WallKind::LinearWall, 0.0, k};
    }
};

inline double potential_eval(const Potential& p, double x) {
    if (x < 0.0) return 0.0;
    return p.kind == WallKind::QuadraticWall ? 0.25 * p.omega * p.omega * x * x : p.k * x;
}

// One-sided slope; at x=0 the right limit is used only when explicitly asked for.
inline double potential_slope(const Potential& p, double x) {
    if (x < 0.0) return 0.0;
    return p.kind == WallKind::QuadraticWall ? 0.5 * p.omega * p.omega * x : p.k;
}

// Two-point boundary data: q(0)=y, q(t)=x.
struct BoundaryProblem {
    double y;
    double x;
    double t;

    BoundaryProblem(double y_, double x_, double t_) : y(y_), x(x_), t(t_) {
        if (!(t > 0.0)) throw std::invalid_argument("BoundaryProblem requires t > 0");
    }
};

enum class PathType { A, B, C, D, E, BSpecial };

inline const char* path_type_name(PathType pt) {
    switch (pt) {
        case PathType::A: return "A";
        case PathType::B: return "B";
        case PathType::C: return "C";
        case PathType::D: return "D";
        case PathType::E: return "E";
        case PathType::BSpecial: return "Bs";
    }
    return "?";
}

// A solved classical trajectory. interior_coeffs hold the parameters of the
// in-potential segment (cos/sin coefficients for the quadratic wall, the
// parabola's linear/constant coefficients for the linear wall, v for BSpecial).
struct ClassicalPath {
    PathType path_type;
    BoundaryProblem problem;
    std::optional<double> t1;  // first axis crossing
    std::optional<double> t2;  // second axis crossing (type E)
    std::vector<double> interior_coeffs;
};

// Per-path semiclassical data.
struct SclTerm {
    double S = 0.0;        // classical action
    double A2 = 0.0;       // signed -d2S/dxdy
    int maslov = 0;        // count of -i factors
    double residual = 0.0; // dA/A (Laplacian of amplitude over amplitude)
};

struct PropagatorValue {
    Complex value{0.0, 0.0};
    std::vector<std::pair<PathType, Complex>> terms;
};

}  // namespace powerwall
