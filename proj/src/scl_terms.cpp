#include "powerwall/scl_terms.hpp"

#include <cmath>

#include "powerwall/classical_paths.hpp"

namespace powerwall {

namespace {

constexpr double kCausticTol = 1e-8;

// Second-order jet (value, d/dx, d2/dx2) for exact implicit differentiation.
struct Jet {
    double v = 0.0, d1 = 0.0, d2 = 0.0;
};
Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
Jet operator*(double c, Jet a) { return {c * a.v, c * a.d1, c * a.d2}; }
Jet operator+(Jet a, double c) { return {a.v + c, a.d1, a.d2}; }
Jet operator*(Jet a, Jet b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
Jet operator/(Jet a, Jet b) {
    double v = a.v / b.v;
    double d1 = (a.d1 - v * b.d1) / b.v;
    double d2 = (a.d2 - 2.0 * d1 * b.d1 - v * b.d2) / b.v;
    return {v, d1, d2};
}
Jet jet_neg(Jet a) { return {-a.v, -a.d1, -a.d2}; }

double lin_E_branch(const ClassicalPath& path) {
    return path.interior_coeffs.size() >= 3 ? path.interior_coeffs[2] : 1.0;
}

}  // namespace

double caustic_tolerance(const BoundaryProblem& bp) {
    return kCausticTol * (1.0 + std::abs(bp.x) + std::abs(bp.y));
}

double action(const ClassicalPath& path, const Potential& p) {
    const auto& bp = path.problem;
    const bool quad = p.kind == WallKind::QuadraticWall;
    const double w = p.omega, k = p.k;
    switch (path.path_type) {
        case PathType::A: {
            double d = bp.x - bp.y;
            return d * d / (4.0 * bp.t);
        }
        case PathType::B: {
            if (quad) {
                double wt = w * bp.t;
                return w / (4.0 * std::sin(wt)) *
                       ((bp.x * bp.x + bp.y * bp.y) * std::cos(wt) - 2.0 * bp.x * bp.y);
            }
            double d = bp.x - bp.y;
            return d * d / (4.0 * bp.t) - 0.5 * (bp.x + bp.y) * k * bp.t -
                   k * k * bp.t * bp.t * bp.t / 12.0;
        }
        case PathType::BSpecial:
            return 0.0;
        case PathType::E: {
            if (quad) {
                double s = bp.x + bp.y;
                return s * s / (4.0 * (bp.t - kPi / w));
            }
            double t1 = *path.t1, t2 = *path.t2, dur = t2 - t1;
            double S = -k * k * dur * dur * dur / 12.0;
            if (t1 > 0.0) S += bp.y * bp.y / (4.0 * t1);
            if (t2 < bp.t) S += bp.x * bp.x / (4.0 * (bp.t - t2));
            return S;
        }
        case PathType::C: {
            double t1 = *path.t1;
            double free_part = t1 > 0.0 ? bp.y * bp.y / (4.0 * t1) : 0.0;
            if (quad) {
                double om = w * (bp.t - t1);
                return free_part + w * bp.x * bp.x * std::cos(om) / (4.0 * std::sin(om));
            }
            double d = bp.t - t1;
            return free_part + bp.x * bp.x / (4.0 * d) - 0.5 * bp.x * k * d -
                   k * k * d * d * d / 12.0;
        }
        case PathType::D: {
            double t1 = *path.t1;
            double free_part = bp.x * bp.x / (4.0 * (bp.t - t1));
            if (quad)
                return free_part + 0.25 * bp.y * bp.y * w / std::tan(w * t1);
            return free_part - k * k * t1 * t1 * t1 / 12.0 - 0.5 * k * t1 * bp.y +
                   bp.y * bp.y / (4.0 * t1);
        }
    }
    return 0.0;
}

CausticProbe caustic_probe(const ClassicalPath& path, const Potential& p) {
    const auto& bp = path.problem;
    const bool quad = p.kind == WallKind::QuadraticWall;
    const double w = p.omega, k = p.k;
    double denom = 0.0;
    switch (path.path_type) {
        case PathType::C: {
            double t1 = *path.t1;
            denom = quad ? bp.x - bp.y * std::cos(w * (bp.t - t1))
                         : 3.0 * k * t1 * t1 - 4.0 * k * bp.t * t1 + k * bp.t * bp.t + bp.x - bp.y;
            break;
        }
        case PathType::D: {
            double t1 = *path.t1;
            denom = quad ? bp.y - bp.x * std::cos(w * t1)
                         : -bp.x + bp.y - 2.0 * k * bp.t * t1 + 3.0 * k * t1 * t1;
            break;
        }
        case PathType::E:
            denom = quad ? bp.t - kPi / w : k * bp.t * bp.t + 4.0 * (bp.x + bp.y);
            break;
        default:
            throw std::invalid_argument("caustic_probe expects a C, D or E path");
    }
    return CausticProbe{denom, std::abs(denom) < caustic_tolerance(bp)};
}

std::pair<double, int> amplitude_sq(const ClassicalPath& path, const Potential& p) {
    const auto& bp = path.problem;
    const bool quad = p.kind == WallKind::QuadraticWall;
    const double w = p.omega, k = p.k;
    auto guard = [&](double denom) {
        if (std::abs(denom) < caustic_tolerance(bp))
            throw CausticSingular("amplitude denominator below caustic tolerance");
    };
    double A2 = 0.0;
    switch (path.path_type) {
        case PathType::A:
            A2 = 1.0 / (2.0 * bp.t);
            break;
        case PathType::B:
            A2 = quad ? w / (2.0 * std::sin(w * bp.t)) : 1.0 / (2.0 * bp.t);
            break;
        case PathType::BSpecial:
            throw CausticSingular("special type-B family: amplitude is singular");
        case PathType::E: {
            if (quad) {
                double denom = bp.t - kPi / w;
                guard(denom);
                A2 = -1.0 / (2.0 * denom);
            } else {
                double u = k * bp.t * bp.t + 4.0 * (bp.x + bp.y);
                guard(u);
                A2 = -lin_E_branch(path) * std::sqrt(k) / (2.0 * std::sqrt(u));
            }
            break;
        }
        case PathType::C: {
            double denom = caustic_probe(path, p).denom;
            guard(denom);
            A2 = -bp.y / (2.0 * *path.t1 * denom);
            break;
        }
        case PathType::D: {
            double denom = caustic_probe(path, p).denom;
            guard(denom);
            A2 = -bp.x / (2.0 * (bp.t - *path.t1) * denom);
            break;
        }
    }
    return {A2, A2 < 0.0 ? 1 : 0};
}

double residual(const ClassicalPath& path, const Potential& p) {
    const auto& bp = path.problem;
    const bool quad = p.kind == WallKind::QuadraticWall;
    const double w = p.omega, k = p.k;
    const double x = bp.x, y = bp.y, t = bp.t;
    auto guard = [&](double denom) {
        if (std::abs(denom) < caustic_tolerance(bp))
            throw CausticSingular("residual evaluated on a caustic");
    };
    switch (path.path_type) {
        case PathType::A:
        case PathType::B:
        case PathType::BSpecial:
            return 0.0;
        case PathType::E: {
            if (quad) {
                guard(t - kPi / w);
                return 0.0;  // exact for the quadratic wall
            }
            double u = k * t * t + 4.0 * (x + y);
            guard(u);
            return 5.0 / (u * u);
        }
        case PathType::C: {
            double t1 = *path.t1;
            double Y = caustic_probe(path, p).denom;
            guard(Y);
            double Y4 = Y * Y * Y * Y;
            if (quad) {
                double om = w * (t - t1);
                return w * w * t1 * t1 / (4.0 * Y4) *
                       (4.0 * x * y * std::cos(om) - 6.0 * x * x + 2.0 * y * y +
                        3.0 * x * x * w * w * t1 * t1);
            }
            // corrected closed form (9t(2kt^2+2x-y)t1 term; printed version has kt^2)
            return k / Y4 *
                   (-24.0 * t * t * y - 9.0 * t * (2.0 * k * t * t + 2.0 * x - y) * t1 +
                    (23.0 * k * t * t - 21.0 * x + 21.0 * y) * t1 * t1);
        }
        case PathType::D: {
            double t1 = *path.t1;
            double X = caustic_probe(path, p).denom;
            guard(X);
            if (quad) {
                double X4 = X * X * X * X;
                double d = t - t1;
                return -y * y * w * w * d * d / (4.0 * x * x * X4) *
                       (4.0 * x * y * std::cos(w * t1) - 6.0 * x * x + 2.0 * y * y +
                        y * y * w * w * d * d);
            }
            // exact implicit-differentiation route: t1(x) from the crossing cubic
            // f(t1) = k t1^2 (t-t1) + x t1 + y (t-t1), f_t1 = -X
            double ft1 = -X;
            double t1x = t1 / X;
            double ft1t1 = 2.0 * k * t - 6.0 * k * t1;
            double t1xx = -(2.0 * t1x + ft1t1 * t1x * t1x) / ft1;
            Jet t1j{t1, t1x, t1xx};
            Jet xj{x, 1.0, 0.0};
            Jet Xj = jet_neg(xj) + (-2.0 * k * t) * t1j + 3.0 * k * (t1j * t1j) + y;
            Jet B = jet_neg(xj) / (2.0 * ((jet_neg(t1j) + t) * Xj));
            return 0.5 * B.d2 / B.v - 0.25 * (B.d1 / B.v) * (B.d1 / B.v);
        }
    }
    return 0.0;
}

SclTerm scl_term(const ClassicalPath& path, const Potential& p) {
    SclTerm term;
    term.S = action(path, p);
    auto [A2, maslov] = amplitude_sq(path, p);
    term.A2 = A2;
    term.maslov = maslov;
    term.residual = residual(path, p);
    return term;
}

}  // namespace powerwall
