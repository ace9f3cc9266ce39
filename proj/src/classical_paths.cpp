#include "powerwall/classical_paths.hpp"

#include <algorithm>
#include <cmath>

namespace powerwall {

namespace {

constexpr double kRootTol = 1e-12;      // Omega / t1 solve tolerance
constexpr double kTangencyTol = 1e-9;   // |T - T*| band treated as tangent
constexpr double kEdgeDelta = 1e-12;    // physicality filter margin on (0, t)

double master_f(double rho, double T, double om) { return rho * std::sin(om) + om - T; }
double master_fp(double rho, double om) { return rho * std::cos(om) + 1.0; }

// Bisection + Newton on a monotone piece of f; assumes sign change across [lo, hi].
double refine_master_root(double rho, double T, double lo, double hi) {
    double flo = master_f(rho, T, lo);
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = master_f(rho, T, mid);
        if ((fm < 0.0) == (flo < 0.0)) { lo = mid; flo = fm; } else { hi = mid; }
        if (hi - lo < 1e-6) break;
    }
    double om = 0.5 * (lo + hi);
    for (int i = 0; i < 50; ++i) {
        double f = master_f(rho, T, om);
        double fp = master_fp(rho, om);
        if (fp == 0.0) break;
        double step = f / fp;
        om -= step;
        om = std::clamp(om, lo, hi);
        if (std::abs(step) < kRootTol) break;
    }
    return om;
}

double newton_polish_cubic(double z, double a2, double a1, double a0) {
    for (int i = 0; i < 60; ++i) {
        double f = ((z + a2) * z + a1) * z + a0;
        double fp = (3.0 * z + 2.0 * a2) * z + a1;
        if (fp == 0.0) break;
        double step = f / fp;
        z -= step;
        if (std::abs(step) < 1e-14 * (1.0 + std::abs(z))) break;
    }
    return z;
}

// Interior segment of a linear-wall path: q(tau) = -k tau^2 + a tau + c on [lo, hi].
// Concavity makes nonnegativity automatic for valid roots; this is a guard
// against spurious cubic roots.
bool parabola_nonneg(double k, double a, double c, double lo, double hi, double scale) {
    const double tol = -1e-9 * (1.0 + scale);
    for (int i = 0; i <= 64; ++i) {
        double tau = lo + (hi - lo) * i / 64.0;
        if (-k * tau * tau + a * tau + c < tol) return false;
    }
    return true;
}

}  // namespace

ClassicalPath solve_type_A(const BoundaryProblem& bp) {
    if (std::max(bp.x, bp.y) > 0.0)
        throw std::invalid_argument("type A: straight segment enters the wall region");
    return ClassicalPath{PathType::A, bp, std::nullopt, std::nullopt, {}};
}

ClassicalPath solve_type_B_special(double omega, double v) {
    if (!(v > 0.0)) throw std::invalid_argument("type B special requires v > 0");
    BoundaryProblem bp(0.0, 0.0, kPi / omega);
    return ClassicalPath{PathType::BSpecial, bp, std::nullopt, std::nullopt, {v}};
}

std::optional<ClassicalPath> solve_type_B(const BoundaryProblem& bp, const Potential& p) {
    if (bp.x < 0.0 || bp.y < 0.0)
        throw std::invalid_argument("type B requires x >= 0 and y >= 0");
    if (p.kind == WallKind::LinearWall) {
        double a = ((bp.x - bp.y) + p.k * bp.t * bp.t) / bp.t;
        if (!parabola_nonneg(p.k, a, bp.y, 0.0, bp.t, std::abs(bp.x) + std::abs(bp.y)))
            return std::nullopt;
        return ClassicalPath{PathType::B, bp, std::nullopt, std::nullopt, {a, bp.y}};
    }
    double wt = p.omega * bp.t;
    if (bp.x == 0.0 && bp.y == 0.0) {
        if (std::abs(wt - kPi) < kTangencyTol) return solve_type_B_special(p.omega, p.omega);
        if (wt >= kPi) return std::nullopt;  // only the rest path q==0 survives
        return ClassicalPath{PathType::B, bp, std::nullopt, std::nullopt, {0.0, 0.0}};
    }
    if (wt >= kPi - kTangencyTol) return std::nullopt;  // half-period bound
    double b = (bp.x - bp.y * std::cos(wt)) / std::sin(wt);
    // sinusoid cannot dip below 0 on less than a half period with nonnegative ends
    return ClassicalPath{PathType::B, bp, std::nullopt, std::nullopt, {bp.y, b}};
}

std::vector<ClassicalPath> solve_type_E(const BoundaryProblem& bp, const Potential& p) {
    if (bp.x > 0.0 || bp.y > 0.0)
        throw std::invalid_argument("type E requires x <= 0 and y <= 0");
    std::vector<ClassicalPath> out;
    if (p.kind == WallKind::QuadraticWall) {
        double half = kPi / p.omega;
        if (bp.x == 0.0 && bp.y == 0.0) {
            if (std::abs(bp.t - half) < kTangencyTol) out.push_back(solve_type_B_special(p.omega, p.omega));
            return out;
        }
        if (bp.t <= half) return out;
        double t1 = bp.y / (bp.x + bp.y) * (bp.t - half);
        double t2 = t1 + half;
        double v1 = -(bp.x + bp.y) / (bp.t - half);  // entry velocity, equals -y/t1
        ClassicalPath path{PathType::E, bp, t1, t2, {v1}};
        out.push_back(path);
        return out;
    }
    // linear wall
    double k = p.k;
    if (bp.x == 0.0 && bp.y == 0.0) return out;  // 0 -> 0 is type B for this wall
    if (bp.y == 0.0) {
        // starts at the wall: v^2/k - v t - x = 0
        double disc = bp.t * bp.t + 4.0 * bp.x / k;
        if (disc < 0.0) return out;
        double sq = std::sqrt(disc);
        for (double sgn : {1.0, -1.0}) {
            double v = 0.5 * k * (bp.t - sgn * sq);  // sgn=+1 is the low-velocity branch
            if (!(v > 0.0)) continue;
            double t2 = v / k;
            if (!(t2 > 0.0 && t2 < bp.t)) continue;
            out.push_back(ClassicalPath{PathType::E, bp, 0.0, t2, {v, 0.0, sgn}});
            if (sq == 0.0) break;
        }
        return out;
    }
    double disc = bp.t * bp.t + 4.0 * (bp.x + bp.y) / k;
    if (disc < 0.0) return out;
    double sq = std::sqrt(disc);
    for (double sgn : {-1.0, 1.0}) {
        double t1 = bp.y / (2.0 * (bp.x + bp.y)) * (bp.t + sgn * sq);
        if (!(t1 > 0.0)) continue;
        double t2 = (k * t1 * t1 - bp.y) / (k * t1);
        // x = 0 admits a grazing arrival with t2 = t (the axis caustic)
        if (bp.x == 0.0 && t2 > bp.t && t2 <= bp.t * (1.0 + 1e-12)) t2 = bp.t;
        if (!(t1 < t2 && (t2 < bp.t || (bp.x == 0.0 && t2 == bp.t)))) continue;
        double a = (-bp.y + 2.0 * k * t1 * t1) / t1;
        double c = bp.y - k * t1 * t1;
        out.push_back(ClassicalPath{PathType::E, bp, t1, t2, {a, c, sgn}});
        if (sq == 0.0) break;  // tangent case: single path sitting on the caustic
    }
    return out;
}

RootAnalysisQuadC analyze_master_equation(double rho, double T) {
    RootAnalysisQuadC r;
    r.rho = rho;
    r.T = T;
    if (rho >= 1.0)
        r.Tstar = std::sqrt(rho * rho - 1.0) + std::acos(-1.0 / rho);

    const double eps = 1e-14;
    if (rho < 1.0) {
        // f is strictly increasing; single root iff T < pi
        if (T < kPi && master_f(rho, T, kPi - eps) > 0.0)
            r.omegas.push_back(refine_master_root(rho, T, eps, kPi - eps));
        return r;
    }
    double omc = std::acos(-1.0 / rho);
    if (std::abs(T - *r.Tstar) < kTangencyTol) {
        r.omegas.push_back(omc);  // degenerate tangency
        return r;
    }
    if (T > *r.Tstar) return r;
    // increasing piece (0, omc]
    if (master_f(rho, T, omc) > 0.0)
        r.omegas.push_back(refine_master_root(rho, T, eps, omc));
    // decreasing piece [omc, pi)
    if (master_f(rho, T, omc) > 0.0 && master_f(rho, T, kPi - eps) < 0.0)
        r.omegas.push_back(refine_master_root(rho, T, omc, kPi - eps));
    return r;
}

RootAnalysisQuadC analyze_type_C_quadratic(const BoundaryProblem& bp, double omega) {
    if (!(bp.y < 0.0 && bp.x > 0.0))
        throw std::invalid_argument("type C analysis requires y < 0 and x > 0");
    return analyze_master_equation(-bp.y / bp.x, omega * bp.t);
}

std::vector<double> solve_monic_cubic(double a2, double a1, double a0) {
    double Q = (3.0 * a1 - a2 * a2) / 9.0;
    double R = (9.0 * a2 * a1 - 27.0 * a0 - 2.0 * a2 * a2 * a2) / 54.0;
    double D = R * R + Q * Q * Q;
    double scale = std::max({std::abs(R * R), std::abs(Q * Q * Q), 1e-300});
    std::vector<double> roots;
    if (D <= 1e-14 * scale) {
        if (Q >= 0.0) {
            roots.push_back(-a2 / 3.0);  // triple root (Q=R=0 up to roundoff)
        } else {
            double arg = std::clamp(R / std::sqrt(-Q * Q * Q), -1.0, 1.0);
            double theta = std::acos(arg);
            double m = 2.0 * std::sqrt(-Q);
            for (int i = 0; i < 3; ++i)
                roots.push_back(m * std::cos((theta + 2.0 * kPi * i) / 3.0) - a2 / 3.0);
        }
    } else {
        double sq = std::sqrt(D);
        roots.push_back(std::cbrt(R + sq) + std::cbrt(R - sq) - a2 / 3.0);
    }
    for (double& z : roots) z = newton_polish_cubic(z, a2, a1, a0);
    std::sort(roots.begin(), roots.end());
    return roots;
}

CubicAnalysisLinC analyze_type_C_linear(const BoundaryProblem& bp, double k) {
    if (!(bp.y < 0.0 && bp.x > 0.0))
        throw std::invalid_argument("type C analysis requires y < 0 and x > 0");
    CubicAnalysisLinC c;
    c.a2 = -2.0 * bp.t;
    c.a1 = (bp.x - bp.y) / k + bp.t * bp.t;
    c.a0 = bp.y * bp.t / k;
    c.Qc = (3.0 * c.a1 - c.a2 * c.a2) / 9.0;
    c.Rc = (9.0 * c.a2 * c.a1 - 27.0 * c.a0 - 2.0 * c.a2 * c.a2 * c.a2) / 54.0;
    c.D = c.Rc * c.Rc + c.Qc * c.Qc * c.Qc;
    c.s = 8.0 * bp.x + bp.y;
    double scale = std::abs(bp.x) + std::abs(bp.y);
    for (double t1 : solve_monic_cubic(c.a2, c.a1, c.a0)) {
        if (!(t1 > kEdgeDelta && t1 < bp.t - kEdgeDelta)) continue;
        double a = 2.0 * k * t1 - bp.y / t1;
        double cc = bp.y - k * t1 * t1;
        if (!parabola_nonneg(k, a, cc, t1, bp.t, scale)) continue;
        c.roots.push_back(t1);
    }
    return c;
}

std::vector<ClassicalPath> solve_type_C(const BoundaryProblem& bp, const Potential& p) {
    std::vector<ClassicalPath> out;
    if (p.kind == WallKind::QuadraticWall) {
        auto analysis = analyze_type_C_quadratic(bp, p.omega);
        for (double om : analysis.omegas) {
            double t1 = bp.t - om / p.omega;
            if (!(t1 > 0.0)) continue;
            double b = -bp.y / (p.omega * t1);  // interior amplitude
            out.push_back(ClassicalPath{PathType::C, bp, t1, std::nullopt, {b}});
        }
        return out;
    }
    auto analysis = analyze_type_C_linear(bp, p.k);
    for (double t1 : analysis.roots) {
        double a = 2.0 * p.k * t1 - bp.y / t1;
        double c = bp.y - p.k * t1 * t1;
        out.push_back(ClassicalPath{PathType::C, bp, t1, std::nullopt, {a, c}});
    }
    return out;
}

std::vector<ClassicalPath> solve_type_D(const BoundaryProblem& bp, const Potential& p) {
    if (!(bp.y > 0.0 && bp.x < 0.0))
        throw std::invalid_argument("type D requires y > 0 and x < 0");
    std::vector<ClassicalPath> out;
    if (p.kind == WallKind::QuadraticWall) {
        // same master equation as type C with rho-hat = -x/y; root is omega*t1
        auto analysis = analyze_master_equation(-bp.x / bp.y, p.omega * bp.t);
        for (double om : analysis.omegas) {
            double t1 = om / p.omega;
            if (!(t1 > 0.0 && t1 < bp.t)) continue;
            double csin = -bp.y / std::tan(p.omega * t1);
            out.push_back(ClassicalPath{PathType::D, bp, t1, std::nullopt, {csin, bp.y}});
        }
        return out;
    }
    double k = p.k;
    double a2 = -bp.t, a1 = (bp.y - bp.x) / k, a0 = -bp.y * bp.t / k;
    double scale = std::abs(bp.x) + std::abs(bp.y);
    for (double t1 : solve_monic_cubic(a2, a1, a0)) {
        if (!(t1 > kEdgeDelta && t1 < bp.t - kEdgeDelta)) continue;
        double a = (k * t1 * t1 - bp.y) / t1;
        if (!parabola_nonneg(k, a, bp.y, 0.0, t1, scale)) continue;
        out.push_back(ClassicalPath{PathType::D, bp, t1, std::nullopt, {a}});
    }
    return out;
}

std::vector<ClassicalPath> enumerate_paths(const BoundaryProblem& bp, const Potential& p) {
    std::vector<ClassicalPath> out;
    auto push_all = [&out](std::vector<ClassicalPath> v) {
        for (auto& path : v) out.push_back(std::move(path));
    };
    if (bp.y > 0.0) {
        if (bp.x >= 0.0) {
            if (auto b = solve_type_B(bp, p)) out.push_back(*b);
        } else {
            push_all(solve_type_D(bp, p));
        }
        return out;
    }
    if (bp.y == 0.0 && bp.x >= 0.0) {
        // boundary start: the B closed forms stay finite
        if (auto b = solve_type_B(bp, p)) out.push_back(*b);
        return out;
    }
    if (bp.x > 0.0) {
        push_all(solve_type_C(bp, p));
        return out;
    }
    // y <= 0 and x <= 0 (x = 0 handled by the E limit forms)
    out.push_back(solve_type_A(bp));
    push_all(solve_type_E(bp, p));
    return out;
}

double path_position(const ClassicalPath& path, const Potential& p, double tau) {
    const auto& bp = path.problem;
    const double w = p.omega, k = p.k;
    const bool quad = p.kind == WallKind::QuadraticWall;
    switch (path.path_type) {
        case PathType::A:
            return bp.y + tau * (bp.x - bp.y) / bp.t;
        case PathType::B:
            if (quad)
                return path.interior_coeffs[0] * std::cos(w * tau) +
                       path.interior_coeffs[1] * std::sin(w * tau);
            return -k * tau * tau + path.interior_coeffs[0] * tau + path.interior_coeffs[1];
        case PathType::BSpecial:
            return path.interior_coeffs[0] / w * std::sin(w * tau);
        case PathType::E: {
            double t1 = *path.t1, t2 = *path.t2;
            if (tau <= t1) return t1 > 0.0 ? bp.y * (1.0 - tau / t1) : 0.0;
            if (tau >= t2 && t2 < bp.t) return bp.x * (tau - t2) / (bp.t - t2);
            tau = std::min(tau, t2);  // grazing arrival t2 = t uses the interior arc
            if (quad) return path.interior_coeffs[0] / w * std::sin(w * (tau - t1));
            return -k * tau * tau + path.interior_coeffs[0] * tau + path.interior_coeffs[1];
        }
        case PathType::C: {
            double t1 = *path.t1;
            if (tau <= t1) return t1 > 0.0 ? bp.y * (1.0 - tau / t1) : 0.0;
            if (quad) return path.interior_coeffs[0] * std::sin(w * (tau - t1));
            return -k * tau * tau + path.interior_coeffs[0] * tau + path.interior_coeffs[1];
        }
        case PathType::D: {
            double t1 = *path.t1;
            if (tau >= t1) return bp.x * (tau - t1) / (bp.t - t1);
            if (quad)
                return path.interior_coeffs[0] * std::sin(w * tau) +
                       path.interior_coeffs[1] * std::cos(w * tau);
            return -k * tau * tau + path.interior_coeffs[0] * tau + bp.y;
        }
    }
    return 0.0;
}

double path_velocity(const ClassicalPath& path, const Potential& p, double tau) {
    const auto& bp = path.problem;
    const double w = p.omega, k = p.k;
    const bool quad = p.kind == WallKind::QuadraticWall;
    switch (path.path_type) {
        case PathType::A:
            return (bp.x - bp.y) / bp.t;
        case PathType::B:
            if (quad)
                return w * (-path.interior_coeffs[0] * std::sin(w * tau) +
                            path.interior_coeffs[1] * std::cos(w * tau));
            return -2.0 * k * tau + path.interior_coeffs[0];
        case PathType::BSpecial:
            return path.interior_coeffs[0] * std::cos(w * tau);
        case PathType::E: {
            double t1 = *path.t1, t2 = *path.t2;
            if (tau <= t1) return t1 > 0.0 ? -bp.y / t1 : path.interior_coeffs[0];
            if (tau >= t2 && t2 < bp.t) return bp.x / (bp.t - t2);
            tau = std::min(tau, t2);  // grazing arrival t2 = t uses the interior arc
            if (quad) return path.interior_coeffs[0] * std::cos(w * (tau - t1));
            return -2.0 * k * tau + path.interior_coeffs[0];
        }
        case PathType::C: {
            double t1 = *path.t1;
            if (tau <= t1) return -bp.y / t1;
            if (quad) return w * path.interior_coeffs[0] * std::cos(w * (tau - t1));
            return -2.0 * k * tau + path.interior_coeffs[0];
        }
        case PathType::D: {
            double t1 = *path.t1;
            if (tau >= t1) return bp.x / (bp.t - t1);
            if (quad)
                return w * (path.interior_coeffs[0] * std::cos(w * tau) -
                            path.interior_coeffs[1] * std::sin(w * tau));
            return -2.0 * k * tau + path.interior_coeffs[0];
        }
    }
    return 0.0;
}

}  // namespace powerwall
