#include "powerwall/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace powerwall {

namespace {

struct State {
    double q, v, S;
};

State rhs(const Potential& p, const State& s) {
    // m = 1/2: q'' = -V'(q)/m = -2 V'(q); L = v^2/4 - V(q)
    // at q = 0 the right-limit slope applies only when moving right
    double slope = (s.q > 0.0 || (s.q == 0.0 && s.v > 0.0)) ? potential_slope(p, s.q) : 0.0;
    return {s.v, -2.0 * slope, 0.25 * s.v * s.v - potential_eval(p, s.q)};
}

// Region-frozen right-hand side: the in-wall branch analytically continued,
// so substages poking across q = 0 do not break RK4 smoothness.
State rhs_region(const Potential& p, const State& s, bool inside) {
    double slope = 0.0, v = 0.0;
    if (inside) {
        slope = p.kind == WallKind::QuadraticWall ? 0.5 * p.omega * p.omega * s.q : p.k;
        v = p.kind == WallKind::QuadraticWall ? 0.25 * p.omega * p.omega * s.q * s.q
                                              : p.k * s.q;
    }
    return {s.v, -2.0 * slope, 0.25 * s.v * s.v - v};
}

State axpy(const State& a, double h, const State& b) {
    return {a.q + h * b.q, a.v + h * b.v, a.S + h * b.S};
}

State rk4_step(const Potential& p, const State& s, double h) {
    State k1 = rhs(p, s);
    State k2 = rhs(p, axpy(s, 0.5 * h, k1));
    State k3 = rhs(p, axpy(s, 0.5 * h, k2));
    State k4 = rhs(p, axpy(s, h, k3));
    return {s.q + h / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q),
            s.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
            s.S + h / 6.0 * (k1.S + 2.0 * k2.S + 2.0 * k3.S + k4.S)};
}

State rk4_step_region(const Potential& p, const State& s, double h, bool inside) {
    State k1 = rhs_region(p, s, inside);
    State k2 = rhs_region(p, axpy(s, 0.5 * h, k1), inside);
    State k3 = rhs_region(p, axpy(s, 0.5 * h, k2), inside);
    State k4 = rhs_region(p, axpy(s, h, k3), inside);
    return {s.q + h / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q),
            s.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
            s.S + h / 6.0 * (k1.S + 2.0 * k2.S + 2.0 * k3.S + k4.S)};
}

// Bisection on the step fraction for the crossing within [0, h] from s0.
double refine_crossing_fraction(const Potential& p, const State& s0, double h, bool inside) {
    double lo = 0.0, hi = h;
    double qlo = s0.q;
    for (int i = 0; i < 100; ++i) {
        double mid = 0.5 * (lo + hi);
        double qm = rk4_step_region(p, s0, mid, inside).q;
        if ((qm < 0.0) == (qlo < 0.0)) { lo = mid; qlo = qm; } else { hi = mid; }
        if (hi - lo < 1e-17 * (1.0 + h)) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ShootResult shoot(const Potential& p, double y, double v0, double t, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("shoot requires dt > 0");
    long n = static_cast<long>(std::ceil(t / dt - 1e-12));
    if (n > 100'000'000L) throw std::invalid_argument("shoot: step count overflow");
    double h = t / static_cast<double>(n);
    State s{y, v0, 0.0};
    ShootResult out;
    double tau = 0.0;
    for (long i = 0; i < n; ++i) {
        State next = rk4_step(p, s, h);
        if ((s.q < 0.0) != (next.q < 0.0)) {
            // event step: land exactly on the kink, then finish the step
            bool inside = !(s.q < 0.0);
            double frac = refine_crossing_fraction(p, s, h, inside);
            out.crossings.push_back(tau + frac);
            State at = rk4_step_region(p, s, frac, inside);
            at.q = 0.0;  // pin to the kink
            next = rk4_step_region(p, at, h - frac, !inside);
        }
        s = next;
        tau += h;
    }
    out.x_final = s.q;
    out.v_final = s.v;
    out.action = s.S;
    return out;
}

Complex pde_residual(const std::function<Complex(double, double)>& kernel,
                     const Potential& p, double x, double t, double h) {
    Complex kc = kernel(x, t);
    Complex kxx = (kernel(x + h, t) - 2.0 * kc + kernel(x - h, t)) / (h * h);
    Complex kt = (kernel(x, t + h) - kernel(x, t - h)) / (2.0 * h);
    return -kxx + potential_eval(p, x) * kc - Complex(0.0, 1.0) * kt;
}

double SampledFunction::l2_norm() const {
    double acc = 0.0;
    for (const Complex& c : values) acc += std::norm(c);
    return std::sqrt(acc * dx);
}

namespace {

// (I + i dt/2 H) psi1 = (I - i dt/2 H) psi0, H = -d2/dx2 + V, Dirichlet ends.
SampledFunction cn_evolve(const std::vector<double>& v, const SampledFunction& psi0,
                          double t, double dt) {
    const std::size_t n = psi0.values.size();
    if (v.size() != n) throw std::invalid_argument("potential sample size mismatch");
    if (!(dt > 0.0) || !(psi0.dx > 0.0))
        throw std::invalid_argument("crank_nicolson requires dt > 0 and dx > 0");
    long steps = static_cast<long>(std::llround(t / dt));
    if (steps < 1) steps = 1;
    double h = t / static_cast<double>(steps);

    const Complex ih(0.0, 0.5 * h);
    const double inv_dx2 = 1.0 / (psi0.dx * psi0.dx);
    const Complex off = ih * (-inv_dx2);

    SampledFunction psi = psi0;
    std::vector<Complex> diag(n), rhsv(n), cp(n);
    for (std::size_t i = 0; i < n; ++i)
        diag[i] = 1.0 + ih * (2.0 * inv_dx2 + v[i]);

    for (long s = 0; s < steps; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            Complex lap = -2.0 * psi.values[i];
            if (i > 0) lap += psi.values[i - 1];
            if (i + 1 < n) lap += psi.values[i + 1];
            rhsv[i] = psi.values[i] - ih * (-inv_dx2 * lap + v[i] * psi.values[i]);
        }
        // Thomas sweep (constant off-diagonals)
        cp[0] = off / diag[0];
        rhsv[0] /= diag[0];
        for (std::size_t i = 1; i < n; ++i) {
            Complex m = diag[i] - off * cp[i - 1];
            cp[i] = off / m;
            rhsv[i] = (rhsv[i] - off * rhsv[i - 1]) / m;
        }
        psi.values[n - 1] = rhsv[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
            psi.values[i] = rhsv[i] - cp[i] * psi.values[i + 1];
    }
    if (std::abs(psi.values.front()) > 1e-6 || std::abs(psi.values.back()) > 1e-6)
        throw std::runtime_error("crank_nicolson: box-edge contamination");
    return psi;
}

}  // namespace

SampledFunction crank_nicolson(const Potential& p, const SampledFunction& psi0,
                               double t, double dt) {
    std::vector<double> v(psi0.values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = potential_eval(p, psi0.grid_x(i));
    return cn_evolve(v, psi0, t, dt);
}

SampledFunction crank_nicolson_potential(const std::vector<double>& v,
                                         const SampledFunction& psi0,
                                         double t, double dt) {
    return cn_evolve(v, psi0, t, dt);
}

}  // namespace powerwall
