#include "powerwall/neumann.hpp"

#include <cmath>

#include "powerwall/classical_paths.hpp"
#include "powerwall/propagators.hpp"
#include "powerwall/scl_terms.hpp"

namespace powerwall {

void gauss_legendre(int n, double a, double b,
                    std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        nodes[i] = 0.5 * (a + b) + 0.5 * (b - a) * z;
        weights[i] = (b - a) / ((1.0 - z * z) * pp * pp);
    }
}

int classify_domain(const Potential& p, const BoundaryProblem& bp, double q, double tau) {
    if (p.kind != WallKind::QuadraticWall)
        throw std::invalid_argument("classify_domain is defined for the quadratic wall");
    if (!(bp.y < 0.0 && bp.x < 0.0 && q > 0.0 && tau > 0.0 && tau < bp.t))
        throw std::invalid_argument("classify_domain requires y<0, x<0, q>0, 0<tau<t");
    auto c_leg = analyze_master_equation(-bp.y / q, p.omega * tau);
    auto d_leg = analyze_master_equation(-bp.x / q, p.omega * (bp.t - tau));
    return static_cast<int>(c_leg.omegas.size()) * static_cast<int>(d_leg.omegas.size());
}

namespace {

bool zero_residual_type(PathType pt, const Potential& p) {
    if (pt == PathType::A || pt == PathType::B || pt == PathType::BSpecial) return true;
    return pt == PathType::E && p.kind == WallKind::QuadraticWall;
}

// Per-path guarded sum; residual_weighted selects the Q kernel vs K_scl.
Complex sum_paths_guarded(const Potential& p, const BoundaryProblem& bp,
                          bool residual_weighted, double guard, long& skips) {
    Complex acc{0.0, 0.0};
    for (const auto& path : enumerate_paths(bp, p)) {
        if (residual_weighted && zero_residual_type(path.path_type, p)) continue;
        if (path.path_type == PathType::BSpecial) { ++skips; continue; }
        if (path.path_type == PathType::C || path.path_type == PathType::D ||
            path.path_type == PathType::E) {
            if (std::abs(caustic_probe(path, p).denom) < guard) { ++skips; continue; }
        }
        SclTerm term = scl_term(path, p);
        Complex v = scl_term_value(term);
        acc += residual_weighted ? term.residual * v : v;
    }
    return acc;
}

}  // namespace

Complex q_kernel(const Potential& p, double x, double t, double y, double tau) {
    if (!(t > tau)) throw std::invalid_argument("q_kernel requires t > tau");
    BoundaryProblem bp(y, x, t - tau);
    Complex acc{0.0, 0.0};
    for (const auto& path : enumerate_paths(bp, p)) {
        if (zero_residual_type(path.path_type, p)) continue;
        SclTerm term = scl_term(path, p);
        acc += term.residual * scl_term_value(term);
    }
    return acc;
}

std::vector<FirstOrderResult> first_order_term_grid(
    const Potential& p, const std::vector<double>& xs, double t,
    const std::function<Complex(double, double)>& phi, const QuadratureSpec& quad) {
    std::vector<double> t1_nodes, t1_w, y_nodes, x1_nodes;
    {
        std::vector<double> pn, pw;
        for (int pan = 0; pan < quad.time_panels; ++pan) {
            gauss_legendre(quad.time_points, t * pan / quad.time_panels,
                           t * (pan + 1) / quad.time_panels, pn, pw);
            t1_nodes.insert(t1_nodes.end(), pn.begin(), pn.end());
            t1_w.insert(t1_w.end(), pw.begin(), pw.end());
        }
    }
    auto trapezoid = [&](double lo, double hi, std::vector<double>& nodes, double& w) {
        nodes.resize(quad.space_points);
        w = (hi - lo) / (quad.space_points - 1);
        for (int i = 0; i < quad.space_points; ++i) nodes[i] = lo + w * i;
    };
    double wy = 0.0, wx1 = 0.0;
    trapezoid(quad.y_lo, quad.y_hi, y_nodes, wy);
    trapezoid(quad.x1_lo, quad.x1_hi, x1_nodes, wx1);

    long skips = 0;

    // inner field psi1(x1, tau1) = int_0^tau1 dtau int dy Q(x1,tau1;y,tau) phi(y,tau)
    std::vector<std::vector<Complex>> psi1(t1_nodes.size(),
                                           std::vector<Complex>(x1_nodes.size()));
    std::vector<double> tn, tw;
    for (std::size_t i1 = 0; i1 < t1_nodes.size(); ++i1) {
        double tau1 = t1_nodes[i1];
        std::vector<double> tau_nodes, tau_w;
        for (int pan = 0; pan < quad.time_panels; ++pan) {
            gauss_legendre(quad.time_points, tau1 * pan / quad.time_panels,
                           tau1 * (pan + 1) / quad.time_panels, tn, tw);
            tau_nodes.insert(tau_nodes.end(), tn.begin(), tn.end());
            tau_w.insert(tau_w.end(), tw.begin(), tw.end());
        }
        for (std::size_t j = 0; j < x1_nodes.size(); ++j) {
            Complex acc{0.0, 0.0};
            for (std::size_t k = 0; k < tau_nodes.size(); ++k) {
                double tau = tau_nodes[k];
                Complex yacc{0.0, 0.0};
                for (std::size_t m = 0; m < y_nodes.size(); ++m) {
                    double edge = (m == 0 || m + 1 == y_nodes.size()) ? 0.5 : 1.0;
                    BoundaryProblem leg(y_nodes[m], x1_nodes[j], tau1 - tau);
                    Complex q = sum_paths_guarded(p, leg, true, quad.guard, skips);
                    yacc += edge * q * phi(y_nodes[m], tau);
                }
                acc += tau_w[k] * wy * yacc;
            }
            psi1[i1][j] = acc;
        }
    }

    std::vector<FirstOrderResult> out(xs.size());
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        Complex acc{0.0, 0.0};
        long outer_skips = 0;
        for (std::size_t i1 = 0; i1 < t1_nodes.size(); ++i1) {
            double tau1 = t1_nodes[i1];
            Complex xacc{0.0, 0.0};
            for (std::size_t j = 0; j < x1_nodes.size(); ++j) {
                double edge = (j == 0 || j + 1 == x1_nodes.size()) ? 0.5 : 1.0;
                BoundaryProblem leg(x1_nodes[j], xs[ix], t - tau1);
                xacc += edge * sum_paths_guarded(p, leg, false, quad.guard, outer_skips) *
                        psi1[i1][j];
            }
            acc += t1_w[i1] * wx1 * xacc;
        }
        out[ix].value = acc;
        out[ix].guard_skips = skips + outer_skips;
    }
    return out;
}

FirstOrderResult first_order_term(const Potential& p, double x, double t,
                                  const std::function<Complex(double, double)>& phi,
                                  const QuadratureSpec& quad) {
    return first_order_term_grid(p, {x}, t, phi, quad).front();
}

}  // namespace powerwall
