#include "powerwall/hypothesis.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "powerwall/classical_paths.hpp"
#include "powerwall/propagators.hpp"
#include "powerwall/scl_terms.hpp"

namespace powerwall {

namespace {

struct ScanPass {
    double sup = 0.0;
    std::vector<std::array<double, 3>> hits;
};

ScanPass scan_once(const Potential& p, const Window& w, int n) {
    ScanPass pass;
    auto coord = [n](double lo, double hi, int i) {
        return n > 1 ? lo + (hi - lo) * i / (n - 1) : 0.5 * (lo + hi);
    };
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            for (int it = 0; it < n; ++it) {
                double y = coord(w.y_lo, w.y_hi, iy);
                double x = coord(w.x_lo, w.x_hi, ix);
                double t = coord(w.t_lo, w.t_hi, it);
                if (!(t > 0.0)) continue;
                BoundaryProblem bp(y, x, t);
                for (const auto& path : enumerate_paths(bp, p)) {
                    try {
                        pass.sup = std::max(pass.sup, std::abs(residual(path, p)));
                    } catch (const CausticSingular&) {
                        pass.hits.push_back({y, x, t});
                    }
                }
            }
    return pass;
}

}  // namespace

HypothesisReport scan_residual(const Potential& p, const Window& window, int n) {
    HypothesisReport report;
    report.window = window;
    ScanPass base = scan_once(p, window, n);
    ScanPass fine = scan_once(p, window, 2 * n);
    ScanPass finest = scan_once(p, window, 4 * n);
    report.sup_residual = finest.sup;
    report.caustic_hits = base.hits;
    for (const auto& h : fine.hits) report.caustic_hits.push_back(h);
    for (const auto& h : finest.hits) report.caustic_hits.push_back(h);
    report.sup_divergent =
        fine.sup > 4.0 * base.sup && finest.sup > 4.0 * fine.sup && finest.sup > 0.0;
    report.verdict_i = report.caustic_hits.empty() && !report.sup_divergent &&
                       std::isfinite(report.sup_residual);
    return report;
}

double estimate_opnorm_kernel(const std::function<Complex(double, double)>& kernel,
                              double x_lo, double x_hi, int n) {
    if (n < 2) throw std::invalid_argument("estimate_opnorm requires n >= 2");
    const double h = (x_hi - x_lo) / (n - 1);
    Eigen::VectorXd sqw(n);
    for (int i = 0; i < n; ++i)
        sqw(i) = std::sqrt((i == 0 || i == n - 1) ? 0.5 * h : h);
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
        double x = x_lo + h * i;
        for (int j = 0; j < n; ++j) {
            double y = x_lo + h * j;
            m(i, j) = kernel(x, y) * sqw(i) * sqw(j);
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

double estimate_opnorm(const Potential& p, double t, double tau,
                       double x_lo, double x_hi, int n) {
    if (!(t > tau)) throw std::invalid_argument("estimate_opnorm requires t > tau");
    return estimate_opnorm_kernel(
        [&](double x, double y) {
            return k_scl(BoundaryProblem(y, x, t - tau), p).value;
        },
        x_lo, x_hi, n);
}

}  // namespace powerwall
