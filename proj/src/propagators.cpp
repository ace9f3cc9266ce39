#include "powerwall/propagators.hpp"

#include <cmath>

#include "powerwall/classical_paths.hpp"
#include "powerwall/scl_terms.hpp"

namespace powerwall {

namespace {

const Complex kSqrtInv2PiI = std::sqrt(1.0 / (2.0 * kPi)) * std::polar(1.0, -kPi / 4.0);

Complex pow_minus_i(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

}  // namespace

Complex k_free(double x, double y, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("k_free requires t > 0");
    double d = x - y;
    return kSqrtInv2PiI * std::sqrt(1.0 / (2.0 * t)) * std::polar(1.0, d * d / (4.0 * t));
}

Complex k_harmonic(double x, double y, double t, double omega) {
    if (!(t > 0.0)) throw std::invalid_argument("k_harmonic requires t > 0");
    if (omega == 0.0) return k_free(x, y, t);
    double wt = omega * t;
    double s = std::sin(wt);
    if (std::abs(s) < 1e-12 * (1.0 + std::abs(wt)))
        throw CausticSingular("k_harmonic singular at omega*t in pi*Z");
    // amplitude uses |sin|; each half period crossed adds a Maslov factor -i
    int half_periods = static_cast<int>(std::floor(wt / kPi));
    double S = omega / (4.0 * s) * ((x * x + y * y) * std::cos(wt) - 2.0 * x * y);
    return kSqrtInv2PiI * std::sqrt(omega / (2.0 * std::abs(s))) * pow_minus_i(half_periods) *
           std::polar(1.0, S);
}

Complex k_linear(double x, double y, double t, double k) {
    if (!(t > 0.0)) throw std::invalid_argument("k_linear requires t > 0");
    double d = x - y;
    double S = d * d / (4.0 * t) - 0.5 * (x + y) * k * t - k * k * t * t * t / 12.0;
    return kSqrtInv2PiI * std::sqrt(1.0 / (2.0 * t)) * std::polar(1.0, S);
}

Complex scl_term_value(const SclTerm& term) {
    return kSqrtInv2PiI * std::sqrt(std::abs(term.A2)) * pow_minus_i(term.maslov) *
           std::polar(1.0, term.S);
}

PropagatorValue k_scl(const BoundaryProblem& bp, const Potential& p) {
    PropagatorValue out;
    for (const auto& path : enumerate_paths(bp, p)) {
        Complex v = scl_term_value(scl_term(path, p));
        out.terms.emplace_back(path.path_type, v);
        out.value += v;
    }
    return out;
}

}  // namespace powerwall
