#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "powerwall/classical_paths.hpp"
#include "powerwall/hypothesis.hpp"
#include "powerwall/neumann.hpp"
#include "powerwall/oracle.hpp"
#include "powerwall/propagators.hpp"
#include "powerwall/scl_terms.hpp"

using json = nlohmann::json;
using namespace powerwall;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

int thread_count() {
    if (const char* env = std::getenv("POWERWALL_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Potential parse_potential(const json& cfg) {
    if (!cfg.contains("potential")) throw ConfigError("config: missing \"potential\"");
    const json& p = cfg.at("potential");
    std::string kind = p.value("kind", "");
    if (kind == "quadratic") return Potential::quadratic(p.value("omega", 1.0));
    if (kind == "linear") return Potential::linear(p.value("k", 1.0));
    throw ConfigError("config: potential.kind must be \"quadratic\" or \"linear\"");
}

std::vector<double> parse_axis(const json& spec, const char* name) {
    std::vector<double> out;
    if (spec.is_array()) {
        for (const auto& v : spec) out.push_back(v.get<double>());
        return out;
    }
    if (spec.is_number()) return {spec.get<double>()};
    if (spec.is_object()) {
        double lo = spec.at("min").get<double>(), hi = spec.at("max").get<double>();
        int n = spec.at("n").get<int>();
        if (n < 1) throw ConfigError(std::string("config: ") + name + ".n must be >= 1");
        for (int i = 0; i < n; ++i)
            out.push_back(n > 1 ? lo + (hi - lo) * i / (n - 1) : 0.5 * (lo + hi));
        return out;
    }
    throw ConfigError(std::string("config: bad axis spec for ") + name);
}

std::ofstream open_output(const json& cfg) {
    std::string path = cfg.value("output", "");
    if (path.empty()) throw ConfigError("config: missing \"output\"");
    std::ofstream os(path);
    if (!os) throw ConfigError("config: cannot open output file " + path);
    return os;
}

json load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
}

int cmd_paths(const json& cfg) {
    Potential p = parse_potential(cfg);
    const json& sect = cfg.at("paths");
    auto ys = parse_axis(sect.at("y"), "y");
    auto xs = parse_axis(sect.at("x"), "x");
    auto ts = parse_axis(sect.at("t"), "t");
    auto os = open_output(cfg);
    os << "y,x,t,type,t1,t2,S,A2,maslov,residual,caustic\n";
    for (double y : ys)
        for (double x : xs)
            for (double t : ts) {
                BoundaryProblem bp(y, x, t);
                for (const auto& path : enumerate_paths(bp, p)) {
                    os << fmt(y) << ',' << fmt(x) << ',' << fmt(t) << ','
                       << path_type_name(path.path_type) << ','
                       << (path.t1 ? fmt(*path.t1) : "") << ','
                       << (path.t2 ? fmt(*path.t2) : "") << ',';
                    try {
                        SclTerm term = scl_term(path, p);
                        os << fmt(term.S) << ',' << fmt(term.A2) << ',' << term.maslov
                           << ',' << fmt(term.residual) << ",0\n";
                    } catch (const CausticSingular&) {
                        os << fmt(action(path, p)) << ",singular,,singular,1\n";
                    }
                }
            }
    return 0;
}

int cmd_propagator(const json& cfg) {
    Potential p = parse_potential(cfg);
    const json& sect = cfg.at("propagator");
    double y = sect.at("y").get<double>();
    auto xs = parse_axis(sect.at("x"), "x");
    auto ts = parse_axis(sect.at("t"), "t");
    bool exact = sect.value("exact", false);
    auto os = open_output(cfg);
    os << "x,t,re,im,n_terms" << (exact ? ",exact_re,exact_im" : "") << "\n";

    struct Row { std::string text; };
    std::vector<Row> rows(xs.size() * ts.size());
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t idx = lo; idx < hi; ++idx) {
            double x = xs[idx / ts.size()];
            double t = ts[idx % ts.size()];
            std::ostringstream line;
            line.precision(17);
            line << fmt(x) << ',' << fmt(t) << ',';
            try {
                PropagatorValue v = k_scl(BoundaryProblem(y, x, t), p);
                line << fmt(v.value.real()) << ',' << fmt(v.value.imag()) << ','
                     << v.terms.size();
            } catch (const CausticSingular&) {
                line << "singular,singular,0";
            }
            if (exact) {
                try {
                    Complex e = p.kind == WallKind::QuadraticWall
                                    ? k_harmonic(x, y, t, p.omega)
                                    : k_linear(x, y, t, p.k);
                    line << ',' << fmt(e.real()) << ',' << fmt(e.imag());
                } catch (const CausticSingular&) {
                    line << ",singular,singular";
                }
            }
            rows[idx].text = line.str();
        }
    };
    int nthreads = thread_count();
    std::vector<std::thread> pool;
    std::size_t total = rows.size(), chunk = (total + nthreads - 1) / nthreads;
    for (int i = 0; i < nthreads; ++i) {
        std::size_t lo = i * chunk, hi = std::min(total, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
    for (const auto& r : rows) os << r.text << '\n';
    return 0;
}

// Caustic indicator on a (u, v) slice: sign changes trace the locus.
int cmd_caustics(const json& cfg) {
    Potential p = parse_potential(cfg);
    const json& sect = cfg.at("caustics");
    // slice "yt": u = y, v = t at fixed x; slice "xt": u = x, v = t at fixed y
    std::string slice = sect.value("slice", "yt");
    double fixed = sect.at("fixed").get<double>();
    auto us = parse_axis(sect.at("u"), "u");
    auto vs = parse_axis(sect.at("v"), "v");
    auto indicator = [&](double u, double v) -> double {
        double y = slice == "yt" ? u : fixed;
        double x = slice == "yt" ? fixed : u;
        double t = v;
        if (p.kind == WallKind::LinearWall) {
            // cubic discriminant R^2 + Q^3 of the crossing equation
            double a2 = -2.0 * t, a1 = (x - y) / p.k + t * t, a0 = y * t / p.k;
            double Q = (3.0 * a1 - a2 * a2) / 9.0;
            double R = (9.0 * a2 * a1 - 27.0 * a0 - 2.0 * a2 * a2 * a2) / 54.0;
            return R * R + Q * Q * Q;
        }
        // quadratic wall: tangency margin T - T*(rho); no caustic for rho < 1
        double rho = x != 0.0 ? -y / x : std::numeric_limits<double>::infinity();
        if (!(rho >= 1.0)) return std::numeric_limits<double>::quiet_NaN();
        double Tstar = std::sqrt(rho * rho - 1.0) + std::acos(-1.0 / rho);
        return p.omega * t - Tstar;
    };
    auto os = open_output(cfg);
    os << "u,v\n";
    for (std::size_t i = 0; i < us.size(); ++i)
        for (std::size_t j = 0; j + 1 < vs.size(); ++j) {
            double f0 = indicator(us[i], vs[j]);
            double f1 = indicator(us[i], vs[j + 1]);
            if (std::isnan(f0) || std::isnan(f1) || (f0 < 0.0) == (f1 < 0.0)) continue;
            double v = vs[j] + (vs[j + 1] - vs[j]) * f0 / (f0 - f1);
            os << fmt(us[i]) << ',' << fmt(v) << '\n';
        }
    return 0;
}

int cmd_hypothesis(const json& cfg) {
    Potential p = parse_potential(cfg);
    const json& sect = cfg.at("hypothesis");
    const json& w = sect.at("window");
    Window window{w.at("y_lo").get<double>(), w.at("y_hi").get<double>(),
                  w.at("x_lo").get<double>(), w.at("x_hi").get<double>(),
                  w.at("t_lo").get<double>(), w.at("t_hi").get<double>()};
    HypothesisReport report = scan_residual(p, window, sect.value("n", 6));
    if (sect.contains("opnorm")) {
        for (const auto& spec : sect.at("opnorm")) {
            OpnormEstimate e;
            e.t = spec.at("t").get<double>();
            e.tau = spec.value("tau", 0.0);
            e.norm = estimate_opnorm(p, e.t, e.tau, spec.at("x_lo").get<double>(),
                                     spec.at("x_hi").get<double>(), spec.value("n", 101));
            report.opnorm_estimates.push_back(e);
        }
        report.verdict_ii = true;
        for (const auto& e : report.opnorm_estimates)
            if (!std::isfinite(e.norm)) report.verdict_ii = false;
    }
    json out;
    out["window"] = {{"y_lo", window.y_lo}, {"y_hi", window.y_hi},
                     {"x_lo", window.x_lo}, {"x_hi", window.x_hi},
                     {"t_lo", window.t_lo}, {"t_hi", window.t_hi}};
    out["sup_residual"] = report.sup_residual;
    out["sup_divergent"] = report.sup_divergent;
    out["caustic_hits"] = json::array();
    for (const auto& h : report.caustic_hits)
        out["caustic_hits"].push_back({h[0], h[1], h[2]});
    out["opnorm_estimates"] = json::array();
    for (const auto& e : report.opnorm_estimates)
        out["opnorm_estimates"].push_back({{"t", e.t}, {"tau", e.tau}, {"norm", e.norm}});
    out["verdict_i"] = report.verdict_i;
    out["verdict_ii"] = report.verdict_ii;
    auto os = open_output(cfg);
    os << out.dump(2) << '\n';
    return 0;
}

int cmd_neumann1(const json& cfg) {
    Potential p = parse_potential(cfg);
    const json& sect = cfg.at("neumann1");
    auto xs = parse_axis(sect.at("x"), "x");
    double t = sect.at("t").get<double>();
    const json& ph = sect.at("phi");
    double c = ph.value("center", -2.0), sig = ph.value("width", 0.5),
           mom = ph.value("momentum", 0.0);
    auto phi = [=](double y, double) {
        double g = std::exp(-(y - c) * (y - c) / (2.0 * sig * sig));
        return Complex(g, 0.0) * std::polar(1.0, mom * y) /
               std::sqrt(sig * std::sqrt(kPi));
    };
    QuadratureSpec quad;
    if (sect.contains("quadrature")) {
        const json& q = sect.at("quadrature");
        quad.space_points = q.value("space_points", quad.space_points);
        quad.time_points = q.value("time_points", quad.time_points);
        quad.time_panels = q.value("time_panels", quad.time_panels);
        quad.y_lo = q.value("y_lo", quad.y_lo);
        quad.y_hi = q.value("y_hi", quad.y_hi);
        quad.x1_lo = q.value("x1_lo", quad.x1_lo);
        quad.x1_hi = q.value("x1_hi", quad.x1_hi);
        quad.guard = q.value("guard", quad.guard);
    }
    auto results = first_order_term_grid(p, xs, t, phi, quad);
    auto os = open_output(cfg);
    os << "x,re,im,guard_skips\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        os << fmt(xs[i]) << ',' << fmt(results[i].value.real()) << ','
           << fmt(results[i].value.imag()) << ',' << results[i].guard_skips << '\n';
    return 0;
}

int cmd_validate(const json& cfg) {
    Potential p = parse_potential(cfg);
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << '\n';
        if (!ok) ++failures;
    };

    // shooting closure over the enumerated paths of a probe grid
    {
        bool ok = true;
        for (double y : {-1.5, -0.4, 0.8})
            for (double x : {-1.2, 0.6, 1.4})
                for (double t : {0.7, 1.9}) {
                    BoundaryProblem bp(y, x, t);
                    for (const auto& path : enumerate_paths(bp, p)) {
                        if (path.path_type == PathType::BSpecial) continue;
                        double v0 = path_velocity(path, p, 0.0);
                        auto res = shoot(p, y, v0, t, 1e-5);
                        if (std::abs(res.x_final - x) > 1e-6) ok = false;
                        try {
                            double S = action(path, p);
                            if (std::abs(res.action - S) > 1e-6 * (1.0 + std::abs(S)))
                                ok = false;
                        } catch (const CausticSingular&) {}
                    }
                }
        check("shooting closure", ok);
    }
    // exact kernels satisfy the Schrodinger equation
    {
        auto free_k = [](double x, double t) { return k_free(x, -0.3, t); };
        Complex r = pde_residual(free_k, Potential::linear(1.0), -0.9, 1.1, 1e-3);
        bool ok = std::abs(r) < 1e-4;
        if (p.kind == WallKind::QuadraticWall) {
            auto harm = [&](double x, double t) { return k_harmonic(x, 0.4, t, p.omega); };
            Complex rr = pde_residual(harm, p, 0.8, 0.9 / p.omega, 1e-3);
            ok = ok && std::abs(rr) < 1e-3;
        } else {
            auto lin = [&](double x, double t) { return k_linear(x, 0.4, t, p.k); };
            Complex rr = pde_residual(lin, p, 0.8, 0.9, 1e-3);
            ok = ok && std::abs(rr) < 1e-3;
        }
        check("pde residual of exact kernels", ok);
    }
    // Crank-Nicolson free spreading against the closed form
    {
        double L = 12.0, dx = 0.003, t = 0.5;
        int n = static_cast<int>(2 * L / dx) + 1;
        SampledFunction psi0{-L, dx, std::vector<Complex>(n)};
        double sig = 0.7;
        for (int i = 0; i < n; ++i) {
            double x = psi0.grid_x(i);
            psi0.values[i] = std::exp(-x * x / (2.0 * sig * sig)) /
                             std::sqrt(sig * std::sqrt(kPi));
        }
        std::vector<double> zero(n, 0.0);
        auto psi = crank_nicolson_potential(zero, psi0, t, 1e-4);
        // free evolution of a Gaussian with m = 1/2: sigma^2 -> sigma^2 + 2 i t
        double err2 = 0.0;
        Complex s2(sig * sig, 2.0 * t);
        for (int i = 0; i < n; ++i) {
            double x = psi.grid_x(i);
            Complex exact = std::exp(-x * x / (2.0 * s2)) * sig / std::sqrt(s2) /
                            std::sqrt(sig * std::sqrt(kPi));
            err2 += std::norm(psi.values[i] - exact) * dx;
        }
        check("crank-nicolson free evolution", std::sqrt(err2) < 1e-5);
        double norm_drift = std::abs(psi.l2_norm() - psi0.l2_norm());
        check("crank-nicolson norm conservation", norm_drift < 1e-9);
    }
    (void)cfg;
    std::cout << (failures == 0 ? "ALL CHECKS PASSED" : "VALIDATION FAILED") << '\n';
    return failures == 0 ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semiclassical propagator toolkit for power wall potentials"};
    app.require_subcommand(1);
    std::string config_path;

    struct Sub { const char* name; const char* desc; int (*run)(const json&); };
    const Sub subs[] = {
        {"paths", "Enumerate classical paths on a grid", cmd_paths},
        {"propagator", "Evaluate the semiclassical kernel on a grid", cmd_propagator},
        {"caustics", "Trace caustic loci in a 2-D slice", cmd_caustics},
        {"hypothesis", "Scan the convergence hypotheses, emit a JSON report", cmd_hypothesis},
        {"neumann1", "Evaluate the first-order correction term", cmd_neumann1},
        {"validate", "Run oracle cross-checks", cmd_validate},
    };
    for (const auto& s : subs) {
        auto* cmd = app.add_subcommand(s.name, s.desc);
        cmd->add_option("-c,--config", config_path, "JSON config file")->required();
        cmd->callback([&, run = s.run] {
            json cfg = load_config(config_path);
            std::exit(run(cfg));
        });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
