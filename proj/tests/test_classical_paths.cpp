#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "powerwall/classical_paths.hpp"

using namespace powerwall;

namespace {

// independently computed reference roots (30-digit root finder)
constexpr double kQuadCOmegaRef = 1.10606015770627191;  // sin(W)+W=2
constexpr double kQuadCTwoRootLo = 1.42207677098295058;  // 2 sin(W)+W=3.4
constexpr double kQuadCTwoRootHi = 2.87703465034200037;
constexpr double kTstarRho2 = 3.82644590996207279;       // sqrt(3)+acos(-1/2)
constexpr double kLinCRootRef = 0.430159709001946734;    // z^3-2z^2+3z-1
constexpr double kLinDRootRef = 0.569840290998053266;    // z^3-z^2+2z-1

int count_sign_changes(double rho, double T) {
    // brute-force scan of f(W) = rho sin W + W - T on (0, pi)
    const int n = 200000;
    int count = 0;
    double prev = rho * std::sin(1e-9) + 1e-9 - T;
    for (int i = 1; i <= n; ++i) {
        double om = (kPi - 2e-9) * i / n + 1e-9;
        double f = rho * std::sin(om) + om - T;
        if ((f < 0.0) != (prev < 0.0)) ++count;
        prev = f;
    }
    return count;
}

}  // namespace

TEST_CASE("type A straight path") {
    BoundaryProblem bp(-2.0, -0.5, 1.5);
    auto path = solve_type_A(bp);
    CHECK(path.path_type == PathType::A);
    auto p = Potential::linear(1.0);
    CHECK(path_position(path, p, 0.0) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(path_position(path, p, 1.5) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK_THROWS_AS(solve_type_A(BoundaryProblem(-1.0, 0.5, 1.0)), std::invalid_argument);
}

TEST_CASE("quadratic type B endpoints and half-period bound") {
    auto p = Potential::quadratic(2.0);
    BoundaryProblem bp(0.3, 0.9, 0.7);  // omega t = 1.4 < pi
    auto b = solve_type_B(bp, p);
    REQUIRE(b.has_value());
    CHECK(path_position(*b, p, 0.0) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(path_position(*b, p, 0.7) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK_FALSE(solve_type_B(BoundaryProblem(0.3, 0.9, 1.8), p).has_value());
}

TEST_CASE("linear type B endpoints") {
    auto p = Potential::linear(1.3);
    BoundaryProblem bp(0.2, 1.1, 2.0);
    auto b = solve_type_B(bp, p);
    REQUIRE(b.has_value());
    CHECK(path_position(*b, p, 0.0) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(path_position(*b, p, 2.0) == doctest::Approx(1.1).epsilon(1e-12));
    for (int i = 0; i <= 50; ++i)
        CHECK(path_position(*b, p, 2.0 * i / 50.0) >= -1e-12);
}

TEST_CASE("special type B family at the half period") {
    auto path = solve_type_B_special(kPi, 2.0);
    auto p = Potential::quadratic(kPi);
    CHECK(path.problem.t == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(path_position(path, p, 0.0) == doctest::Approx(0.0));
    CHECK(path_position(path, p, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(path_velocity(path, p, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("quadratic master equation root analysis") {
    SUBCASE("single root below pi") {
        auto r = analyze_master_equation(1.0, 2.0);
        REQUIRE(r.omegas.size() == 1);
        CHECK(r.omegas[0] == doctest::Approx(kQuadCOmegaRef).epsilon(1e-11));
        CHECK(r.Tstar.has_value());
        CHECK(*r.Tstar == doctest::Approx(kPi).epsilon(1e-12));
    }
    SUBCASE("two roots between pi and Tstar") {
        auto r = analyze_master_equation(2.0, 3.4);
        REQUIRE(r.omegas.size() == 2);
        CHECK(r.omegas[0] == doctest::Approx(kQuadCTwoRootLo).epsilon(1e-11));
        CHECK(r.omegas[1] == doctest::Approx(kQuadCTwoRootHi).epsilon(1e-11));
        CHECK(*r.Tstar == doctest::Approx(kTstarRho2).epsilon(1e-13));
    }
    SUBCASE("no roots beyond Tstar") {
        CHECK(analyze_master_equation(2.0, 3.9).omegas.empty());
        CHECK(analyze_master_equation(0.5, 3.5).omegas.empty());
    }
    SUBCASE("tangency band returns the degenerate root") {
        auto r = analyze_master_equation(2.0, kTstarRho2);
        REQUIRE(r.omegas.size() == 1);
        CHECK(r.omegas[0] == doctest::Approx(std::acos(-0.5)).epsilon(1e-10));
    }
    SUBCASE("count matches a dense scan") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> rho_d(0.05, 4.0), t_d(0.1, 6.0);
        for (int i = 0; i < 500; ++i) {
            double rho = rho_d(rng), T = t_d(rng);
            if (rho >= 1.0) {
                double Tstar = std::sqrt(rho * rho - 1.0) + std::acos(-1.0 / rho);
                if (std::abs(T - Tstar) < 1e-3) continue;  // scan cannot resolve tangency
            }
            if (std::abs(T - kPi) < 1e-3) continue;
            auto r = analyze_master_equation(rho, T);
            CHECK(static_cast<int>(r.omegas.size()) == count_sign_changes(rho, T));
        }
    }
}

TEST_CASE("monic cubic solver") {
    SUBCASE("frozen single real root") {
        auto roots = solve_monic_cubic(-2.0, 3.0, -1.0);
        REQUIRE(roots.size() == 1);
        CHECK(roots[0] == doctest::Approx(kLinCRootRef).epsilon(1e-13));
    }
    SUBCASE("three known roots") {
        // (z-1)(z-2)(z-4) = z^3 - 7z^2 + 14z - 8
        auto roots = solve_monic_cubic(-7.0, 14.0, -8.0);
        REQUIRE(roots.size() == 3);
        CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(roots[1] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(roots[2] == doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("random cubics evaluate to zero at reported roots") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> d(-3.0, 3.0);
        for (int i = 0; i < 2000; ++i) {
            double a2 = d(rng), a1 = d(rng), a0 = d(rng);
            for (double z : solve_monic_cubic(a2, a1, a0)) {
                double f = ((z + a2) * z + a1) * z + a0;
                CHECK(std::abs(f) < 1e-9 * (1.0 + z * z * std::abs(z)));
            }
        }
    }
}

TEST_CASE("linear type C frozen root and discriminant") {
    auto p = Potential::linear(1.0);
    BoundaryProblem bp(-1.0, 1.0, 1.0);
    auto analysis = analyze_type_C_linear(bp, 1.0);
    CHECK(analysis.D > 0.0);  // single-root regime
    REQUIRE(analysis.roots.size() == 1);
    CHECK(analysis.roots[0] == doctest::Approx(kLinCRootRef).epsilon(1e-12));
    auto paths = solve_type_C(bp, p);
    REQUIRE(paths.size() == 1);
    CHECK(path_position(paths[0], p, *paths[0].t1) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(path_position(paths[0], p, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("type C and type D are time reverses") {
    SUBCASE("quadratic wall") {
        auto p = Potential::quadratic(1.3);
        BoundaryProblem c_bp(-0.8, 1.1, 2.0);
        BoundaryProblem d_bp(1.1, -0.8, 2.0);
        auto cs = solve_type_C(c_bp, p);
        auto ds = solve_type_D(d_bp, p);
        REQUIRE(cs.size() == ds.size());
        for (std::size_t i = 0; i < cs.size(); ++i) {
            bool matched = false;
            for (const auto& d : ds)
                if (std::abs((c_bp.t - *cs[i].t1) - *d.t1) < 1e-9) matched = true;
            CHECK(matched);
        }
    }
    SUBCASE("linear wall") {
        auto p = Potential::linear(0.7);
        BoundaryProblem c_bp(-1.0, 1.0, 1.2);
        BoundaryProblem d_bp(1.0, -1.0, 1.2);
        auto cs = solve_type_C(c_bp, p);
        auto ds = solve_type_D(d_bp, p);
        REQUIRE(cs.size() == ds.size());
        for (const auto& c : cs) {
            bool matched = false;
            for (const auto& d : ds)
                if (std::abs((c_bp.t - *c.t1) - *d.t1) < 1e-9) matched = true;
            CHECK(matched);
        }
    }
}

TEST_CASE("linear type D frozen root") {
    auto p = Potential::linear(1.0);
    auto ds = solve_type_D(BoundaryProblem(1.0, -1.0, 1.0), p);
    REQUIRE(ds.size() == 1);
    CHECK(*ds[0].t1 == doctest::Approx(kLinDRootRef).epsilon(1e-12));
    CHECK(path_position(ds[0], p, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(path_position(ds[0], p, 1.0) == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("quadratic type E bounce") {
    auto p = Potential::quadratic(kPi);
    BoundaryProblem bp(-1.0, -1.0, 2.0);
    auto es = solve_type_E(bp, p);
    REQUIRE(es.size() == 1);
    CHECK(*es[0].t1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(*es[0].t2 == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(path_position(es[0], p, 0.0) == doctest::Approx(-1.0));
    CHECK(path_position(es[0], p, 2.0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(path_position(es[0], p, 1.0) == doctest::Approx(2.0 / kPi).epsilon(1e-12));
    CHECK(solve_type_E(BoundaryProblem(-1.0, -1.0, 0.9), p).empty());
}

TEST_CASE("linear type E double root at the tangency point") {
    double k = 2.0, t = 2.0;
    double xy = -3.0 * k * t * t / 32.0;
    auto p = Potential::linear(k);
    auto es = solve_type_E(BoundaryProblem(xy, xy, t), p);
    REQUIRE(es.size() == 2);
    std::vector<double> t1s{*es[0].t1, *es[1].t1};
    std::sort(t1s.begin(), t1s.end());
    CHECK(t1s[0] == doctest::Approx(t / 8.0).epsilon(1e-12));
    CHECK(t1s[1] == doctest::Approx(3.0 * t / 8.0).epsilon(1e-12));
}

TEST_CASE("enumerate_paths dispatch") {
    auto pq = Potential::quadratic(kPi);
    CHECK(enumerate_paths(BoundaryProblem(-1.0, -1.0, 2.0), pq).size() == 2);  // A + E
    CHECK(enumerate_paths(BoundaryProblem(-1.0, -1.0, 0.5), pq).size() == 1);  // A only
    CHECK(enumerate_paths(BoundaryProblem(0.3, 0.4, 0.5), pq).size() == 1);    // B
    CHECK(enumerate_paths(BoundaryProblem(-0.5, 0.5, 0.8), pq).size() == 1);   // C
    CHECK(enumerate_paths(BoundaryProblem(0.5, -0.5, 0.8), pq).size() == 1);   // D
    auto pl = Potential::linear(1.0);
    CHECK(enumerate_paths(BoundaryProblem(-1.5, -1.5, 4.0), pl).size() == 3);  // A + 2E
}

TEST_CASE("energy is conserved along enumerated paths") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> coord(-2.0, 2.0), time_d(0.3, 3.0);
    for (int i = 0; i < 200; ++i) {
        Potential p = (i % 2 == 0) ? Potential::quadratic(1.0 + (i % 5) * 0.3)
                                   : Potential::linear(0.5 + (i % 7) * 0.2);
        BoundaryProblem bp(coord(rng), coord(rng), time_d(rng));
        for (const auto& path : enumerate_paths(bp, p)) {
            double e0 = 0.0;
            for (int j = 0; j <= 40; ++j) {
                double tau = bp.t * j / 40.0;
                double q = path_position(path, p, tau);
                double v = path_velocity(path, p, tau);
                double e = 0.25 * v * v + potential_eval(p, q);
                if (j == 0) e0 = e;
                CHECK(std::abs(e - e0) < 1e-8 * (1.0 + std::abs(e0)));
            }
        }
    }
}

TEST_CASE("enumerated path endpoints and crossings") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> coord(-2.0, 2.0), time_d(0.3, 3.0);
    for (int i = 0; i < 300; ++i) {
        Potential p = (i % 2 == 0) ? Potential::quadratic(0.8 + (i % 4) * 0.4)
                                   : Potential::linear(0.6 + (i % 5) * 0.3);
        BoundaryProblem bp(coord(rng), coord(rng), time_d(rng));
        for (const auto& path : enumerate_paths(bp, p)) {
            if (path.path_type == PathType::BSpecial) continue;
            CHECK(std::abs(path_position(path, p, 0.0) - bp.y) < 1e-10);
            CHECK(std::abs(path_position(path, p, bp.t) - bp.x) < 1e-9);
            if (path.t1)
                CHECK(std::abs(path_position(path, p, *path.t1)) < 1e-9);
            if (path.t2)
                CHECK(std::abs(path_position(path, p, *path.t2)) < 1e-9);
        }
    }
}
