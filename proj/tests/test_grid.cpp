#include "bdf/grid.hpp"

#include "oracles.hpp"

#include <doctest.h>
#include <cmath>

using namespace bdf;

TEST_CASE("radial grid weights sum to the interval length") {
    for (double R : {0.5, 1.0, 2.0, 7.5}) {
        const RadialGrid g = make_radial_grid(R, 4, 16);
        std::vector<double> ones(g.size(), 1.0);
        CHECK(g.integrate(ones) == doctest::Approx(R).epsilon(1e-13));
    }
}

TEST_CASE("radial grid integrates r^2 against 4 pi r^2 weighting") {
    const RadialGrid g = make_radial_grid(1.0, 4, 16);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        v[i] = 4.0 * M_PI * g.nodes[i] * g.nodes[i] * g.nodes[i] * g.nodes[i];
    CHECK(g.integrate(v) == doctest::Approx(4.0 * M_PI / 5.0).epsilon(1e-13));
}

TEST_CASE("radial grid matches an adaptive oracle on sin") {
    const RadialGrid g = make_radial_grid(2.0, 4, 16);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::sin(g.nodes[i]);
    const double oracle = integrate_adaptive([](double r) { return std::sin(r); }, 0.0, 2.0);
    CHECK(g.integrate(v) == doctest::Approx(1.0 - std::cos(2.0)).epsilon(1e-13));
    CHECK(g.integrate(v) == doctest::Approx(oracle).epsilon(1e-13));
}

TEST_CASE("radial grid is exact on polynomials up to the rule order") {
    const int order = 8;
    const RadialGrid g = make_radial_grid(1.5, 3, order);
    for (int deg = 0; deg <= 2 * order - 1; ++deg) {
        std::vector<double> v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::pow(g.nodes[i], deg);
        const double exact = std::pow(1.5, deg + 1) / (deg + 1);
        CHECK(g.integrate(v) == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("radial grid rejects invalid arguments") {
    CHECK_THROWS_AS(make_radial_grid(0.0, 4, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_radial_grid(-1.0, 4, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_radial_grid(1.0, 0, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_radial_grid(1.0, 4, 1), std::invalid_argument);
}

TEST_CASE("adaptive quadrature handles mild endpoint singularities") {
    // int_0^1 ln(1/x) dx = 1
    const double v = integrate_adaptive([](double x) { return -std::log(x); }, 1e-300, 1.0);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("graded panels cover the interval and respect the singular point") {
    const auto segs = graded_panels(0.0, 2.0, 0.7);
    double len = 0.0;
    for (const auto& [a, b] : segs) {
        CHECK(b > a);
        CHECK((b <= 0.7 + 1e-12 || a >= 0.7 - 1e-12));
        len += b - a;
    }
    CHECK(len == doctest::Approx(2.0).epsilon(1e-10));

    // log singularity integrated accurately: int_0^2 ln|x - 0.7| dx
    std::vector<double> xg, wg;
    gauss_legendre(12, xg, wg);
    double s = 0.0;
    for (const auto& [a, b] : segs)
        for (std::size_t i = 0; i < xg.size(); ++i) {
            const double x = 0.5 * (b - a) * (xg[i] + 1.0) + a;
            s += 0.5 * (b - a) * wg[i] * std::log(std::abs(x - 0.7));
        }
    auto F = [](double t) { return t * std::log(t) - t; };  // int ln u du
    const double exact = F(0.7) + F(1.3);
    CHECK(s == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("oscillatory rule tracks a fast sine") {
    const double freq = 40.0;
    const double v = integrate_oscillatory([&](double x) { return std::sin(freq * x); }, 0.0, 2.0,
                                           M_PI / (4.0 * freq));
    CHECK(v == doctest::Approx((1.0 - std::cos(80.0)) / freq).epsilon(1e-12));
}
