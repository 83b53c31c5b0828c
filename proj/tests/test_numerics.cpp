#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ddlevy/numerics.hpp"

using namespace ddlevy;
using namespace ddlevy::numerics;
using cplx = std::complex<double>;

TEST_CASE("laplace inversion recovers exponentials") {
    auto F = [](cplx s) { return 1.0 / (s - 3.0); };  // e^{3x}
    InversionConfig talbot;
    CHECK(invert_laplace(F, 0.5, talbot) ==
          doctest::Approx(std::exp(1.5)).epsilon(1e-10));
    InversionConfig euler;
    euler.method = InversionConfig::Method::euler_summation;
    CHECK(invert_laplace(F, 0.5, euler) ==
          doctest::Approx(std::exp(1.5)).epsilon(1e-6));
}

TEST_CASE("laplace inversion recovers polynomial and trig originals") {
    auto ramp = [](cplx s) { return 1.0 / (s * s); };  // x
    CHECK(invert_laplace(ramp, 2.0) == doctest::Approx(2.0).epsilon(1e-10));
    auto osc = [](cplx s) { return s / (s * s + 4.0); };  // cos(2x)
    CHECK(invert_laplace(osc, 1.0) ==
          doctest::Approx(std::cos(2.0)).epsilon(1e-8));
}

TEST_CASE("inversion config validation") {
    InversionConfig bad;
    bad.node_count = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    InversionConfig bad2;
    bad2.working_tolerance = -1.0;
    CHECK_THROWS_AS(bad2.validate(), ConfigError);
}

TEST_CASE("adaptive quadrature on smooth and peaked integrands") {
    QuadConfig cfg;
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI, cfg) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 30.0, cfg) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // narrow Gaussian bump forces subdivision
    const double peak = integrate(
        [](double x) {
            const double d = (x - 0.7) / 1e-3;
            return std::exp(-0.5 * d * d);
        },
        0.0, 1.0, cfg);
    CHECK(peak == doctest::Approx(1e-3 * std::sqrt(2.0 * M_PI)).epsilon(1e-9));
}

TEST_CASE("quadrature subdivision limit is enforced") {
    QuadConfig cfg;
    cfg.max_subdivisions = 2;
    cfg.rel_tol = 1e-14;
    cfg.abs_tol = 1e-300;
    CHECK_THROWS_AS(integrate([](double x) { return std::sqrt(std::abs(x)); },
                              -1.0, 1.0, cfg),
                    SubdivisionLimit);
    QuadConfig bad;
    bad.rel_tol = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("cumulative exponential integral matches closed form") {
    const std::vector<double> grid{0.0, 0.25, 0.5, 1.0, 2.0};
    const auto vals =
        cumulative_exp_integral([](double z) { return 3.0 + z; }, 0.0, grid);
    REQUIRE(vals.size() == grid.size());
    CHECK(vals.front() == 1.0);  // exact at the anchor
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = grid[i];
        const double exact = std::exp(-(3.0 * s + 0.5 * s * s));
        CHECK(vals[i] == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("root finding on an increasing Laplace-exponent shape") {
    // 2 theta - 3 theta / (theta + 3) = 1 has the positive root of
    // 2 theta^2 + 2 theta - 3 = 0, i.e. (-1 + sqrt(7)) / 2.
    auto f = [](double th) { return 2.0 * th - 3.0 * th / (th + 3.0); };
    const double root = find_root_increasing(f, 1.0, 0.0);
    CHECK(root == doctest::Approx((-1.0 + std::sqrt(7.0)) / 2.0).epsilon(1e-12));
    CHECK(find_root_increasing([](double t) { return t * t; }, 4.0, 0.0) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(
        find_root_increasing([](double t) { return std::atan(t); }, 10.0, 0.0),
        BracketFailure);
}

TEST_CASE("finite differences") {
    CHECK(derivative([](double x) { return std::sin(x); }, 0.3) ==
          doctest::Approx(std::cos(0.3)).epsilon(1e-8));
    CHECK(derivative([](double x) { return x * x * x; }, 2.0) ==
          doctest::Approx(12.0).epsilon(1e-8));
}
