#include <doctest.h>

#include <cmath>
#include <complex>

#include "ddlevy/levy_model.hpp"

using namespace ddlevy;

TEST_CASE("Brownian Laplace exponent and inverse") {
    const LevyModel m = LevyModel::brownian(1.0, 2.0);
    CHECK(m.psi(0.0) == 0.0);
    CHECK(m.psi(1.0) == doctest::Approx(2.0));         // theta + theta^2
    CHECK(m.psi_prime(1.0) == doctest::Approx(3.0));
    CHECK(m.psi_prime_at_zero() == doctest::Approx(1.0));
    // theta^2 + theta = 1  =>  (-1 + sqrt(5)) / 2
    CHECK(m.phi(1.0) ==
          doctest::Approx((-1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    CHECK_FALSE(m.traits().bounded_variation);
    CHECK(m.traits().w_at_zero == 0.0);
}

TEST_CASE("Cramer-Lundberg Laplace exponent and inverse") {
    const LevyModel m = LevyModel::cramer_lundberg(2.0, 3.0, 3.0);
    CHECK(m.psi(1.0) == doctest::Approx(2.0 - 3.0 / 4.0));
    CHECK(m.psi_prime_at_zero() == doctest::Approx(1.0));  // c - lambda/alpha
    // 2 theta - 3 theta/(theta+3) = 1  =>  (-1 + sqrt(7)) / 2
    CHECK(m.phi(1.0) == doctest::Approx((-1.0 + std::sqrt(7.0)) / 2.0).epsilon(1e-12));
    CHECK(m.traits().bounded_variation);
    CHECK(m.traits().drift_d == doctest::Approx(2.0));
    CHECK(m.traits().w_at_zero == doctest::Approx(0.5));
}

TEST_CASE("phi is a right inverse of psi and psi is convex") {
    for (const LevyModel& m : {LevyModel::brownian(-0.5, 1.0),
                               LevyModel::cramer_lundberg(1.5, 1.0, 2.0)}) {
        for (double q : {0.0, 0.3, 1.0, 4.0}) {
            const double p = m.phi(q);
            CHECK(m.psi(p) == doctest::Approx(q).epsilon(1e-10));
        }
        for (double t = 0.1; t < 5.0; t += 0.3) {
            const double mid = m.psi(t);
            CHECK(0.5 * (m.psi(t - 0.1) + m.psi(t + 0.1)) >= mid - 1e-12);
        }
    }
}

TEST_CASE("phi handles a negative mean (minimizer start)") {
    // psi'(0+) = -0.5 < 0, so phi(0) > 0
    const LevyModel m = LevyModel::cramer_lundberg(1.0, 3.0, 2.0);
    CHECK(m.psi_prime_at_zero() == doctest::Approx(-0.5));
    const double p0 = m.phi(0.0);
    CHECK(p0 > 0.0);
    CHECK(m.psi(p0) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("complex psi agrees with the real evaluation") {
    const LevyModel m = LevyModel::cramer_lundberg(1.5, 1.0, 2.0);
    const std::complex<double> v = m.psi(std::complex<double>(0.7, 0.0));
    CHECK(v.real() == doctest::Approx(m.psi(0.7)).epsilon(1e-14));
    CHECK(v.imag() == doctest::Approx(0.0));
}

TEST_CASE("tabulated model: psi via the trapezoid functional") {
    // density 2 e^{-2x} on a fine grid approximates Exp(2) jumps with rate 1
    JumpSpec j;
    for (double x = 0.0; x <= 12.0 + 1e-12; x += 0.005) {
        j.grid.push_back(x);
        j.values.push_back(2.0 * std::exp(-2.0 * x));
    }
    const LevyModel tab = LevyModel::tabulated(0.2, 1.0, j);
    // compensated form: psi(th) = gamma th + th^2/2 - int(1 - e^{-th x} - th x 1_{x<1}) nu
    const double th = 1.3;
    const double jump_tab = 0.2 * th + 0.5 * th * th - tab.psi(th);
    const double jump_exact =
        th / (th + 2.0) - th * 0.5 * (1.0 - std::exp(-2.0) * 3.0);
    CHECK(jump_tab == doctest::Approx(jump_exact).epsilon(1e-4));
}

TEST_CASE("heavy-tail flag makes the mean undefined") {
    JumpSpec j;
    j.grid = {0.0, 1.0, 2.0};
    j.values = {1.0, 0.5, 0.25};
    j.heavy_tail = true;
    const LevyModel m = LevyModel::tabulated(0.0, 1.0, j);
    CHECK(std::isinf(m.psi_prime_at_zero()));
    CHECK(m.psi_prime_at_zero() < 0.0);
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(LevyModel::brownian(1.0, 0.0), ConfigError);   // pure drift
    CHECK_THROWS_AS(LevyModel::brownian(0.0, -1.0), ConfigError);
    CHECK_THROWS_AS(LevyModel::cramer_lundberg(1.0, -1.0, 2.0), ConfigError);
    JumpSpec j;
    j.grid = {0.0, 1.0};
    j.values = {1.0, -1.0};
    CHECK_THROWS_AS(LevyModel::tabulated(0.0, 1.0, j), ConfigError);
    // bounded variation needs positive drift after compensation
    JumpSpec k;
    k.grid = {0.0, 0.5};
    k.values = {4.0, 4.0};
    CHECK_THROWS_AS(LevyModel::tabulated(-2.0, 0.0, k), ConfigError);
}

TEST_CASE("json round trip") {
    const auto bm = LevyModel::from_json(
        nlohmann::json{{"kind", "bm"}, {"gamma", 0.5}, {"sigma2", 2.0}});
    CHECK(bm.kind() == LevyModel::Kind::brownian);
    CHECK(bm.psi(1.0) == doctest::Approx(1.5));
    const auto cl = LevyModel::from_json(nlohmann::json{
        {"kind", "cl"}, {"c", 1.5}, {"lambda", 1.0}, {"alpha", 2.0}});
    CHECK(cl.cl_c() == 1.5);
    CHECK_THROWS_AS(LevyModel::from_json(nlohmann::json{{"kind", "stable"}}),
                    ConfigError);
}
