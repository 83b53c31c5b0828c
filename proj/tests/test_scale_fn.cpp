#include <doctest.h>

#include <cmath>

#include "ddlevy/numerics.hpp"
#include "ddlevy/scale_fn.hpp"

using namespace ddlevy;

namespace {

// int_0^inf e^{-theta x} W(x) dx computed by quadrature; must equal
// 1 / (psi(theta) - q) for theta > Phi(q).
double laplace_of_W(const ScaleEngine& e, double theta) {
    numerics::QuadConfig cfg;
    cfg.rel_tol = 1e-11;
    const double cut = 80.0 / (theta - e.model().phi(e.q()) + 1.0) + 10.0;
    return numerics::integrate(
        [&](double x) { return std::exp(-theta * x) * e.W(x); }, 0.0, cut, cfg);
}

}  // namespace

TEST_CASE("driftless Brownian scale functions are hyperbolic") {
    const ScaleEngine e(LevyModel::brownian(0.0, 2.0), 1.0);
    for (double x : {0.25, 1.0, 2.5}) {
        CHECK(e.W(x) == doctest::Approx(std::sinh(x)).epsilon(1e-12));
        CHECK(e.W_prime(x) == doctest::Approx(std::cosh(x)).epsilon(1e-12));
        CHECK(e.Z(x) == doctest::Approx(std::cosh(x)).epsilon(1e-12));
        CHECK(e.Wbar(x) == doctest::Approx(std::cosh(x) - 1.0).epsilon(1e-12));
        CHECK(e.Zbar(x) == doctest::Approx(std::sinh(x)).epsilon(1e-12));
    }
    CHECK(e.W(-1.0) == 0.0);
    CHECK(e.W(0.0) == 0.0);
    CHECK(e.Z(-2.0) == 1.0);
    CHECK(e.Z(0.0) == 1.0);
}

TEST_CASE("degenerate q=0 driftless case") {
    const ScaleEngine e(LevyModel::brownian(0.0, 2.0), 0.0);
    CHECK(e.W(3.0) == doctest::Approx(3.0).epsilon(1e-12));  // 2x/sigma2
    CHECK(e.Z(3.0) == 1.0);
}

TEST_CASE("Laplace identity round trip") {
    SUBCASE("brownian with drift") {
        const ScaleEngine e(LevyModel::brownian(1.0, 2.0), 0.7);
        for (double th : {e.model().phi(0.7) + 0.5, e.model().phi(0.7) + 1.5}) {
            CHECK(laplace_of_W(e, th) ==
                  doctest::Approx(1.0 / (e.model().psi(th) - 0.7)).epsilon(1e-8));
        }
    }
    SUBCASE("cramer-lundberg") {
        const ScaleEngine e(LevyModel::cramer_lundberg(1.5, 1.0, 2.0), 1.0);
        CHECK(e.W(0.0) == doctest::Approx(1.0 / 1.5));  // 1/drift for BV
        for (double th : {e.model().phi(1.0) + 0.5, e.model().phi(1.0) + 2.0}) {
            CHECK(laplace_of_W(e, th) ==
                  doctest::Approx(1.0 / (e.model().psi(th) - 1.0)).epsilon(1e-8));
        }
    }
}

TEST_CASE("Z is one plus q times the cumulative W") {
    for (double q : {0.0, 0.5, 2.0}) {
        const ScaleEngine e(LevyModel::cramer_lundberg(1.5, 1.0, 2.0), q);
        for (double x : {0.5, 1.0, 3.0}) {
            CHECK(e.Z(x) == doctest::Approx(1.0 + q * e.Wbar(x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("Z(x, theta) specializations") {
    const ScaleEngine e(LevyModel::brownian(0.5, 2.0), 1.0);
    // theta = 0 recovers Z
    for (double x : {0.5, 2.0})
        CHECK(e.Z_theta(x, 0.0) == doctest::Approx(e.Z(x)).epsilon(1e-10));
    // theta = Phi(q) kills the integral term exactly
    const double p = e.model().phi(1.0);
    for (double x : {0.5, 2.0})
        CHECK(e.Z_theta(x, p) == doctest::Approx(std::exp(p * x)).epsilon(1e-9));
}

TEST_CASE("theta-derivative of Z(x, theta) at zero (q = 0)") {
    // with q = 0, d/dtheta Z(x,theta) at theta = 0+ is x - psi'(0+) Wbar(x)
    for (const LevyModel& m : {LevyModel::brownian(0.5, 2.0),
                               LevyModel::cramer_lundberg(1.5, 1.0, 2.0)}) {
        const ScaleEngine e(m, 0.0);
        const double x = 1.5;
        const double d0 = (e.Z_theta(x, 2e-5) - e.Z_theta(x, 0.0)) / 2e-5;
        CHECK(d0 == doctest::Approx(x - m.psi_prime_at_zero() * e.Wbar(x))
                        .epsilon(1e-4));
    }
}

TEST_CASE("closed-form and inversion backends agree") {
    numerics::InversionConfig icfg;
    numerics::QuadConfig qcfg;
    SUBCASE("brownian") {
        const LevyModel m = LevyModel::brownian(0.5, 2.0);
        const ScaleEngine cf(m, 1.0);
        const ScaleEngine inv(m, 1.0, ScaleEngine::Backend::inversion, icfg, qcfg);
        for (double x = 0.5; x <= 5.0; x += 0.75) {
            CHECK(inv.W(x) == doctest::Approx(cf.W(x)).epsilon(1e-6));
            CHECK(inv.Z(x) == doctest::Approx(cf.Z(x)).epsilon(1e-6));
        }
    }
    SUBCASE("cramer-lundberg") {
        const LevyModel m = LevyModel::cramer_lundberg(1.5, 1.0, 2.0);
        const ScaleEngine cf(m, 1.0);
        const ScaleEngine inv(m, 1.0, ScaleEngine::Backend::inversion, icfg, qcfg);
        for (double x = 0.5; x <= 5.0; x += 0.75) {
            CHECK(inv.W(x) == doctest::Approx(cf.W(x)).epsilon(1e-6));
            CHECK(inv.Z(x) == doctest::Approx(cf.Z(x)).epsilon(1e-6));
        }
    }
}

TEST_CASE("engine validation") {
    CHECK_THROWS_AS(ScaleEngine(LevyModel::brownian(0.0, 2.0), -1.0), DomainError);
    const ScaleEngine ubv(LevyModel::brownian(0.0, 2.0), 1.0);
    CHECK_THROWS_AS(ubv.W_prime(0.0), DomainError);
    CHECK_THROWS_AS(ubv.Z_theta(1.0, -0.5), DomainError);
    numerics::InversionConfig icfg;
    numerics::QuadConfig qcfg;
    CHECK_THROWS_AS(ScaleEngine(LevyModel::brownian(0.0, 2.0), 1.0,
                                ScaleEngine::Backend::closed_form_cl, icfg, qcfg),
                    ConfigError);
}

TEST_CASE("W is nondecreasing") {
    for (const LevyModel& m : {LevyModel::brownian(-0.5, 1.5),
                               LevyModel::cramer_lundberg(2.0, 3.0, 3.0)}) {
        const ScaleEngine e(m, 0.8);
        double prev = 0.0;
        for (double x = 0.05; x < 4.0; x += 0.05) {
            const double w = e.W(x);
            CHECK(w >= prev - 1e-12);
            prev = w;
        }
    }
}
