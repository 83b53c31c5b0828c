#include <doctest.h>

#include "ddlevy/drawdown.hpp"

using namespace ddlevy;

TEST_CASE("constant draw-down level") {
    const DrawdownFn f = DrawdownFn::constant(0.5);
    CHECK(f.xi(2.0) == 0.5);
    CHECK(f.xibar(2.0) == doctest::Approx(1.5));
    CHECK(f.alpha_over(2.0).alpha == doctest::Approx(1.5));
    CHECK_THROWS_AS(f.xibar(0.5), InvalidDrawdown);   // width zero
    CHECK_THROWS_AS(f.alpha_over(0.25), WellDefinednessViolated);
}

TEST_CASE("linear draw-down") {
    const DrawdownFn f = DrawdownFn::linear(0.5, 1.0);  // xi(x) = x/2 - 1
    CHECK(f.xi(2.0) == doctest::Approx(0.0));
    CHECK(f.xibar(2.0) == doctest::Approx(2.0));
    CHECK(f.alpha_over(2.0).alpha == doctest::Approx(2.0));  // (1-k)x + d
    CHECK(f.alpha_over(0.0).alpha == doctest::Approx(1.0));

    const DrawdownFn unit = DrawdownFn::linear(1.0, 0.5);
    CHECK(unit.alpha_over(7.0).alpha == doctest::Approx(0.5));  // k = 1: alpha = d

    CHECK_THROWS_AS(DrawdownFn::linear(1.0, 0.0), InvalidDrawdown);
    CHECK_THROWS_AS(DrawdownFn::linear(0.5, -1.0), InvalidDrawdown);

    // k > 1 is constructible but the infimum of the width is -inf
    const DrawdownFn steep = DrawdownFn::linear(2.0, 1.0);
    CHECK(steep.xi(0.0) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(steep.alpha_over(0.0), WellDefinednessViolated);
}

TEST_CASE("tabulated draw-down interpolates and extrapolates") {
    const DrawdownFn f =
        DrawdownFn::tabulated({0.0, 1.0, 2.0}, {-1.0, -0.5, 0.2});
    CHECK(f.xi(0.5) == doctest::Approx(-0.75));
    CHECK(f.xi(1.5) == doctest::Approx(-0.15));
    CHECK(f.xi(3.0) == doctest::Approx(0.9));  // boundary slope 0.7
    CHECK(f.domain_lo() == 0.0);
    CHECK_THROWS_AS(f.xi(-0.5), DomainError);
    // knot-wise infimum of the width
    CHECK(f.alpha_over(0.0).alpha == doctest::Approx(1.0));
}

TEST_CASE("tabulated validation") {
    CHECK_THROWS_AS(DrawdownFn::tabulated({0.0}, {-1.0}), ConfigError);
    CHECK_THROWS_AS(DrawdownFn::tabulated({0.0, 0.0}, {-1.0, -1.0}), ConfigError);
    CHECK_THROWS_AS(DrawdownFn::tabulated({0.0, 1.0}, {0.5, -1.0}),
                    InvalidDrawdown);  // xi >= x at a knot
    CHECK_THROWS_AS(DrawdownFn::tabulated({0.0, 1.0}, {-1.0, 0.5}),
                    InvalidDrawdown);  // slope 1.5 >= 1
}

TEST_CASE("support resolution for the density indicator") {
    SUBCASE("constant") {
        const DrawdownFn f = DrawdownFn::constant(0.0);
        CHECK(f.support_below(0.5, 1.0, 2.0) ==
              std::vector<std::pair<double, double>>{{1.0, 2.0}});
        CHECK(f.support_below(-0.5, 1.0, 2.0).empty());
    }
    SUBCASE("linear increasing") {
        const DrawdownFn f = DrawdownFn::linear(0.5, 1.0);
        // xi(y) < u iff y < 2(u + 1)
        const auto seg = f.support_below(0.0, 1.0, 5.0);
        REQUIRE(seg.size() == 1);
        CHECK(seg[0].first == doctest::Approx(1.0));
        CHECK(seg[0].second == doctest::Approx(2.0));
    }
    SUBCASE("tabulated piecewise") {
        const DrawdownFn f =
            DrawdownFn::tabulated({0.0, 1.0, 2.0}, {-1.0, -0.5, 0.2});
        // u = 0: xi < 0 until the second piece crosses zero at 1 + 5/7
        const auto seg = f.support_below(0.0, 0.0, 2.0);
        REQUIRE(seg.size() == 1);
        CHECK(seg[0].first == doctest::Approx(0.0));
        CHECK(seg[0].second == doctest::Approx(1.0 + 5.0 / 7.0));
    }
}

TEST_CASE("json parsing") {
    const auto c = DrawdownFn::from_json(nlohmann::json{{"kind", "constant"}, {"c", 0.25}});
    CHECK(c.xi(1.0) == 0.25);
    const auto l = DrawdownFn::from_json(
        nlohmann::json{{"kind", "linear"}, {"k", 0.5}, {"d", 1.0}});
    CHECK(l.xi(2.0) == doctest::Approx(0.0));
    const auto t = DrawdownFn::from_json(nlohmann::json{
        {"kind", "tabulated"}, {"x", {0.0, 1.0}}, {"y", {-1.0, -0.5}}});
    CHECK(t.xi(0.5) == doctest::Approx(-0.75));
    CHECK_THROWS_AS(DrawdownFn::from_json(nlohmann::json{{"kind", "spline"}}),
                    ConfigError);
}
