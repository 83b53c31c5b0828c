#include "ddlevy/drawdown.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ddlevy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

DrawdownFn DrawdownFn::constant(double c) {
    DrawdownFn f;
    f.kind_ = Kind::constant_level;
    f.c_ = c;
    return f;
}

DrawdownFn DrawdownFn::linear(double k, double d) {
    if (!(d > 0.0))
        throw InvalidDrawdown("linear drawdown: requires d > 0 so that xi(x) < x near 0");
    DrawdownFn f;
    f.kind_ = Kind::linear;
    f.k_ = k;
    f.d_ = d;
    return f;
}

DrawdownFn DrawdownFn::tabulated(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ConfigError("tabulated drawdown: need matching x/y with >= 2 knots");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i > 0 && x[i] <= x[i - 1])
            throw ConfigError("tabulated drawdown: knots must be strictly ascending");
        if (!(y[i] < x[i]))
            throw InvalidDrawdown("tabulated drawdown: requires xi(x) < x at every knot");
        if (i > 0) {
            const double slope = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
            if (!(slope < 1.0))
                throw InvalidDrawdown("tabulated drawdown: knot slopes must be < 1");
        }
    }
    DrawdownFn f;
    f.kind_ = Kind::tabulated;
    f.domain_lo_ = x.front();
    f.knots_x_ = std::move(x);
    f.knots_y_ = std::move(y);
    return f;
}

double DrawdownFn::xi_raw(double x) const {
    switch (kind_) {
        case Kind::constant_level:
            return c_;
        case Kind::linear:
            return k_ * x - d_;
        case Kind::tabulated: {
            const auto& xs = knots_x_;
            const auto& ys = knots_y_;
            if (x >= xs.back()) {
                const double slope = (ys.back() - ys[ys.size() - 2]) /
                                     (xs.back() - xs[xs.size() - 2]);
                return ys.back() + slope * (x - xs.back());
            }
            auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - xs.begin());
            const std::size_t j = std::max<std::size_t>(i, 1);
            const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
            return ys[j - 1] + t * (ys[j] - ys[j - 1]);
        }
    }
    return 0.0;
}

double DrawdownFn::xi(double x) const {
    if (x < domain_lo_)
        throw DomainError("drawdown: x below the function's domain");
    return xi_raw(x);
}

double DrawdownFn::xibar(double x) const {
    const double w = x - xi(x);
    if (!(w > 0.0))
        throw InvalidDrawdown("drawdown: xi(x) < x violated");
    return w;
}

AlphaWitness DrawdownFn::alpha_over(double x) const {
    if (x < domain_lo_)
        throw DomainError("drawdown: x below the function's domain");
    double alpha = kInf;
    switch (kind_) {
        case Kind::constant_level:
            alpha = x - c_;  // xibar increasing
            break;
        case Kind::linear:
            if (k_ > 1.0) {
                alpha = -kInf;  // xibar decreasing without bound
            } else if (k_ == 1.0) {
                alpha = d_;
            } else {
                alpha = (1.0 - k_) * x + d_;  // minimized at y = x
            }
            break;
        case Kind::tabulated: {
            alpha = x - xi_raw(x);
            for (std::size_t i = 0; i < knots_x_.size(); ++i)
                if (knots_x_[i] >= x)
                    alpha = std::min(alpha, knots_x_[i] - knots_y_[i]);
            // Beyond the last knot the extrapolation slope is < 1, so xibar
            // grows linearly; the knot scan already covers the infimum.
            break;
        }
    }
    if (!(alpha > 0.0))
        throw WellDefinednessViolated(
            "drawdown: inf of xibar over [x, inf) must be positive");
    return {alpha};
}

std::vector<std::pair<double, double>> DrawdownFn::support_below(double u, double lo,
                                                                 double hi) const {
    std::vector<std::pair<double, double>> out;
    if (!(hi > lo)) return out;
    switch (kind_) {
        case Kind::constant_level:
            if (u > c_) out.emplace_back(lo, hi);
            return out;
        case Kind::linear: {
            if (k_ == 0.0) {
                if (u > -d_) out.emplace_back(lo, hi);
            } else if (k_ > 0.0) {
                const double y = (u + d_) / k_;  // xi(y) < u iff y < ybound
                if (y > lo) out.emplace_back(lo, std::min(hi, y));
            } else {
                const double y = (u + d_) / k_;  // xi decreasing: y > ybound
                if (y < hi) out.emplace_back(std::max(lo, y), hi);
            }
            return out;
        }
        case Kind::tabulated: {
            // Piecewise-linear: walk a fine partition of [lo, hi] aligned with
            // the knots and solve each linear piece.
            std::vector<double> pts{lo};
            for (double kx : knots_x_)
                if (kx > lo && kx < hi) pts.push_back(kx);
            pts.push_back(hi);
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                const double a = pts[i], b = pts[i + 1];
                const double fa = xi_raw(a), fb = xi_raw(b);
                double s = a, e = b;
                if (fa < u && fb < u) {
                    // whole piece
                } else if (fa >= u && fb >= u) {
                    continue;
                } else {
                    const double t = (u - fa) / (fb - fa);
                    const double cross = a + t * (b - a);
                    if (fa < u) e = cross; else s = cross;
                }
                if (!out.empty() && out.back().second == s)
                    out.back().second = e;
                else
                    out.emplace_back(s, e);
            }
            return out;
        }
    }
    return out;
}

DrawdownFn DrawdownFn::from_json(const nlohmann::json& doc) {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "constant") return constant(doc.at("c").get<double>());
    if (kind == "linear")
        return linear(doc.at("k").get<double>(), doc.at("d").get<double>());
    if (kind == "tabulated")
        return tabulated(doc.at("x").get<std::vector<double>>(),
                         doc.at("y").get<std::vector<double>>());
    throw ConfigError("drawdown config: unknown kind '" + kind + "'");
}

}  // namespace ddlevy
