#pragma once

// Draw-down functions xi with xi(x) < x, their widths xibar(x) = x - xi(x),
// and the infimum witness needed for the reflected process to be well
// defined. Tabulated functions interpolate linearly between knots and
// extrapolate with the boundary slope.

#include <utility>
#include <vector>

#include <json.hpp>

#include "ddlevy/errors.hpp"

namespace ddlevy {

struct AlphaWitness {
    double alpha;  // inf of xibar over [x, infinity)
};

class DrawdownFn {
  public:
    enum class Kind { constant_level, linear, tabulated };

    static DrawdownFn constant(double c);
    static DrawdownFn linear(double k, double d);  // xi(x) = k x - d
    static DrawdownFn tabulated(std::vector<double> x, std::vector<double> y);

    // {"kind":"constant","c":..} | {"kind":"linear","k":..,"d":..} |
    // {"kind":"tabulated","x":[..],"y":[..]}
    static DrawdownFn from_json(const nlohmann::json& doc);

    Kind kind() const { return kind_; }
    double k() const { return k_; }
    double d() const { return d_; }
    double c() const { return c_; }
    double domain_lo() const { return domain_lo_; }

    double xi(double x) const;
    double xibar(double x) const;  // throws InvalidDrawdown if <= 0
    AlphaWitness alpha_over(double x) const;

    // Subintervals of [lo, hi] on which xi(y) < u; used to resolve the
    // indicator 1_{(xi(y), y)}(u) before quadrature.
    std::vector<std::pair<double, double>> support_below(double u, double lo,
                                                         double hi) const;

  private:
    DrawdownFn() = default;
    double xi_raw(double x) const;

    Kind kind_ = Kind::constant_level;
    double c_ = 0.0;
    double k_ = 0.0;
    double d_ = 0.0;
    std::vector<double> knots_x_;
    std::vector<double> knots_y_;
    double domain_lo_ = -1e300;
};

}  // namespace ddlevy
