#pragma once

// Numeric kernel: Laplace-transform inversion, adaptive quadrature,
// cumulative exponential integrals, root finding and differentiation.
// All routines are pure functions of their arguments.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "ddlevy/errors.hpp"

namespace ddlevy::numerics {

struct InversionConfig {
    enum class Method { fixed_talbot, euler_summation };
    Method method = Method::fixed_talbot;
    int node_count = 32;
    double working_tolerance = 1e-10;

    void validate() const;
};

struct QuadConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;

    void validate() const;
};

using ComplexFn = std::function<std::complex<double>(std::complex<double>)>;
using RealFn = std::function<double(double)>;

// Inverts a Laplace transform at x > 0. The transform must be analytic to
// the right of its abscissa of convergence and evaluable on the inversion
// contour (fixed Talbot or Euler-summed Bromwich, per cfg.method).
double invert_laplace(const ComplexFn& transform, double x,
                      const InversionConfig& cfg = {});

// Adaptive Gauss-Kronrod (7,15) quadrature on [a, b].
double integrate(const RealFn& f, double a, double b, const QuadConfig& cfg = {});

// For each grid point s returns exp(-int_x^s g(z) dz). The running integral
// is accumulated panel by panel, so the whole grid costs one sweep.
// Requires an ascending grid with grid.front() >= x.
std::vector<double> cumulative_exp_integral(const RealFn& g, double x,
                                            std::span<const double> grid,
                                            const QuadConfig& cfg = {});

// Solves f(theta) = target for f strictly increasing on [lo, inf) with
// f(lo) <= target. Safeguarded Newton inside an automatically expanded
// bracket, bisection fallback.
double find_root_increasing(const RealFn& f, double target, double lo);

// Central finite difference with step h = scale * cbrt(eps) * max(1, |x|).
double derivative(const RealFn& f, double x, double scale = 1.0);

}  // namespace ddlevy::numerics
