#include "ddlevy/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ddlevy::analytics {

namespace {

// 7-point Gauss-Legendre on [-1, 1].
constexpr double kGx[4] = {0.0, 0.405845151377397, 0.741531185599394,
                           0.949107912342759};
constexpr double kGw[4] = {0.417959183673469, 0.381830050505119,
                           0.279705391489277, 0.129484966168870};

double gauss7(const numerics::RealFn& g, double a, double b) {
    if (b <= a) return 0.0;
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = kGw[0] * g(c);
    for (int j = 1; j < 4; ++j) s += kGw[j] * (g(c - h * kGx[j]) + g(c + h * kGx[j]));
    return s * h;
}

// Draw-down width z - xi(z); nonnegative on the working interval.
double width(const DrawdownFn& dd, double z) {
    const double w = z - dd.xi(z);
    if (w < 0.0)
        throw ImproperIntegral("analytics: xi(z) < z violated inside the integral");
    return w;
}

// Integrates f(s, w(s)) ds over [lo, hi] where w(s) = exp(-int_{x0}^s g).
// The running inner integral is advanced node to node, so each refinement
// level costs one sweep.
double weighted_outer_pass(const numerics::RealFn& g,
                           const std::function<double(double, double)>& f,
                           double x0, double lo, double hi, int panels) {
    numerics::QuadConfig head_cfg;
    head_cfg.rel_tol = 1e-12;
    head_cfg.abs_tol = 1e-14;
    double cum = (lo > x0) ? numerics::integrate(g, x0, lo, head_cfg) : 0.0;
    double prev = lo;
    double total = 0.0;
    const double dx = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        const double pa = lo + p * dx;
        const double pb = (p + 1 == panels) ? hi : pa + dx;
        const double c = 0.5 * (pa + pb);
        const double h = 0.5 * (pb - pa);
        const double nodes[7] = {c - h * kGx[3], c - h * kGx[2], c - h * kGx[1],
                                 c,              c + h * kGx[1], c + h * kGx[2],
                                 c + h * kGx[3]};
        const double weights[7] = {kGw[3], kGw[2], kGw[1], kGw[0],
                                   kGw[1], kGw[2], kGw[3]};
        for (int j = 0; j < 7; ++j) {
            cum += gauss7(g, prev, nodes[j]);
            prev = nodes[j];
            total += weights[j] * h * f(nodes[j], std::exp(-cum));
        }
        cum += gauss7(g, prev, pb);
        prev = pb;
    }
    return total;
}

double weighted_outer_refined(const numerics::RealFn& g,
                              const std::function<double(double, double)>& f,
                              double x0, double lo, double hi,
                              double rel_tol = 1e-10) {
    if (!(hi > lo)) return 0.0;
    double last = weighted_outer_pass(g, f, x0, lo, hi, 8);
    for (int panels = 16; panels <= 1024; panels *= 2) {
        const double cur = weighted_outer_pass(g, f, x0, lo, hi, panels);
        if (std::abs(cur - last) <= std::max(rel_tol * std::abs(cur), 1e-13))
            return cur;
        last = cur;
    }
    return last;
}

// Detects an integrable singularity of g at the lower limit (W'(xibar)/W
// with xibar -> 0 for unbounded variation). Such integrals are clipped at
// x + eps and extrapolated eps -> 0.
bool singular_at(const numerics::RealFn& g, double x, double span) {
    const double probe = std::min(1e-10, 1e-10 * span);
    const double v = g(x + probe);
    return !std::isfinite(v) || std::abs(v) > 1e8;
}

double weighted_outer(const numerics::RealFn& g,
                      const std::function<double(double, double)>& f, double x0,
                      double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    if (!singular_at(g, x0, hi - x0))
        return weighted_outer_refined(g, f, x0, lo, hi);
    // Richardson in the clip width (the weight vanishes linearly as eps -> 0
    // for W ~ z near the origin).
    auto clipped = [&](double eps) {
        const double start = x0 + eps;
        return weighted_outer_refined(g, f, start, std::max(lo, start), hi);
    };
    const double f2 = clipped(5e-5);
    const double f3 = clipped(2.5e-5);
    return 2.0 * f3 - f2;
}

numerics::RealFn log_derivative_weight(const ScaleEngine& e, const DrawdownFn& dd) {
    return [&e, &dd](double z) {
        const double w = width(dd, z);
        return e.W_prime(w) / e.W(w);
    };
}

numerics::RealFn kappa_weight(const ScaleEngine& e, const DrawdownFn& dd) {
    return [&e, &dd](double z) {
        const double w = width(dd, z);
        return e.q() * e.W(w) / e.Z(w);
    };
}

}  // namespace

ExitProblem::ExitProblem(const ScaleEngine& e, const DrawdownFn& f, double x_,
                         double b_)
    : engine(&e), dd(&f), x(x_), b(b_) {
    if (x > b) throw DomainError("ExitProblem: requires x <= b");
    // xi(z) < z must hold on the working interval (equality allowed at x).
    if (x - f.xi(x) < 0.0)
        throw InvalidDrawdown("ExitProblem: xi(x) > x at the start point");
    for (int i = 1; i <= 4; ++i) {
        const double z = x + (b - x) * i / 4.0;
        if (z > x && !(z - f.xi(z) > 0.0))
            throw InvalidDrawdown("ExitProblem: xi(z) >= z inside [x, b]");
    }
}

double upcross_before_drawdown(const ExitProblem& p) {
    if (p.x == p.b) return 1.0;
    auto g = log_derivative_weight(*p.engine, *p.dd);
    if (singular_at(g, p.x, p.b - p.x)) return 0.0;  // W(xibar(x)) = 0 case
    numerics::QuadConfig cfg;
    return std::exp(-numerics::integrate(g, p.x, p.b, cfg));
}

double reflected_upcross_laplace_Y(const ScaleEngine& engine, double x, double b) {
    if (!(0.0 <= x && x <= b))
        throw DomainError("reflected_upcross_laplace_Y: requires 0 <= x <= b");
    return engine.Z(x) / engine.Z(b);
}

double killed_potential_density_X(const ScaleEngine& engine, double x, double c,
                                  double b, double y) {
    if (!(c < x && x < b))
        throw DomainError("killed_potential_density_X: requires c < x < b");
    if (y <= c || y >= b) return 0.0;
    return engine.W(x - c) / engine.W(b - c) * engine.W(b - y) - engine.W(x - y);
}

double reflected_potential_density_Y(const ScaleEngine& engine, double x, double b,
                                     double y) {
    if (!(0.0 <= x && x < b))
        throw DomainError("reflected_potential_density_Y: requires 0 <= x < b");
    if (y < 0.0 || y >= b) return 0.0;
    return engine.Z(x) / engine.Z(b) * engine.W(b - y) - engine.W(x - y);
}

double drawdown_functional(const ExitProblem& p, double theta,
                           const std::function<double(double)>& phi) {
    if (theta < 0.0) throw DomainError("drawdown_functional: theta must be >= 0");
    const ScaleEngine& e = *p.engine;
    const DrawdownFn& dd = *p.dd;
    const double q = e.q();
    const double psi_theta = e.model().psi(theta);
    auto g = log_derivative_weight(e, dd);
    auto outer = [&](double s, double w) {
        const double wd = width(dd, s);
        const double zt = e.Z_theta(wd, theta);
        const double ws = e.W(wd);
        const double ratio = e.W_prime(wd) / ws;
        return phi(s) * std::exp(theta * dd.xi(s)) * w *
               (ratio * zt - theta * zt - (q - psi_theta) * ws);
    };
    return weighted_outer(g, outer, p.x, p.x, p.b);
}

double drawdown_time_functional(const ExitProblem& p,
                                const std::function<double(double)>& phi) {
    const ScaleEngine& e = *p.engine;
    const DrawdownFn& dd = *p.dd;
    const double q = e.q();
    auto g = log_derivative_weight(e, dd);
    auto outer = [&](double s, double w) {
        const double wd = width(dd, s);
        const double ws = e.W(wd);
        return phi(s) * w * (e.W_prime(wd) / ws * e.Z(wd) - q * ws);
    };
    return weighted_outer(g, outer, p.x, p.x, p.b);
}

double drawdown_position_functional(const ExitProblem& p, double theta,
                                    const std::function<double(double)>& phi) {
    const ScaleEngine& e = *p.engine;
    if (e.q() != 0.0)
        throw QMismatch("drawdown_position_functional: needs the q = 0 engine");
    const DrawdownFn& dd = *p.dd;
    const double psi_theta = e.model().psi(theta);
    auto g = log_derivative_weight(e, dd);
    auto outer = [&](double s, double w) {
        const double wd = width(dd, s);
        const double zt = e.Z_theta(wd, theta);
        const double ws = e.W(wd);
        return phi(s) * std::exp(theta * dd.xi(s)) * w *
               (e.W_prime(wd) / ws * zt - theta * zt + psi_theta * ws);
    };
    return weighted_outer(g, outer, p.x, p.x, p.b);
}

double expected_overshoot_functional(const ExitProblem& p) {
    const ScaleEngine& e = *p.engine;
    const double mean_drift = e.model().psi_prime_at_zero();
    if (!std::isfinite(mean_drift))
        throw MeanUndefined("expected_overshoot_functional: psi'(0+) is infinite");
    const DrawdownFn& dd = *p.dd;
    auto g = log_derivative_weight(e, dd);
    auto outer = [&](double s, double w) {
        const double wd = width(dd, s);
        const double ws = e.W(wd);
        return w * (e.Z(wd) - mean_drift * ws -
                    (e.Zbar(wd) - mean_drift * e.Wbar(wd)) / ws * e.W_prime(wd));
    };
    return weighted_outer(g, outer, p.x, p.x, p.b);
}

double kappa_laplace(const ExitProblem& p) {
    if (p.x == p.b) return 1.0;
    // The identity is stated for q > 0; the q = 0 value is its continuous
    // limit (kappa is not discounted at all).
    if (p.engine->q() == 0.0) return 1.0;
    numerics::QuadConfig cfg;
    return std::exp(-numerics::integrate(kappa_weight(*p.engine, *p.dd), p.x, p.b, cfg));
}

DensityPoint potential_density_U(const ExitProblem& p, double u) {
    DensityPoint out{u, 0.0, 0.0};
    if (u >= p.b) return out;
    const ScaleEngine& e = *p.engine;
    const DrawdownFn& dd = *p.dd;
    auto g = kappa_weight(e, dd);
    numerics::QuadConfig cfg;
    if (u > p.x && u < p.b) {
        out.atom_at_start = std::exp(-numerics::integrate(g, p.x, u, cfg));
        out.value += e.W(0.0) * out.atom_at_start;
    }
    const double lo = std::max(p.x, u);
    auto outer = [&](double y, double w) {
        const double wd = width(dd, y);
        return w * (e.W_prime(y - u) - e.q() * e.W(wd) / e.Z(wd) * e.W(y - u));
    };
    for (const auto& [a, b] : dd.support_below(u, lo, p.b))
        out.value += weighted_outer(g, outer, p.x, a, b);
    return out;
}

double expected_injections(const ExitProblem& p) {
    const ScaleEngine& e = *p.engine;
    if (!(e.q() > 0.0))
        throw DomainError("expected_injections: requires q > 0");
    const double mean_drift = e.model().psi_prime_at_zero();
    if (!std::isfinite(mean_drift))
        throw MeanUndefined("expected_injections: psi'(0+) is infinite");
    if (p.x == p.b) return 0.0;
    const DrawdownFn& dd = *p.dd;
    auto g = kappa_weight(e, dd);
    auto outer = [&](double y, double w) {
        const double wd = width(dd, y);
        const double ws = e.W(wd);
        const double zs = e.Z(wd);
        return w * ((zs - mean_drift * ws) +
                    e.q() * ws / zs * (-e.Zbar(wd) + mean_drift * e.Wbar(wd)));
    };
    return weighted_outer(g, outer, p.x, p.x, p.b);
}

double injections_laplace(const ExitProblem& p, double theta) {
    if (!(theta > 0.0)) throw DomainError("injections_laplace: theta must be > 0");
    const ScaleEngine& e = *p.engine;
    if (e.q() != 0.0)
        throw QMismatch("injections_laplace: needs the q = 0 engine (or use "
                        "joint_exit_injection_laplace)");
    if (p.x == p.b) return 1.0;
    const DrawdownFn& dd = *p.dd;
    const double psi_theta = e.model().psi(theta);
    numerics::QuadConfig cfg;
    const double integral = numerics::integrate(
        [&](double y) {
            const double wd = width(dd, y);
            return theta - psi_theta * e.W(wd) / e.Z_theta(wd, theta);
        },
        p.x, p.b, cfg);
    return std::exp(-integral);
}

double joint_exit_injection_laplace(const ExitProblem& p, double theta) {
    const ScaleEngine& e = *p.engine;
    if (!(e.q() > 0.0))
        throw DomainError("joint_exit_injection_laplace: requires q > 0");
    if (theta == 0.0) return kappa_laplace(p);
    if (!(theta > 0.0))
        throw DomainError("joint_exit_injection_laplace: theta must be >= 0");
    if (p.x == p.b) return 1.0;
    const DrawdownFn& dd = *p.dd;
    const double psi_q_theta = e.model().psi(theta) - e.q();
    numerics::QuadConfig cfg;
    const double integral = numerics::integrate(
        [&](double y) {
            const double wd = width(dd, y);
            return theta - psi_q_theta * e.W(wd) / e.Z_theta(wd, theta);
        },
        p.x, p.b, cfg);
    return std::exp(-integral);
}

}  // namespace ddlevy::analytics
