#include "ddlevy/scale_fn.hpp"

#include <cmath>

namespace ddlevy {

namespace {

// int_0^x e^{t z} dz, stable near t = 0.
double e0(double t, double x) {
    if (std::abs(t * x) < 1e-4) {
        const double u = t * x;
        return x * (1.0 + u / 2.0 + u * u / 6.0 + u * u * u / 24.0);
    }
    return std::expm1(t * x) / t;
}

// int_0^x z e^{t z} dz.
double e1(double t, double x) {
    if (std::abs(t * x) < 1e-4) {
        const double u = t * x;
        return x * x * (0.5 + u / 3.0 + u * u / 8.0);
    }
    return (x * std::exp(t * x) - e0(t, x)) / t;
}

// int_0^x e0(t, z) dz.
double f0(double t, double x) {
    if (std::abs(t * x) < 1e-4) {
        const double u = t * x;
        return x * x * (0.5 + u / 6.0 + u * u / 24.0);
    }
    return (e0(t, x) - x) / t;
}

// int_0^x e1(t, z) dz.
double f1(double t, double x) {
    if (std::abs(t * x) < 1e-4) {
        const double u = t * x;
        return x * x * x * (1.0 / 6.0 + u / 12.0 + u * u / 40.0);
    }
    return (e1(t, x) - f0(t, x)) / t;
}

}  // namespace

namespace {
ScaleEngine::Backend default_backend(const LevyModel& m);
}  // namespace

ScaleEngine::ScaleEngine(LevyModel model, double q)
    : ScaleEngine(model, q, default_backend(model)) {}

namespace {
ScaleEngine::Backend default_backend(const LevyModel& m) {
    switch (m.kind()) {
        case LevyModel::Kind::brownian:
            return ScaleEngine::Backend::closed_form_bm;
        case LevyModel::Kind::cramer_lundberg:
            return ScaleEngine::Backend::closed_form_cl;
        default:
            return ScaleEngine::Backend::inversion;
    }
}
}  // namespace

ScaleEngine::ScaleEngine(LevyModel model, double q, Backend backend,
                         numerics::InversionConfig icfg, numerics::QuadConfig qcfg)
    : model_(std::move(model)), q_(q), backend_(backend), icfg_(icfg), qcfg_(qcfg) {
    if (q_ < 0.0) throw DomainError("ScaleEngine: q must be nonnegative");
    if (backend_ == Backend::closed_form_bm && model_.kind() != LevyModel::Kind::brownian)
        throw ConfigError("ScaleEngine: closed_form_bm backend needs a Brownian model");
    if (backend_ == Backend::closed_form_cl &&
        model_.kind() != LevyModel::Kind::cramer_lundberg)
        throw ConfigError("ScaleEngine: closed_form_cl backend needs a CL model");
    phi_q_ = model_.phi(q_);
    w0_ = model_.traits().w_at_zero;
    if (backend_ == Backend::inversion) {
        // Inverted W carries O(1e-11) contour noise; chasing tighter
        // quadrature tolerances than that only exhausts the subdivision budget.
        qcfg_.rel_tol = std::max(qcfg_.rel_tol, 1e-8);
        qcfg_.abs_tol = std::max(qcfg_.abs_tol, 1e-10);
    } else {
        build_closed_form();
    }
}

void ScaleEngine::build_closed_form() {
    terms_.clear();
    if (backend_ == Backend::closed_form_bm) {
        const double s2 = model_.sigma2();
        const double g = model_.gamma();
        const double s = std::sqrt(g * g + 2.0 * q_ * s2);
        if (s > 0.0) {
            const double tp = (-g + s) / s2;
            const double tm = (-g - s) / s2;
            terms_.push_back({1.0 / s, tp, 0});
            terms_.push_back({-1.0 / s, tm, 0});
        } else {
            // q = 0, driftless: 1/psi = (2/sigma2)/theta^2, so W(x) = 2x/sigma2.
            terms_.push_back({2.0 / s2, 0.0, 1});
        }
        return;
    }
    // Cramer-Lundberg: 1/(psi - q) = (theta + alpha) / P(theta) with
    // P(theta) = c theta^2 + (c alpha - lambda - q) theta - q alpha.
    const double c = model_.cl_c();
    const double la = model_.cl_lambda();
    const double al = model_.cl_alpha();
    const double b1 = c * al - la - q_;
    const double disc = b1 * b1 + 4.0 * c * q_ * al;
    const double sd = std::sqrt(std::max(disc, 0.0));
    if (sd > 1e-12 * std::max({1.0, std::abs(b1), c * al})) {
        const double t1 = (-b1 + sd) / (2.0 * c);
        const double t2 = (-b1 - sd) / (2.0 * c);
        terms_.push_back({(t1 + al) / (c * (t1 - t2)), t1, 0});
        terms_.push_back({(t2 + al) / (c * (t2 - t1)), t2, 0});
    } else {
        const double ts = -b1 / (2.0 * c);  // double root
        terms_.push_back({1.0 / c, ts, 0});
        terms_.push_back({(ts + al) / c, ts, 1});
    }
}

double ScaleEngine::w_inversion(double x) const {
    {
        std::lock_guard<std::mutex> lk(memo_mu_);
        auto it = memo_.find(x);
        if (it != memo_.end()) return it->second;
    }
    // Shift past Phi(q) so every singularity sits left of the contour.
    const double c0 = phi_q_ + 1.0;
    auto shifted = [this, c0](std::complex<double> s) {
        return 1.0 / (model_.psi(s + c0) - q_);
    };
    const double w = std::exp(c0 * x) * numerics::invert_laplace(shifted, x, icfg_);
    std::lock_guard<std::mutex> lk(memo_mu_);
    memo_.emplace(x, w);
    return w;
}

double ScaleEngine::W(double x) const {
    if (x < 0.0) return 0.0;
    if (backend_ == Backend::inversion) {
        if (x == 0.0) return w0_;  // inversion is unreliable at the jump
        return w_inversion(x);
    }
    double acc = 0.0;
    for (const auto& t : terms_)
        acc += t.coef * (t.power == 0 ? 1.0 : x) * std::exp(t.theta * x);
    return acc;
}

double ScaleEngine::W_prime(double x) const {
    if (!(x > 0.0) && !model_.traits().bounded_variation)
        throw DomainError("W_prime: x must be positive for unbounded variation");
    if (backend_ == Backend::inversion) {
        const double h = 1e-4 * std::max(1.0, x);
        if (x > h) return (w_inversion(x + h) - w_inversion(x - h)) / (2.0 * h);
        // one-sided away from the origin
        return (w_inversion(x + h) - W(x)) / h;
    }
    double acc = 0.0;
    for (const auto& t : terms_) {
        const double base = std::exp(t.theta * x);
        acc += t.coef * base *
               (t.power == 0 ? t.theta : (1.0 + t.theta * x));
    }
    return acc;
}

double ScaleEngine::Wbar(double x) const {
    if (x <= 0.0) return 0.0;
    if (backend_ == Backend::inversion)
        return numerics::integrate([this](double z) { return W(z); }, 0.0, x, qcfg_);
    double acc = 0.0;
    for (const auto& t : terms_)
        acc += t.coef * (t.power == 0 ? e0(t.theta, x) : e1(t.theta, x));
    return acc;
}

double ScaleEngine::Z(double x) const {
    if (x <= 0.0) return 1.0;
    return 1.0 + q_ * Wbar(x);
}

double ScaleEngine::Zbar(double x) const {
    if (x <= 0.0) return 0.0;
    if (backend_ == Backend::inversion) {
        // int_0^x int_0^z W = int_0^x (x - z) W(z) dz
        const double inner = numerics::integrate(
            [this, x](double z) { return (x - z) * W(z); }, 0.0, x, qcfg_);
        return x + q_ * inner;
    }
    double acc = 0.0;
    for (const auto& t : terms_)
        acc += t.coef * (t.power == 0 ? f0(t.theta, x) : f1(t.theta, x));
    return x + q_ * acc;
}

double ScaleEngine::Z_theta(double x, double theta) const {
    if (x < 0.0 || theta < 0.0)
        throw DomainError("Z_theta: x and theta must be nonnegative");
    if (x == 0.0) return 1.0;
    const double psi_gap = model_.psi(theta) - q_;
    double j = 0.0;
    if (backend_ == Backend::inversion) {
        j = numerics::integrate(
            [this, theta](double z) { return std::exp(-theta * z) * W(z); }, 0.0, x,
            qcfg_);
    } else {
        for (const auto& t : terms_) {
            const double shifted = t.theta - theta;
            j += t.coef * (t.power == 0 ? e0(shifted, x) : e1(shifted, x));
        }
    }
    return std::exp(theta * x) * (1.0 - psi_gap * j);
}

}  // namespace ddlevy
