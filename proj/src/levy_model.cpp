#include "ddlevy/levy_model.hpp"

#include <cmath>
#include <limits>

#include "ddlevy/numerics.hpp"

namespace ddlevy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Trapezoid-rule functional of the tabulated Levy measure:
// sum over the grid of f(x) nu(x) dx.
template <typename F>
auto trapz(const JumpSpec& j, F f) -> decltype(f(1.0)) {
    decltype(f(1.0)) acc{};
    for (std::size_t i = 0; i + 1 < j.grid.size(); ++i) {
        const double dx = j.grid[i + 1] - j.grid[i];
        acc += 0.5 * dx * (f(j.grid[i]) * j.values[i] + f(j.grid[i + 1]) * j.values[i + 1]);
    }
    return acc;
}

// int_0^1 x nu(x) dx with the cutoff panel split exactly at 1, so the
// compensator carries no half-panel bias when the grid straddles 1.
double small_jump_mean(const JumpSpec& j) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < j.grid.size(); ++i) {
        const double a = j.grid[i];
        if (a >= 1.0) break;
        const double b = std::min(j.grid[i + 1], 1.0);
        const double t = (b - j.grid[i]) / (j.grid[i + 1] - j.grid[i]);
        const double fb = j.values[i] + t * (j.values[i + 1] - j.values[i]);
        acc += 0.5 * (b - a) * (a * j.values[i] + b * fb);
    }
    return acc;
}

}  // namespace

LevyModel LevyModel::brownian(double gamma, double sigma2) {
    LevyModel m;
    m.kind_ = Kind::brownian;
    m.gamma_ = gamma;
    m.sigma2_ = sigma2;
    m.jumps_.kind = JumpSpec::Kind::none;
    m.finalize();
    return m;
}

LevyModel LevyModel::cramer_lundberg(double c, double lambda, double alpha) {
    if (!(lambda > 0.0) || !(alpha > 0.0))
        throw ConfigError("cramer_lundberg: lambda and alpha must be positive");
    LevyModel m;
    m.kind_ = Kind::cramer_lundberg;
    m.cl_c_ = c;
    m.sigma2_ = 0.0;
    m.jumps_.kind = JumpSpec::Kind::exponential_compound_poisson;
    m.jumps_.lambda = lambda;
    m.jumps_.alpha = alpha;
    // gamma in the Levy-Khintchine form with cutoff at 1, folded analytically:
    // psi(theta) = c theta - lambda theta / (theta + alpha)
    // corresponds to gamma = c - lambda int_0^1 x alpha e^{-alpha x} dx.
    m.gamma_ = c - lambda / alpha * (1.0 - std::exp(-alpha) * (1.0 + alpha));
    m.finalize();
    return m;
}

LevyModel LevyModel::tabulated(double gamma, double sigma2, JumpSpec jumps) {
    if (jumps.grid.size() != jumps.values.size() || jumps.grid.size() < 2)
        throw ConfigError("tabulated: grid/values must match and have >= 2 points");
    for (std::size_t i = 0; i < jumps.grid.size(); ++i) {
        if (jumps.values[i] < 0.0)
            throw ConfigError("tabulated: density must be nonnegative");
        if (i > 0 && jumps.grid[i] <= jumps.grid[i - 1])
            throw ConfigError("tabulated: grid must be strictly ascending");
    }
    if (jumps.grid.front() < 0.0)
        throw ConfigError("tabulated: jump sizes must be positive");
    LevyModel m;
    m.kind_ = Kind::tabulated;
    m.gamma_ = gamma;
    m.sigma2_ = sigma2;
    m.jumps_ = std::move(jumps);
    m.jumps_.kind = JumpSpec::Kind::tabulated_density;
    m.finalize();
    return m;
}

void LevyModel::finalize() {
    if (sigma2_ < 0.0) throw ConfigError("LevyModel: sigma2 must be nonnegative");
    const bool has_jumps = jumps_.kind != JumpSpec::Kind::none;
    if (sigma2_ == 0.0 && !has_jumps)
        throw ConfigError("LevyModel: a purely linear drift is not admissible");

    traits_.bounded_variation = (sigma2_ == 0.0);
    if (traits_.bounded_variation) {
        if (jumps_.kind == JumpSpec::Kind::exponential_compound_poisson) {
            traits_.drift_d = cl_c_;
        } else {
            traits_.drift_d = gamma_ + small_jump_mean(jumps_);
        }
        if (!(traits_.drift_d > 0.0))
            throw ConfigError("LevyModel: bounded-variation model must have positive drift");
        traits_.w_at_zero = 1.0 / traits_.drift_d;
    } else {
        traits_.w_at_zero = 0.0;
    }
}

double LevyModel::psi(double theta) const {
    if (theta < 0.0) throw DomainError("psi: theta must be nonnegative");
    return psi(std::complex<double>(theta, 0.0)).real();
}

std::complex<double> LevyModel::psi(std::complex<double> theta) const {
    switch (kind_) {
        case Kind::brownian:
            return gamma_ * theta + 0.5 * sigma2_ * theta * theta;
        case Kind::cramer_lundberg:
            return cl_c_ * theta - jumps_.lambda * theta / (theta + jumps_.alpha);
        case Kind::tabulated: {
            const std::complex<double> jump_part = trapz(jumps_, [&](double x) {
                return std::complex<double>(1.0) - std::exp(-theta * x);
            });
            return gamma_ * theta + 0.5 * sigma2_ * theta * theta - jump_part +
                   theta * small_jump_mean(jumps_);
        }
    }
    return {};
}

double LevyModel::psi_prime(double theta) const {
    if (theta < 0.0) throw DomainError("psi_prime: theta must be nonnegative");
    switch (kind_) {
        case Kind::brownian:
            return gamma_ + sigma2_ * theta;
        case Kind::cramer_lundberg: {
            const double d = theta + jumps_.alpha;
            return cl_c_ - jumps_.lambda * jumps_.alpha / (d * d);
        }
        case Kind::tabulated: {
            const double jump_part =
                trapz(jumps_, [&](double x) { return x * std::exp(-theta * x); });
            return gamma_ + sigma2_ * theta - jump_part + small_jump_mean(jumps_);
        }
    }
    return 0.0;
}

double LevyModel::psi_prime_at_zero() const {
    if (jumps_.heavy_tail) return -kInf;
    switch (kind_) {
        case Kind::brownian:
            return gamma_;
        case Kind::cramer_lundberg:
            return cl_c_ - jumps_.lambda / jumps_.alpha;
        case Kind::tabulated:
            return psi_prime(0.0);
    }
    return 0.0;
}

double LevyModel::phi(double q) const {
    if (q < 0.0) throw DomainError("phi: q must be nonnegative");
    // Start right of the minimizer of psi; psi' is increasing by convexity.
    double lo = 0.0;
    if (psi_prime(0.0) < 0.0)
        lo = numerics::find_root_increasing([this](double t) { return psi_prime(t); },
                                            0.0, 0.0);
    if (q == 0.0 && psi_prime_at_zero() >= 0.0) return 0.0;
    return numerics::find_root_increasing([this](double t) { return psi(t); }, q, lo);
}

LevyModel LevyModel::from_json(const nlohmann::json& doc) {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "bm") {
        return brownian(doc.at("gamma").get<double>(), doc.at("sigma2").get<double>());
    }
    if (kind == "cl") {
        return cramer_lundberg(doc.at("c").get<double>(),
                               doc.at("lambda").get<double>(),
                               doc.at("alpha").get<double>());
    }
    if (kind == "tabulated") {
        JumpSpec j;
        j.grid = doc.at("grid").get<std::vector<double>>();
        j.values = doc.at("values").get<std::vector<double>>();
        j.heavy_tail = doc.value("heavy_tail", false);
        return tabulated(doc.value("gamma", 0.0), doc.value("sigma2", 0.0),
                         std::move(j));
    }
    throw ConfigError("model config: unknown kind '" + kind + "'");
}

}  // namespace ddlevy
