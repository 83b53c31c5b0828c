#pragma once

// Catalog of spectrally negative Levy models: Brownian motion with drift,
// Cramer-Lundberg with exponential claims, and a tabulated jump density.
// Evaluates the Laplace exponent psi, its derivative, and the right
// inverse Phi(q).

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddlevy/errors.hpp"

namespace ddlevy {

struct JumpSpec {
    enum class Kind { none, exponential_compound_poisson, tabulated_density };
    Kind kind = Kind::none;
    // exponential_compound_poisson: rate lambda, jump sizes Exp(alpha).
    double lambda = 0.0;
    double alpha = 0.0;
    // tabulated_density: nonnegative density values of the Levy measure on an
    // ascending grid; integrated by the trapezoid rule over the grid.
    std::vector<double> grid;
    std::vector<double> values;
    bool heavy_tail = false;  // declares E|jump| = infinity for analytics
};

struct ModelTraits {
    bool bounded_variation = false;
    double w_at_zero = 0.0;  // W^(q)(0+), independent of q
    double drift_d = 0.0;    // only meaningful for bounded variation
};

class LevyModel {
  public:
    enum class Kind { brownian, cramer_lundberg, tabulated };

    static LevyModel brownian(double gamma, double sigma2);
    static LevyModel cramer_lundberg(double c, double lambda, double alpha);
    static LevyModel tabulated(double gamma, double sigma2, JumpSpec jumps);

    // {"kind":"bm","gamma":..,"sigma2":..} |
    // {"kind":"cl","c":..,"lambda":..,"alpha":..} |
    // {"kind":"tabulated","gamma":..,"sigma2":..,"grid":[..],"values":[..]}
    static LevyModel from_json(const nlohmann::json& doc);

    Kind kind() const { return kind_; }
    double gamma() const { return gamma_; }
    double sigma2() const { return sigma2_; }
    const JumpSpec& jumps() const { return jumps_; }

    // Cramer-Lundberg accessors (premium rate / claim arrival / claim decay).
    double cl_c() const { return cl_c_; }
    double cl_lambda() const { return jumps_.lambda; }
    double cl_alpha() const { return jumps_.alpha; }

    double psi(double theta) const;
    std::complex<double> psi(std::complex<double> theta) const;
    double psi_prime(double theta) const;
    double psi_prime_at_zero() const;  // -inf sentinel when the mean is undefined
    double phi(double q) const;        // largest root of psi(theta) = q

    ModelTraits traits() const { return traits_; }

  private:
    LevyModel() = default;
    void finalize();

    Kind kind_ = Kind::brownian;
    double gamma_ = 0.0;
    double sigma2_ = 0.0;
    double cl_c_ = 0.0;
    JumpSpec jumps_;
    ModelTraits traits_;
};

}  // namespace ddlevy
