#pragma once

// Scale-function family {W^(q), W^(q)', Z^(q), Z^(q)(.,theta), Wbar, Zbar}
// for one model and one q. Brownian and Cramer-Lundberg models use exact
// two-exponential representations; everything else inverts the Laplace
// transform 1/(psi(theta) - q) numerically.

#include <map>
#include <mutex>
#include <vector>

#include "ddlevy/levy_model.hpp"
#include "ddlevy/numerics.hpp"

namespace ddlevy {

class ScaleEngine {
  public:
    enum class Backend { closed_form_bm, closed_form_cl, inversion };

    ScaleEngine(LevyModel model, double q);
    ScaleEngine(LevyModel model, double q, Backend backend,
                numerics::InversionConfig icfg = {},
                numerics::QuadConfig qcfg = {});

    const LevyModel& model() const { return model_; }
    double q() const { return q_; }
    Backend backend() const { return backend_; }
    double phi_q() const { return phi_q_; }

    double W(double x) const;        // 0 for x < 0
    double W_prime(double x) const;  // x > 0
    double Z(double x) const;        // 1 for x <= 0
    double Z_theta(double x, double theta) const;
    double Wbar(double x) const;     // int_0^x W
    double Zbar(double x) const;     // int_0^x Z

  private:
    // coef * x^power * e^{theta x}, power in {0, 1}
    struct Term {
        double coef;
        double theta;
        int power;
    };

    void build_closed_form();
    double w_inversion(double x) const;

    LevyModel model_;
    double q_ = 0.0;
    Backend backend_;
    numerics::InversionConfig icfg_;
    numerics::QuadConfig qcfg_;
    double phi_q_ = 0.0;
    double w0_ = 0.0;
    std::vector<Term> terms_;

    mutable std::mutex memo_mu_;
    mutable std::map<double, double> memo_;
};

}  // namespace ddlevy
