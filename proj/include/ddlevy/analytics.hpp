#pragma once

// Closed-form and integral identities for the draw-down reflected process:
// baseline exit identities, the draw-down functionals, the upper-exit
// Laplace transform, the potential density, and the capital-injection
// functionals.

#include <functional>

#include "ddlevy/drawdown.hpp"
#include "ddlevy/scale_fn.hpp"

namespace ddlevy::analytics {

struct ExitProblem {
    const ScaleEngine* engine;
    const DrawdownFn* dd;
    double x;
    double b;

    ExitProblem(const ScaleEngine& e, const DrawdownFn& f, double x_, double b_);
};

struct DensityPoint {
    double u;
    double value;          // potential density at u
    double atom_at_start;  // coefficient multiplying W^(q)(0)
};

// E_x[e^{-q tau_b^+}; tau_b^+ < tau_xi] = exp(-int_x^b W'(xibar)/W(xibar)).
double upcross_before_drawdown(const ExitProblem& p);

// E_x[e^{-q sigma_b^+}] = Z(x)/Z(b) for the process reflected at 0.
double reflected_upcross_laplace_Y(const ScaleEngine& engine, double x, double b);

// Potential density of X killed on exiting (c, b).
double killed_potential_density_X(const ScaleEngine& engine, double x, double c,
                                  double b, double y);

// Potential density of Y (reflected at 0) killed on up-crossing b.
double reflected_potential_density_Y(const ScaleEngine& engine, double x, double b,
                                     double y);

// E_x[e^{-q tau_xi} e^{theta X(tau_xi)} phi(Xbar(tau_xi)); tau_xi < tau_b^+].
double drawdown_functional(const ExitProblem& p, double theta,
                           const std::function<double(double)>& phi);

// theta = 0 specialization of the above.
double drawdown_time_functional(const ExitProblem& p,
                                const std::function<double(double)>& phi);

// Zero-discount specialization; the engine must carry q = 0.
double drawdown_position_functional(const ExitProblem& p, double theta,
                                    const std::function<double(double)>& phi);

// E_x[e^{-q tau_xi} (xi(Xbar(tau_xi)) - X(tau_xi)); tau_xi < tau_b^+].
double expected_overshoot_functional(const ExitProblem& p);

// E_x e^{-q kappa_b^+} = exp(-int_x^b q W(xibar)/Z(xibar)).
double kappa_laplace(const ExitProblem& p);

// Potential density of the draw-down reflected process at u.
DensityPoint potential_density_U(const ExitProblem& p, double u);

// Expected discounted capital injections V_xi(x; b).
double expected_injections(const ExitProblem& p);

// Laplace transform of total injections at kappa_b^+; engine must be q = 0.
double injections_laplace(const ExitProblem& p, double theta);

// E_x e^{-q kappa_b^+ - theta R(kappa_b^+)} via the killed-process form.
double joint_exit_injection_laplace(const ExitProblem& p, double theta);

}  // namespace ddlevy::analytics
