#pragma once

// Monte Carlo oracles for the draw-down reflected process. Paths are built
// from the reflection-segment recursion: run X until it falls below
// xi(running max), freeze the level, apply Skorokhod reflection there, and
// close the segment when the reflected value climbs past the frozen running
// max. Estimates are deterministic functions of (seed, n_paths, config)
// regardless of thread count.

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ddlevy/drawdown.hpp"
#include "ddlevy/levy_model.hpp"

namespace ddlevy::sim {

enum class Scheme { exact_bm, exact_cl, euler };
enum class StopRule { at_kappa, at_horizon };

struct PathConfig {
    double dt = 1e-3;          // grid step (ignored by exact_cl)
    double horizon_cap = 50.0; // censoring horizon
    std::uint64_t seed = 1;
    Scheme scheme = Scheme::exact_bm;

    void validate() const;
    static PathConfig from_json(const nlohmann::json& doc);
};

struct PathRecord {
    std::vector<double> times;
    std::vector<double> x;     // unregulated process X
    std::vector<double> xbar;  // running supremum of X
    std::vector<double> u;     // reflected process U
    std::vector<double> ubar;  // running supremum of U
    std::vector<double> r;     // cumulative injections R(t)
    std::vector<std::pair<double, double>> epochs;  // (tau_xi_n, T_n)
    bool censored = false;
    double kappa = std::numeric_limits<double>::infinity();
};

struct McEstimate {
    double mean = 0.0;
    double std_err = 0.0;  // sample std / sqrt(n_paths)
    long n_paths = 0;
    std::string bias_note;
};

struct BundleEstimate {
    McEstimate kappa;                // E e^{-q kappa_b^+}
    McEstimate injections;           // E int e^{-qt} dR(t)
    McEstimate injections_laplace;   // E e^{-theta R(kappa_b^+)}
};

// One trajectory; b only matters under StopRule::at_kappa.
PathRecord simulate_path(const LevyModel& model, const DrawdownFn& dd, double x0,
                         StopRule stop, double b, const PathConfig& cfg,
                         std::uint64_t path_index = 0);

McEstimate estimate_kappa_laplace(const LevyModel& model, const DrawdownFn& dd,
                                  double x, double b, double q, long n_paths,
                                  const PathConfig& cfg);

McEstimate estimate_injections(const LevyModel& model, const DrawdownFn& dd,
                               double x, double b, double q, long n_paths,
                               const PathConfig& cfg);

McEstimate estimate_injections_laplace(const LevyModel& model, const DrawdownFn& dd,
                                       double x, double b, double theta,
                                       long n_paths, const PathConfig& cfg);

McEstimate estimate_potential_mass(const LevyModel& model, const DrawdownFn& dd,
                                   double x, double b, double q, double u1,
                                   double u2, long n_paths, const PathConfig& cfg);

// E[e^{-q tau_xi}(xi(Xbar) - X(tau_xi)); tau_xi < tau_b^+] for the raw process.
McEstimate estimate_overshoot_functional(const LevyModel& model, const DrawdownFn& dd,
                                         double x, double b, double q, long n_paths,
                                         const PathConfig& cfg);

// E e^{-q T_n} for n = 1..max_n (no upper barrier; censored paths contribute
// e^{-q horizon}).
std::vector<McEstimate> estimate_epoch_laplace(const LevyModel& model,
                                               const DrawdownFn& dd, double x,
                                               double q, int max_n, long n_paths,
                                               const PathConfig& cfg);

// Shares one path set across the three kappa_b^+ functionals.
BundleEstimate estimate_bundle(const LevyModel& model, const DrawdownFn& dd,
                               double x, double b, double q, double theta,
                               long n_paths, const PathConfig& cfg);

}  // namespace ddlevy::sim
