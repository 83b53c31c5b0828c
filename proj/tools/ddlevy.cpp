// ddlevy: evaluate draw-down exit functionals analytically, estimate them by
// Monte Carlo, and emit analytic-vs-MC comparison tables.
//
// Exit codes: 0 success, 1 statistical disagreement (compare), 2 config
// error, 3 numeric non-convergence.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ddlevy/analytics.hpp"
#include "ddlevy/drawdown.hpp"
#include "ddlevy/errors.hpp"
#include "ddlevy/levy_model.hpp"
#include "ddlevy/scale_fn.hpp"
#include "ddlevy/simulator.hpp"

namespace {

using nlohmann::json;
using namespace ddlevy;

bool log_enabled() {
    const char* v = std::getenv("DDLEVY_LOG");
    return v != nullptr && v[0] != '\0';
}

void log_line(const std::string& msg) {
    if (log_enabled()) std::cerr << "[ddlevy] " << msg << "\n";
}

std::string fmt9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

json load_spec(const std::string& path) {
    json doc;
    if (path == "-") {
        std::cin >> doc;
        return doc;
    }
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open spec file: " + path);
    in >> doc;
    return doc;
}

struct Overrides {
    std::optional<double> q, x, b;
    std::optional<std::uint64_t> seed;
};

struct RunSpec {
    json doc;
    std::string quantity;
    double x = 0.0, b = 0.0, q = 0.0, theta = 0.0;
    double u1 = 0.0, u2 = 0.0;
    std::vector<double> u_grid;
    std::string variant;  // lemma-functional: general | time | position | overshoot

    long n_paths = 10000;
    sim::PathConfig mc_cfg;

    LevyModel model() const { return LevyModel::from_json(doc.at("model")); }
    DrawdownFn drawdown() const { return DrawdownFn::from_json(doc.at("drawdown")); }
};

RunSpec parse_spec(const json& doc, const Overrides& ov) {
    RunSpec s;
    s.doc = doc;
    if (!doc.contains("model")) throw ConfigError("spec: missing \"model\"");
    if (!doc.contains("drawdown")) throw ConfigError("spec: missing \"drawdown\"");
    s.quantity = doc.value("quantity", std::string("kappa-laplace"));
    const json params = doc.value("params", json::object());
    s.x = params.value("x", 0.0);
    s.b = params.value("b", 1.0);
    s.q = params.value("q", 0.0);
    s.theta = params.value("theta", 0.0);
    s.variant = params.value("variant", std::string("general"));
    if (params.contains("u_grid"))
        s.u_grid = params.at("u_grid").get<std::vector<double>>();
    s.u1 = params.value("u1", s.u_grid.empty() ? 0.0 : s.u_grid.front());
    s.u2 = params.value("u2", s.u_grid.empty() ? s.b : s.u_grid.back());
    if (doc.contains("mc")) {
        const json& mc = doc.at("mc");
        s.n_paths = mc.value("n_paths", 10000L);
        s.mc_cfg = sim::PathConfig::from_json(mc);
        if (!mc.contains("horizon_cap"))
            s.mc_cfg.horizon_cap = s.q > 0.0 ? std::max(20.0, 13.9 / s.q) : 50.0;
    } else {
        s.mc_cfg.horizon_cap = s.q > 0.0 ? std::max(20.0, 13.9 / s.q) : 50.0;
    }
    if (ov.q) s.q = *ov.q;
    if (ov.x) s.x = *ov.x;
    if (ov.b) s.b = *ov.b;
    if (ov.seed) s.mc_cfg.seed = *ov.seed;
    if (s.x > s.b) throw ConfigError("spec: requires x <= b");
    return s;
}

// Scalar analytic value for every quantity except the density table.
double analytic_value(const RunSpec& s, const LevyModel& model,
                      const DrawdownFn& dd) {
    if (s.quantity == "kappa-laplace") {
        ScaleEngine eng(model, s.q);
        return analytics::kappa_laplace({eng, dd, s.x, s.b});
    }
    if (s.quantity == "expected-injections") {
        ScaleEngine eng(model, s.q);
        return analytics::expected_injections({eng, dd, s.x, s.b});
    }
    if (s.quantity == "injections-laplace") {
        ScaleEngine eng(model, 0.0);
        return analytics::injections_laplace({eng, dd, s.x, s.b}, s.theta);
    }
    if (s.quantity == "joint-laplace") {
        ScaleEngine eng(model, s.q);
        return analytics::joint_exit_injection_laplace({eng, dd, s.x, s.b}, s.theta);
    }
    if (s.quantity == "potential-density") {
        // mass over [u1, u2]
        ScaleEngine eng(model, s.q);
        analytics::ExitProblem p(eng, dd, s.x, s.b);
        numerics::QuadConfig cfg;
        cfg.rel_tol = 1e-8;
        return numerics::integrate(
            [&](double u) { return analytics::potential_density_U(p, u).value; },
            s.u1, s.u2, cfg);
    }
    if (s.quantity == "lemma-functional") {
        auto one = [](double) { return 1.0; };
        if (s.variant == "time") {
            ScaleEngine eng(model, s.q);
            return analytics::drawdown_time_functional({eng, dd, s.x, s.b}, one);
        }
        if (s.variant == "position") {
            ScaleEngine eng(model, 0.0);
            return analytics::drawdown_position_functional({eng, dd, s.x, s.b},
                                                           s.theta, one);
        }
        if (s.variant == "overshoot") {
            ScaleEngine eng(model, s.q);
            return analytics::expected_overshoot_functional({eng, dd, s.x, s.b});
        }
        ScaleEngine eng(model, s.q);
        return analytics::drawdown_functional({eng, dd, s.x, s.b}, s.theta, one);
    }
    throw ConfigError("spec: unknown quantity '" + s.quantity + "'");
}

sim::McEstimate mc_value(const RunSpec& s, const LevyModel& model,
                         const DrawdownFn& dd) {
    if (s.quantity == "kappa-laplace")
        return sim::estimate_kappa_laplace(model, dd, s.x, s.b, s.q, s.n_paths,
                                           s.mc_cfg);
    if (s.quantity == "expected-injections")
        return sim::estimate_injections(model, dd, s.x, s.b, s.q, s.n_paths,
                                        s.mc_cfg);
    if (s.quantity == "injections-laplace")
        return sim::estimate_injections_laplace(model, dd, s.x, s.b, s.theta,
                                                s.n_paths, s.mc_cfg);
    if (s.quantity == "potential-density")
        return sim::estimate_potential_mass(model, dd, s.x, s.b, s.q, s.u1, s.u2,
                                            s.n_paths, s.mc_cfg);
    if (s.quantity == "lemma-functional" && s.variant == "overshoot")
        return sim::estimate_overshoot_functional(model, dd, s.x, s.b, s.q,
                                                  s.n_paths, s.mc_cfg);
    throw ConfigError("spec: no Monte Carlo estimator for quantity '" + s.quantity +
                      "'");
}

int cmd_eval(const RunSpec& s) {
    const LevyModel model = s.model();
    const DrawdownFn dd = s.drawdown();
    if (s.quantity == "potential-density" && !s.u_grid.empty()) {
        ScaleEngine eng(model, s.q);
        analytics::ExitProblem p(eng, dd, s.x, s.b);
        std::printf("u,value\n");
        for (double u : s.u_grid) {
            const auto pt = analytics::potential_density_U(p, u);
            std::printf("%s,%s\n", fmt9(u).c_str(), fmt9(pt.value).c_str());
        }
        return 0;
    }
    const double v = analytic_value(s, model, dd);
    std::printf("%s = %s  (est. quadrature error %s)\n", s.quantity.c_str(),
                fmt9(v).c_str(), fmt9(std::abs(v) * 1e-8 + 1e-12).c_str());
    return 0;
}

int cmd_mc(const RunSpec& s) {
    const LevyModel model = s.model();
    const DrawdownFn dd = s.drawdown();
    log_line("mc: " + s.quantity + " n_paths=" + std::to_string(s.n_paths));
    const sim::McEstimate e = mc_value(s, model, dd);
    std::printf("quantity,estimate,stderr,n_paths,bias_note\n");
    std::printf("%s,%s,%s,%ld,%s\n", s.quantity.c_str(), fmt9(e.mean).c_str(),
                fmt9(e.std_err).c_str(), e.n_paths, e.bias_note.c_str());
    return 0;
}

int cmd_compare(const RunSpec& base, const Overrides& ov) {
    std::vector<std::string> quantities;
    if (base.doc.contains("quantities"))
        quantities = base.doc.at("quantities").get<std::vector<std::string>>();
    else
        quantities.push_back(base.quantity);
    const LevyModel model = base.model();
    const DrawdownFn dd = base.drawdown();
    std::printf("quantity,analytic,mc,stderr,z\n");
    bool disagree = false;
    for (const std::string& qty : quantities) {
        RunSpec s = base;
        s.quantity = qty;
        (void)ov;
        log_line("compare: " + qty);
        const double an = analytic_value(s, model, dd);
        const sim::McEstimate e = mc_value(s, model, dd);
        const double z = e.std_err > 0.0 ? (e.mean - an) / e.std_err : 0.0;
        std::printf("%s,%s,%s,%s,%s\n", qty.c_str(), fmt9(an).c_str(),
                    fmt9(e.mean).c_str(), fmt9(e.std_err).c_str(), fmt9(z).c_str());
        if (std::abs(z) > 4.0) disagree = true;
    }
    return disagree ? 1 : 0;
}

int cmd_dump_path(const RunSpec& s, const std::string& out) {
    const LevyModel model = s.model();
    const DrawdownFn dd = s.drawdown();
    const sim::PathRecord rec = sim::simulate_path(model, dd, s.x,
                                                   sim::StopRule::at_kappa, s.b,
                                                   s.mc_cfg);
    std::ofstream os(out);
    if (!os) throw ConfigError("cannot open output file: " + out);
    os << "t,x,xbar,u,ubar,r\n";
    for (std::size_t i = 0; i < rec.times.size(); ++i)
        os << fmt9(rec.times[i]) << ',' << fmt9(rec.x[i]) << ','
           << fmt9(rec.xbar[i]) << ',' << fmt9(rec.u[i]) << ','
           << fmt9(rec.ubar[i]) << ',' << fmt9(rec.r[i]) << '\n';
    std::ofstream es(out + ".epochs.csv");
    es << "n,tau_xi,T_n\n";
    for (std::size_t i = 0; i < rec.epochs.size(); ++i)
        es << (i + 1) << ',' << fmt9(rec.epochs[i].first) << ','
           << fmt9(rec.epochs[i].second) << '\n';
    std::printf("wrote %zu points, %zu epochs, censored=%d\n", rec.times.size(),
                rec.epochs.size(), rec.censored ? 1 : 0);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"draw-down reflected Levy process calculator"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string out_path = "path.csv";
    double ov_q = 0, ov_x = 0, ov_b = 0;
    std::uint64_t ov_seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("spec", spec_path, "JSON run spec (or - for stdin)")
            ->required();
        sub->add_option("--q", ov_q, "override discount rate q");
        sub->add_option("--x", ov_x, "override start level x");
        sub->add_option("--b", ov_b, "override upper barrier b");
        sub->add_option("--seed", ov_seed, "override RNG seed");
    };
    CLI::App* c_eval = app.add_subcommand("eval", "evaluate analytically");
    CLI::App* c_mc = app.add_subcommand("mc", "Monte Carlo estimate");
    CLI::App* c_cmp = app.add_subcommand("compare", "analytic vs MC table");
    CLI::App* c_dump = app.add_subcommand("dump-path", "write one path as CSV");
    add_common(c_eval);
    add_common(c_mc);
    add_common(c_cmp);
    add_common(c_dump);
    c_dump->add_option("--out", out_path, "output CSV file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        Overrides ov;
        CLI::App* sub = app.get_subcommands().front();
        if (sub->count("--q")) ov.q = ov_q;
        if (sub->count("--x")) ov.x = ov_x;
        if (sub->count("--b")) ov.b = ov_b;
        if (sub->count("--seed")) ov.seed = ov_seed;
        const RunSpec spec = parse_spec(load_spec(spec_path), ov);
        if (sub == c_eval) return cmd_eval(spec);
        if (sub == c_mc) return cmd_mc(spec);
        if (sub == c_cmp) return cmd_compare(spec, ov);
        if (sub == c_dump) return cmd_dump_path(spec, out_path);
        return 2;
    } catch (const NonConvergence& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const SubdivisionLimit& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const BracketFailure& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}
