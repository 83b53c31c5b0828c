#include "ddlevy/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace ddlevy::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path_index) {
    // substream keyed by (seed, path index) so scheduling cannot matter
    return std::mt19937_64(splitmix64(seed ^ splitmix64(path_index + 1)));
}

// Deterministic order-independent reduction.
double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

McEstimate reduce(const std::vector<double>& vals, std::string note) {
    McEstimate e;
    e.n_paths = static_cast<long>(vals.size());
    e.bias_note = std::move(note);
    if (vals.empty()) return e;
    e.mean = pairwise_sum(vals.data(), vals.size()) / static_cast<double>(vals.size());
    if (vals.size() > 1) {
        std::vector<double> dev(vals.size());
        for (std::size_t i = 0; i < vals.size(); ++i) {
            const double d = vals[i] - e.mean;
            dev[i] = d * d;
        }
        const double var = pairwise_sum(dev.data(), dev.size()) /
                           static_cast<double>(vals.size() - 1);
        e.std_err = std::sqrt(var / static_cast<double>(vals.size()));
    }
    return e;
}

template <class Fn>
void parallel_paths(long n_paths, Fn&& per_path) {
    unsigned n_threads = std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, 16u);
    if (n_paths < 512) n_threads = 1;
    if (n_threads == 1) {
        for (long i = 0; i < n_paths; ++i) per_path(i);
        return;
    }
    std::atomic<long> next{0};
    constexpr long kBlock = 256;
    auto worker = [&] {
        for (;;) {
            const long start = next.fetch_add(kBlock);
            if (start >= n_paths) return;
            const long stop = std::min(start + kBlock, n_paths);
            for (long i = start; i < stop; ++i) per_path(i);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

// Conditional minimum of a Brownian bridge over one step.
double bridge_min(double x0, double x1, double sig2dt, double uniform) {
    const double d = x1 - x0;
    return 0.5 * (x0 + x1 - std::sqrt(d * d - 2.0 * sig2dt * std::log(uniform)));
}

double bridge_max(double x0, double x1, double sig2dt, double uniform) {
    const double d = x1 - x0;
    return 0.5 * (x0 + x1 + std::sqrt(d * d - 2.0 * sig2dt * std::log(uniform)));
}

struct Opts {
    double b = kInf;   // upper barrier; kInf disables kappa stopping
    double q = 0.0;
    double occ_lo = 0.0, occ_hi = -1.0;  // occupation window when lo <= hi
    int max_epochs = 0;                  // stop once this many T_n collected
    PathRecord* rec = nullptr;
};

struct Stats {
    double kappa = kInf;
    bool censored = false;
    double disc_r = 0.0;   // int e^{-qt} dR
    double total_r = 0.0;  // R at stop
    double occ = 0.0;      // int e^{-qt} 1{U in window} dt
    std::vector<double> epoch_times;
};

// Jump sampler for the Euler scheme.
struct JumpSampler {
    double rate = 0.0;
    double exp_alpha = 0.0;               // exponential sizes when > 0
    std::vector<double> grid, cdf, dens;  // tabulated density otherwise

    static JumpSampler make(const LevyModel& m) {
        JumpSampler s;
        const JumpSpec& j = m.jumps();
        if (j.kind == JumpSpec::Kind::exponential_compound_poisson) {
            s.rate = j.lambda;
            s.exp_alpha = j.alpha;
        } else if (j.kind == JumpSpec::Kind::tabulated_density) {
            s.grid = j.grid;
            s.dens = j.values;
            s.cdf.assign(s.grid.size(), 0.0);
            for (std::size_t i = 1; i < s.grid.size(); ++i)
                s.cdf[i] = s.cdf[i - 1] + 0.5 * (s.dens[i] + s.dens[i - 1]) *
                                              (s.grid[i] - s.grid[i - 1]);
            s.rate = s.cdf.back();
        }
        return s;
    }

    template <class Rng>
    double draw(Rng& rng, std::uniform_real_distribution<double>& unif) const {
        if (exp_alpha > 0.0) {
            return -std::log(1.0 - unif(rng)) / exp_alpha;
        }
        const double target = unif(rng) * cdf.back();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
        const std::size_t i =
            std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()),
                                  cdf.size() - 1);
        const double a = grid[i - 1], b = grid[i];
        const double m = target - cdf[i - 1];
        const double f0 = dens[i - 1];
        const double slope = (dens[i] - f0) / (b - a);
        // invert the piecewise-quadratic cdf on the panel
        if (std::abs(slope) < 1e-14 * std::max(1.0, f0))
            return a + (f0 > 0.0 ? m / f0 : 0.5 * (b - a));
        const double disc = f0 * f0 + 2.0 * slope * m;
        return a + (-f0 + std::sqrt(std::max(disc, 0.0))) / slope;
    }
};

// Path-level drift: add the small-jump compensator back onto the
// psi-representation drift coefficient.
double path_drift(const LevyModel& m) {
    const JumpSpec& j = m.jumps();
    if (j.kind != JumpSpec::Kind::tabulated_density) return m.gamma();
    double comp = 0.0;
    for (std::size_t i = 1; i < j.grid.size(); ++i) {
        const double a = j.grid[i - 1], b = std::min(j.grid[i], 1.0);
        if (b <= a) break;
        const double t = (j.grid[i] > j.grid[i - 1])
                             ? (b - j.grid[i - 1]) / (j.grid[i] - j.grid[i - 1])
                             : 0.0;
        const double fb = j.values[i - 1] + t * (j.values[i] - j.values[i - 1]);
        comp += 0.5 * (a * j.values[i - 1] + b * fb) * (b - a);
    }
    return m.gamma() + comp;
}

void record_point(PathRecord* rec, double t, double x, double xbar, double u,
                  double ubar, double r) {
    if (!rec) return;
    rec->times.push_back(t);
    rec->x.push_back(x);
    rec->xbar.push_back(xbar);
    rec->u.push_back(u);
    rec->ubar.push_back(ubar);
    rec->r.push_back(r);
}

// Grid engine: exact Brownian increments (with bridge extremes) or Euler with
// compound Poisson jumps. The reflection segment uses the running-minimum
// formula: u = w + max(0, ell - min w), with w the unregulated value.
void run_grid(const LevyModel& m, const DrawdownFn& dd, double x0,
              const PathConfig& cfg, const Opts& o, std::mt19937_64& rng,
              Stats& st) {
    const bool bridge = cfg.scheme == Scheme::exact_bm;
    if (bridge && m.kind() != LevyModel::Kind::brownian)
        throw ConfigError("simulator: exact-bm scheme needs a Brownian model");
    double drift, sig2;
    JumpSampler jumps;
    if (m.kind() == LevyModel::Kind::cramer_lundberg) {
        drift = m.cl_c();
        sig2 = 0.0;
        jumps = JumpSampler::make(m);
    } else {
        drift = path_drift(m);
        sig2 = m.sigma2();
        if (cfg.scheme == Scheme::euler) jumps = JumpSampler::make(m);
    }
    const double dt = cfg.dt;
    const double sdt = std::sqrt(sig2 * dt);
    const double sig2dt = sig2 * dt;
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(
        std::numeric_limits<double>::min(), 1.0);
    std::poisson_distribution<int> pois(jumps.rate * dt);

    const bool cdd = dd.kind() == DrawdownFn::Kind::constant_level;
    if (!cdd) dd.alpha_over(x0);  // throws WellDefinednessViolated when invalid

    double t = 0.0;
    double w = x0;        // current segment's unregulated value
    double ubar = x0;
    double r_base = 0.0;  // injections from closed segments
    bool reflecting = false;
    double ell = 0.0, frozen_bar = 0.0, minw = 0.0, seg_reg = 0.0, tau_time = 0.0;
    double xraw = x0, xraw_bar = x0;

    if (w <= dd.xi(ubar)) {  // boundary start: regulator active from t = 0
        reflecting = true;
        ell = dd.xi(ubar);
        frozen_bar = ubar;
        minw = w;
        seg_reg = ell - minw;
        tau_time = 0.0;
    }
    record_point(o.rec, 0.0, xraw, xraw_bar, w + seg_reg, ubar, r_base + seg_reg);

    while (true) {
        if (t >= cfg.horizon_cap - 0.5 * dt) {
            st.censored = true;
            break;
        }
        double dx = drift * dt + (sdt > 0.0 ? sdt * gauss(rng) : 0.0);
        if (jumps.rate > 0.0 && cfg.scheme == Scheme::euler) {
            const int nj = pois(rng);
            for (int k = 0; k < nj; ++k) dx -= jumps.draw(rng, unif);
        }
        const double w0 = w;
        const double w1 = w + dx;
        const double t1 = t + dt;
        double m_low = std::min(w0, w1);
        if (bridge) m_low = bridge_min(w0, w1, sig2dt, unif(rng));

        if (!reflecting) {
            const double barrier = dd.xi(ubar);
            if (m_low < barrier) {
                // draw-down: freeze the level and open a reflection segment
                tau_time = t1;
                ell = barrier;
                frozen_bar = ubar;
                reflecting = true;
                minw = std::min(m_low, w1);
                seg_reg = ell - minw;
                if (seg_reg > 0.0) st.disc_r += std::exp(-o.q * t1) * seg_reg;
                w = w1;
            } else {
                double hi = std::max(w0, w1);
                if (bridge) hi = bridge_max(w0, w1, sig2dt, unif(rng));
                w = w1;
                if (hi > ubar) ubar = hi;
                if (hi - r_base > xraw_bar) xraw_bar = hi - r_base;
                if (o.b < kInf && hi > o.b) {
                    st.kappa = t1;
                    t = t1;
                    record_point(o.rec, t, w - r_base, xraw_bar, w, ubar, r_base);
                    break;
                }
            }
        } else {
            const double reg_before = seg_reg;
            minw = std::min(minw, std::min(m_low, w1));
            const double new_reg = std::max(0.0, ell - minw);
            if (new_reg > seg_reg) {
                st.disc_r += std::exp(-o.q * t1) * (new_reg - seg_reg);
                seg_reg = new_reg;
            }
            w = w1;
            double hi_w = std::max(w0, w1);
            if (bridge) hi_w = bridge_max(w0, w1, sig2dt, unif(rng));
            // intra-step maximum of U; exact while the regulator is idle
            const double hi_u = std::max(hi_w + reg_before, w1 + seg_reg);
            const double u_now = w + seg_reg;
            if (hi_u > ubar) ubar = hi_u;
            if (o.b < kInf && hi_u > o.b) {
                st.kappa = t1;
                t = t1;
                record_point(o.rec, t, u_now - (r_base + seg_reg), xraw_bar, u_now,
                             ubar, r_base + seg_reg);
                break;
            }
            if (!cdd && hi_u > frozen_bar) {
                // segment closes: absorb the regulator into the baseline
                st.epoch_times.push_back(t1);
                if (o.rec) o.rec->epochs.emplace_back(tau_time, t1);
                r_base += seg_reg;
                seg_reg = 0.0;
                w = u_now;
                reflecting = false;
                if (o.max_epochs > 0 &&
                    static_cast<int>(st.epoch_times.size()) >= o.max_epochs) {
                    t = t1;
                    break;
                }
            }
        }
        t = t1;
        const double u_now = w + seg_reg;
        if (o.occ_lo <= o.occ_hi && u_now >= o.occ_lo && u_now <= o.occ_hi)
            st.occ += std::exp(-o.q * t) * dt;
        xraw = u_now - (r_base + seg_reg);
        if (xraw > xraw_bar) xraw_bar = xraw;
        record_point(o.rec, t, xraw, xraw_bar, u_now, ubar, r_base + seg_reg);
    }
    st.total_r = r_base + seg_reg;
}

// Exact occupation weight of one linear drift stretch.
double occ_drift(double t0, double t1, double u0, double c, double q, double lo,
                 double hi) {
    if (t1 <= t0) return 0.0;
    double a = t0, b = t1;
    if (c > 0.0) {
        a = std::max(t0, t0 + (lo - u0) / c);
        b = std::min(t1, t0 + (hi - u0) / c);
    } else if (u0 < lo || u0 > hi) {
        return 0.0;
    }
    if (b <= a) return 0.0;
    if (q == 0.0) return b - a;
    return (std::exp(-q * a) - std::exp(-q * b)) / q;
}

// Event-driven engine for the Cramer-Lundberg model: deterministic upward
// drift between exponential claim arrivals, so every crossing time is exact
// and draw-downs happen only at jumps.
void run_cl(const LevyModel& m, const DrawdownFn& dd, double x0,
            const PathConfig& cfg, const Opts& o, std::mt19937_64& rng,
            Stats& st) {
    if (m.kind() != LevyModel::Kind::cramer_lundberg)
        throw ConfigError("simulator: exact-cl scheme needs a Cramer-Lundberg model");
    const double c = m.cl_c();
    const double la = m.cl_lambda();
    const double al = m.cl_alpha();
    std::uniform_real_distribution<double> unif(
        std::numeric_limits<double>::min(), 1.0);
    const bool cdd = dd.kind() == DrawdownFn::Kind::constant_level;
    if (!cdd) dd.alpha_over(x0);
    const bool occ_on = o.occ_lo <= o.occ_hi;

    double t = 0.0, u = x0, ubar = x0, r = 0.0;
    bool reflecting = false;
    double ell = 0.0, frozen_bar = 0.0, tau_time = 0.0;
    double xraw_bar = x0;
    if (u <= dd.xi(ubar)) {
        reflecting = true;
        ell = dd.xi(ubar);
        frozen_bar = ubar;
        tau_time = 0.0;
    }
    record_point(o.rec, 0.0, u - r, xraw_bar, u, ubar, r);

    auto advance = [&](double t_new, double u_new) {
        if (occ_on) st.occ += occ_drift(t, t_new, u, c, o.q, o.occ_lo, o.occ_hi);
        t = t_new;
        u = u_new;
        if (u > ubar) ubar = u;
        if (u - r > xraw_bar) xraw_bar = u - r;
    };

    while (true) {
        const double tj = t - std::log(1.0 - unif(rng)) / la;
        // exact crossing of whichever boundary the drift reaches first
        double t_cross = kInf;
        bool cross_is_kappa = false;
        if (reflecting && !cdd) {
            t_cross = t + (frozen_bar - u) / c;
        } else if (o.b < kInf) {
            t_cross = t + (o.b - u) / c;
            cross_is_kappa = true;
        }
        const double t_stop = std::min(tj, cfg.horizon_cap);
        if (t_cross <= t_stop) {
            advance(t_cross, u + c * (t_cross - t));
            if (cross_is_kappa) {
                st.kappa = t;
                record_point(o.rec, t, u - r, xraw_bar, u, ubar, r);
                break;
            }
            // segment closes exactly at the frozen running max
            st.epoch_times.push_back(t);
            if (o.rec) o.rec->epochs.emplace_back(tau_time, t);
            reflecting = false;
            record_point(o.rec, t, u - r, xraw_bar, u, ubar, r);
            if (o.max_epochs > 0 &&
                static_cast<int>(st.epoch_times.size()) >= o.max_epochs)
                break;
            continue;
        }
        if (tj >= cfg.horizon_cap) {
            advance(cfg.horizon_cap, u + c * (cfg.horizon_cap - t));
            st.censored = true;
            record_point(o.rec, t, u - r, xraw_bar, u, ubar, r);
            break;
        }
        advance(tj, u + c * (tj - t));
        const double jump = -std::log(1.0 - unif(rng)) / al;
        double u_after = u - jump;
        if (!reflecting) {
            const double barrier = dd.xi(ubar);
            if (u_after < barrier) {
                tau_time = t;
                ell = barrier;
                frozen_bar = ubar;
                reflecting = true;
                const double lump = ell - u_after;
                r += lump;
                st.disc_r += std::exp(-o.q * t) * lump;
                u_after = ell;
            }
        } else if (u_after < ell) {
            const double lump = ell - u_after;
            r += lump;
            st.disc_r += std::exp(-o.q * t) * lump;
            u_after = ell;
        }
        u = u_after;
        record_point(o.rec, t, u - r, xraw_bar, u, ubar, r);
    }
    st.total_r = r;
}

void run_one(const LevyModel& m, const DrawdownFn& dd, double x0,
             const PathConfig& cfg, const Opts& o, std::mt19937_64& rng,
             Stats& st) {
    if (cfg.scheme == Scheme::exact_cl)
        run_cl(m, dd, x0, cfg, o, rng, st);
    else
        run_grid(m, dd, x0, cfg, o, rng, st);
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::exact_bm: return "exact-bm";
        case Scheme::exact_cl: return "exact-cl";
        case Scheme::euler: return "euler";
    }
    return "?";
}

std::string make_note(const PathConfig& cfg, long censored, long n) {
    std::ostringstream os;
    os << "scheme=" << scheme_name(cfg.scheme);
    if (cfg.scheme != Scheme::exact_cl) os << " dt=" << cfg.dt;
    os << " horizon=" << cfg.horizon_cap << " censored=" << censored << "/" << n;
    return os.str();
}

}  // namespace

void PathConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("PathConfig: dt must be positive");
    if (!(horizon_cap > 0.0))
        throw ConfigError("PathConfig: horizon_cap must be positive");
}

PathConfig PathConfig::from_json(const nlohmann::json& doc) {
    PathConfig cfg;
    if (doc.contains("dt")) cfg.dt = doc.at("dt").get<double>();
    if (doc.contains("horizon_cap"))
        cfg.horizon_cap = doc.at("horizon_cap").get<double>();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("scheme")) {
        const std::string s = doc.at("scheme").get<std::string>();
        if (s == "exact-bm") cfg.scheme = Scheme::exact_bm;
        else if (s == "exact-cl") cfg.scheme = Scheme::exact_cl;
        else if (s == "euler") cfg.scheme = Scheme::euler;
        else throw ConfigError("PathConfig: unknown scheme '" + s + "'");
    }
    cfg.validate();
    return cfg;
}

PathRecord simulate_path(const LevyModel& model, const DrawdownFn& dd, double x0,
                         StopRule stop, double b, const PathConfig& cfg,
                         std::uint64_t path_index) {
    cfg.validate();
    PathRecord rec;
    Opts o;
    o.b = (stop == StopRule::at_kappa) ? b : kInf;
    o.rec = &rec;
    Stats st;
    auto rng = path_rng(cfg.seed, path_index);
    run_one(model, dd, x0, cfg, o, rng, st);
    rec.censored = st.censored;
    rec.kappa = st.kappa;
    return rec;
}

McEstimate estimate_kappa_laplace(const LevyModel& model, const DrawdownFn& dd,
                                  double x, double b, double q, long n_paths,
                                  const PathConfig& cfg) {
    cfg.validate();
    std::vector<double> vals(n_paths);
    std::atomic<long> censored{0};
    parallel_paths(n_paths, [&](long i) {
        Opts o;
        o.b = b;
        o.q = q;
        Stats st;
        auto rng = path_rng(cfg.seed, static_cast<std::uint64_t>(i));
        run_one(model, dd, x, cfg, o, rng, st);
        if (st.censored) ++censored;
        vals[i] = std::exp(-q * (st.censored ? cfg.horizon_cap : st.kappa));
    });
    return reduce(vals, make_note(cfg, censored.load(), n_paths));
}

McEstimate estimate_injections(const LevyModel& model, const DrawdownFn& dd,
                               double x, double b, double q, long n_paths,
                               const PathConfig& cfg) {
    cfg.validate();
    std::vector<double> vals(n_paths);
    std::atomic<long> censored{0};
    parallel_paths(n_paths, [&](long i) {
        Opts o;
        o.b = b;
        o.q = q;
        Stats st;
        auto rng = path_rng(cfg.seed, static_cast<std::uint64_t>(i));
        run_one(model, dd, x, cfg, o, rng, st);
        if (st.censored) ++censored;
        vals[i] = st.disc_r;
    });
    return reduce(vals, make_note(cfg, censored.load(), n_paths));
}

McEstimate estimate_injections_laplace(const LevyModel& model, const DrawdownFn& dd,
                                       double x, double b, double theta,
                                       long n_paths, const PathConfig& cfg) {
    cfg.validate();
    std::vector<double> vals(n_paths);
    std::atomic<long> censored{0};
    parallel_paths(n_paths, [&](long i) {
        Opts o;
        o.b = b;
        Stats st;
        auto rng = path_rng(cfg.seed, static_cast<std::uint64_t>(i));
        run_one(model, dd, x, cfg, o, rng, st);
        if (st.censored) ++censored;
        vals[i] = std::exp(-theta * st.total_r);
    });
    return reduce(vals, make_note(cfg, censored.load(), n_paths));
}

McEstimate estimate_potential_mass(const LevyModel& model, const DrawdownFn& dd,
                                   double x, double b, double q, double u1,
                                   double u2, long n_paths, const PathConfig& cfg) {
    cfg.validate();
    if (u2 < u1) throw ConfigError("estimate_potential_mass: needs u1 <= u2");
    std::vector<double> vals(n_paths);
    std::atomic<long> censored{0};
    parallel_paths(n_paths, [&](long i) {
        Opts o;
        o.b = b;
        o.q = q;
        o.occ_lo = u1;
        o.occ_hi = u2;
        Stats st;
        auto rng = path_rng(cfg.seed, static_cast<std::uint64_t>(i));
        run_one(model, dd, x, cfg, o, rng, st);
        if (st.censored) ++censored;
        vals[i] = st.occ;
    });
    return reduce(vals, make_note(cfg, censored.load(), n_paths));
}

McEstimate estimate_overshoot_functional(const LevyModel& model, const DrawdownFn& dd,
                                         double x, double b, double q, long n_paths,
                                         const PathConfig& cfg) {
    cfg.validate();
    std::vector<double> vals(n_paths);
    std::atomic<long> censored{0};
    const bool event_driven = cfg.scheme == Scheme::exact_cl;
    if (event_driven && model.kind() != LevyModel::Kind::cramer_lundberg)
        throw ConfigError("simulator: exact-cl scheme needs a Cramer-Lundberg model");
    parallel_paths(n_paths, [&](long i) {
        auto rng = path_rng(cfg.seed, static_cast<std::uint64_t>(i));
        double out = 0.0;
        if (event_driven) {
            const double c = model.cl_c();
            const double la = model.cl_lambda();
            const double al = model.cl_alpha();
            std::uniform_real_distribution<double> unif(
                std::numeric_limits<double>::min(), 1.0);
            double t = 0.0, xv = x, xbar = x;
            while (true) {
                const double tj = t - std::log(1.0 - unif(rng)) / la;
                const double t_up = t + (b - xv) / c;
                if (t_up <= std::min(tj, cfg.horizon_cap)) break;  // up-cross first
                if (tj >= cfg.horizon_cap) {
                    ++censored;
                    break;
                }
                xv += c * (tj - t);
                t = tj;
                if (xv > xbar) xbar = xv;
                xv -= -std::log(1.0 - unif(rng)) / al;
                const double barrier = dd.xi(xbar);
                if (xv < barrier) {
                    out = std::exp(-q * t) * (barrier - xv);
                    break;
                }
            }
        } else {
            const bool bridge = cfg.scheme == Scheme::exact_bm;
            const double drift =
                model.kind() == LevyModel::Kind::cramer_lundberg ? model.cl_c()
                                                                 : path_drift(model);
            const double sig2 = model.kind() == LevyModel::Kind::cramer_lundberg
                                    ? 0.0
                                    : model.sigma2();
            JumpSampler jumps;
            if (!bridge) jumps = JumpSampler::make(model);
            std::normal_distribution<double> gauss(0.0, 1.0);
            std::uniform_real_distribution<double> unif(
                std::numeric_limits<double>::min(), 1.0);
            std::poisson_distribution<int> pois(jumps.rate * cfg.dt);
            const double sdt = std::sqrt(sig2 * cfg.dt);
            double t = 0.0, xv = x, xbar = x;
            while (true) {
                if (t >= cfg.horizon_cap - 0.5 * cfg.dt) {
                    ++censored;
                    break;
                }
                double dx = drift * cfg.dt + (sdt > 0.0 ? sdt * gauss(rng) : 0.0);
                if (jumps.rate > 0.0) {
                    const int nj = pois(rng);
                    for (int k = 0; k < nj; ++k) dx -= jumps.draw(rng, unif);
                }
                const double x1 = xv + dx;
                const double t1 = t + cfg.dt;
                double lo = std::min(xv, x1);
                if (bridge) lo = bridge_min(xv, x1, sig2 * cfg.dt, unif(rng));
                const double barrier = dd.xi(xbar);
                if (lo < barrier) {
                    // grid processes cross continuously unless a jump lands below
                    out = std::exp(-q * t1) * std::max(0.0, barrier - x1);
                    break;
                }
                double hi = std::max(xv, x1);
                if (bridge) hi = bridge_max(xv, x1, sig2 * cfg.dt, unif(rng));
                if (hi > b) break;
                if (hi > xbar) xbar = hi;
                xv = x1;
                t = t1;
            }
        }
        vals[i] = out;
    });
    return reduce(vals, make_note(cfg, censored.load(), n_paths));
}

std::vector<McEstimate> estimate_epoch_laplace(const LevyModel& model,
                                               const DrawdownFn& dd, double x,
                                               double q, int max_n, long n_paths,
                                               const PathConfig& cfg) {
    cfg.validate();
    if (max_n < 1) throw ConfigError("estimate_epoch_laplace: max_n must be >= 1");
    std::vector<std::vector<double>> vals(max_n, std::vector<double>(n_paths));
    std::atomic<long> censored{0};
    parallel_paths(n_paths, [&](long i) {
        Opts o;
        o.q = q;
        o.max_epochs = max_n;
        Stats st;
        auto rng = path_rng(cfg.seed, static_cast<std::uint64_t>(i));
        run_one(model, dd, x, cfg, o, rng, st);
        if (st.censored) ++censored;
        for (int n = 0; n < max_n; ++n) {
            const double tn = (static_cast<int>(st.epoch_times.size()) > n)
                                  ? st.epoch_times[n]
                                  : cfg.horizon_cap;
            vals[n][i] = std::exp(-q * tn);
        }
    });
    std::vector<McEstimate> out;
    out.reserve(max_n);
    for (int n = 0; n < max_n; ++n)
        out.push_back(reduce(vals[n], make_note(cfg, censored.load(), n_paths)));
    return out;
}

BundleEstimate estimate_bundle(const LevyModel& model, const DrawdownFn& dd,
                               double x, double b, double q, double theta,
                               long n_paths, const PathConfig& cfg) {
    cfg.validate();
    std::vector<double> vk(n_paths), vi(n_paths), vl(n_paths);
    std::atomic<long> censored{0};
    parallel_paths(n_paths, [&](long i) {
        Opts o;
        o.b = b;
        o.q = q;
        Stats st;
        auto rng = path_rng(cfg.seed, static_cast<std::uint64_t>(i));
        run_one(model, dd, x, cfg, o, rng, st);
        if (st.censored) ++censored;
        vk[i] = std::exp(-q * (st.censored ? cfg.horizon_cap : st.kappa));
        vi[i] = st.disc_r;
        vl[i] = std::exp(-theta * st.total_r);
    });
    const std::string note = make_note(cfg, censored.load(), n_paths);
    BundleEstimate out;
    out.kappa = reduce(vk, note);
    out.injections = reduce(vi, note);
    out.injections_laplace = reduce(vl, note);
    return out;
}

}  // namespace ddlevy::sim
