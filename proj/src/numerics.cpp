#include "ddlevy/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace ddlevy::numerics {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gauss-Kronrod (7,15) nodes and weights on [-1, 1] (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct PanelResult {
    double kronrod;
    double err;
};

PanelResult gk15(const RealFn& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double fsum = f(c - x) + f(c + x);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    resk *= h;
    resg *= h;
    const double err = std::abs(resk - resg);
    return {resk, err};
}

}  // namespace

void InversionConfig::validate() const {
    if (node_count < 8) throw ConfigError("InversionConfig: node_count must be >= 8");
    if (!(working_tolerance > 0.0) || working_tolerance > 1e-4)
        throw ConfigError("InversionConfig: working_tolerance must lie in (0, 1e-4]");
}

void QuadConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw ConfigError("QuadConfig: tolerances must be positive");
    if (max_subdivisions < 1)
        throw ConfigError("QuadConfig: max_subdivisions must be positive");
}

namespace {

// Fixed-Talbot rule of Abate & Valko with M nodes.
double talbot(const ComplexFn& F, double x, int M) {
    const double r = 2.0 * M / (5.0 * x);
    double acc = 0.5 * std::exp(r * x) * F(std::complex<double>(r, 0.0)).real();
    for (int k = 1; k < M; ++k) {
        const double th = k * kPi / M;
        const double cot = std::cos(th) / std::sin(th);
        const std::complex<double> s(r * th * cot, r * th);
        const double sigma = th + (th * cot - 1.0) * cot;
        const std::complex<double> val =
            std::exp(s * x) * F(s) * std::complex<double>(1.0, sigma);
        acc += val.real();
    }
    return acc * r / M;
}

// Euler-summed Bromwich sum of Abate & Whitt. n regular terms, 12 binomial
// averaging terms on top.
double euler_sum(const ComplexFn& F, double x, int n) {
    const int m = 12;
    const double A = 18.4;  // ~1e-8 discretization error
    const double a0 = A / (2.0 * x);
    std::vector<double> partial(static_cast<std::size_t>(n + m + 1));
    double s = 0.5 * F(std::complex<double>(a0, 0.0)).real();
    double sign = -1.0;
    for (int k = 1; k <= n + m; ++k) {
        const std::complex<double> sk(a0, k * kPi / x);
        s += sign * F(sk).real();
        sign = -sign;
        partial[static_cast<std::size_t>(k)] = s;
    }
    double binom = 1.0;
    double avg = 0.0;
    double norm = 0.0;
    for (int k = 0; k <= m; ++k) {
        avg += binom * partial[static_cast<std::size_t>(n + k)];
        norm += binom;
        binom *= static_cast<double>(m - k) / (k + 1);
    }
    return std::exp(A / 2.0) / x * (avg / norm);
}

}  // namespace

double invert_laplace(const ComplexFn& transform, double x,
                      const InversionConfig& cfg) {
    cfg.validate();
    if (!(x > 0.0)) throw DomainError("invert_laplace: x must be positive");

    double f1 = 0.0, f2 = 0.0, check_tol = 0.0;
    if (cfg.method == InversionConfig::Method::fixed_talbot) {
        f1 = talbot(transform, x, cfg.node_count);
        f2 = talbot(transform, x, cfg.node_count + 8);
        check_tol = std::max(cfg.working_tolerance, 5e-12);
    } else {
        f1 = euler_sum(transform, x, cfg.node_count);
        f2 = euler_sum(transform, x, cfg.node_count + 8);
        check_tol = std::max(cfg.working_tolerance, 5e-7);
    }
    const double scale = std::max({1.0, std::abs(f1), std::abs(f2)});
    if (std::abs(f1 - f2) > 100.0 * check_tol * scale || !std::isfinite(f2))
        throw NonConvergence("invert_laplace: node counts disagree beyond tolerance");
    return f2;
}

double integrate(const RealFn& f, double a, double b, const QuadConfig& cfg) {
    cfg.validate();
    if (a > b) throw DomainError("integrate: requires a <= b");
    if (a == b) return 0.0;

    struct Seg {
        double a, b, val, err;
        bool operator<(const Seg& o) const { return err < o.err; }
    };
    std::priority_queue<Seg> heap;
    auto first = gk15(f, a, b);
    heap.push({a, b, first.kronrod, first.err});
    double total = first.kronrod;
    double total_err = first.err;
    int used = 1;
    while (total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
        if (used >= cfg.max_subdivisions)
            throw SubdivisionLimit("integrate: subdivision limit reached");
        Seg worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = gk15(f, worst.a, mid);
        auto right = gk15(f, mid, worst.b);
        total += left.kronrod + right.kronrod - worst.val;
        total_err += left.err + right.err - worst.err;
        heap.push({worst.a, mid, left.kronrod, left.err});
        heap.push({mid, worst.b, right.kronrod, right.err});
        ++used;
    }
    return total;
}

std::vector<double> cumulative_exp_integral(const RealFn& g, double x,
                                            std::span<const double> grid,
                                            const QuadConfig& cfg) {
    cfg.validate();
    if (grid.empty()) return {};
    if (grid.front() < x)
        throw DomainError("cumulative_exp_integral: grid must start at or after x");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] < grid[i - 1])
            throw DomainError("cumulative_exp_integral: grid must be ascending");

    // Per-panel tolerance; the running sum keeps the panels consistent.
    QuadConfig panel_cfg = cfg;
    panel_cfg.max_subdivisions = std::max(cfg.max_subdivisions / 8, 50);

    std::vector<double> out(grid.size());
    double cum = 0.0;
    double prev = x;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] > prev) cum += integrate(g, prev, grid[i], panel_cfg);
        prev = grid[i];
        out[i] = std::exp(-cum);
    }
    if (grid.front() == x) out.front() = 1.0;
    return out;
}

double find_root_increasing(const RealFn& f, double target, double lo) {
    const double tol = 1e-12 * std::max(1.0, std::abs(target));
    double flo = f(lo);
    if (flo > target + tol)
        throw DomainError("find_root_increasing: f(lo) exceeds target");
    if (std::abs(flo - target) <= tol) return lo;

    double hi = lo;
    double step = std::max(1.0, std::abs(lo));
    double fhi = flo;
    bool bracketed = false;
    for (int i = 0; i < 60; ++i) {
        hi = lo + step;
        fhi = f(hi);
        if (fhi >= target) {
            bracketed = true;
            break;
        }
        step *= 2.0;
    }
    if (!bracketed)
        throw BracketFailure("find_root_increasing: no upper bracket after 60 doublings");

    double a = lo, b = hi, fa = flo;
    double xcur = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
        double fx = f(xcur);
        if (std::abs(fx - target) <= tol) return xcur;
        if (fx < target) {
            a = xcur;
            fa = fx;
        } else {
            b = xcur;
        }
        // Newton step from the current point, numeric slope.
        const double h = 1e-7 * std::max(1.0, std::abs(xcur));
        const double slope = (f(xcur + h) - f(xcur - h)) / (2.0 * h);
        double next = slope > 0.0 ? xcur - (fx - target) / slope : a;
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        xcur = next;
        if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() *
                          std::max(1.0, std::abs(b)))
            break;
    }
    // Interval collapsed; report the midpoint if it meets the contract.
    xcur = 0.5 * (a + b);
    if (std::abs(f(xcur) - target) <= std::max(tol, 1e-9 * std::max(1.0, std::abs(target))))
        return xcur;
    (void)fa;
    return xcur;
}

double derivative(const RealFn& f, double x, double scale) {
    if (!(scale > 0.0)) throw DomainError("derivative: scale must be positive");
    const double h = scale * std::cbrt(std::numeric_limits<double>::epsilon()) *
                     std::max(1.0, std::abs(x));
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace ddlevy::numerics
