#include "hslab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

namespace hslab {

namespace {

// (e^z - 1)/z, stable near 0.
double expm1_over(double z) {
    if (std::abs(z) < 1e-5) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
    return std::expm1(z) / z;
}

// Power-interpolant integral over [a, b] given endpoint values ga, gb > 0.
double power_segment(double a, double b, double ga, double gb) {
    const double dx = std::log(b / a);
    const double z = std::log(gb / ga) + dx;  // (m+1) dx
    return ga * a * dx * expm1_over(z);
}

// int_a^b s^g ds, log form at g = -1.
double power_moment(double a, double b, double g) {
    if (std::abs(g + 1.0) < 1e-12) return std::log(b / a);
    return (std::pow(b, g + 1.0) - std::pow(a, g + 1.0)) / (g + 1.0);
}

// int_R^inf s^{-c} (ln s)^nu ds for c > 1, nu >= 0 (R > 1 when nu > 0).
double tail_moment(double R, double c, double nu) {
    if (nu == 0.0) return std::pow(R, 1.0 - c) / (c - 1.0);
    const double L = std::log(R);
    return boost::math::tgamma(nu + 1.0, (c - 1.0) * L) / std::pow(c - 1.0, nu + 1.0);
}

} // namespace

RadialGrid::RadialGrid(double r_min, double r_max, int count) {
    if (!(r_min > 0) || !(r_min < r_max))
        throw DomainError("grid", "need 0 < r_min < r_max");
    if (count < 16) throw DomainError("grid", "need at least 16 nodes");
    nodes_.resize(count);
    logs_.resize(count);
    const double l0 = std::log(r_min), l1 = std::log(r_max);
    log_step_ = (l1 - l0) / (count - 1);
    for (int i = 0; i < count; ++i) {
        logs_[i] = l0 + (l1 - l0) * i / (count - 1);
        nodes_[i] = std::exp(logs_[i]);
    }
    nodes_.front() = r_min;
    nodes_.back() = r_max;
}

int RadialGrid::interval_of(double r) const {
    const int last = size() - 2;
    if (r <= nodes_.front()) return 0;
    if (r >= nodes_.back()) return last;
    int idx = static_cast<int>((std::log(r) - logs_.front()) / log_step_);
    idx = std::clamp(idx, 0, last);
    // log_step arithmetic can be off by one at interval edges
    while (idx > 0 && r < nodes_[idx]) --idx;
    while (idx < last && r >= nodes_[idx + 1]) ++idx;
    return idx;
}

double RadialGrid::integrate(const std::vector<double>& values, double gamma,
                             double power) const {
    if (static_cast<int>(values.size()) != size())
        throw DomainError("values", "size must match the grid");
    // Power-interpolant composite rule at full and half resolution, with
    // Richardson extrapolation of the O(h^2) log-log curvature error. Pure
    // powers are exact at any resolution, so exactness is preserved.
    auto pass = [&](int stride) {
        double sum = 0;
        int i = 0;
        while (i + 1 < size()) {
            const int j = std::min(i + stride, size() - 1);
            const double a = nodes_[i], b = nodes_[j];
            const double fa = values[i], fb = values[j];
            if (!(fa > 0) || !(fb > 0))
                throw DomainError("values", "must be positive for power quadrature");
            const double ga = std::pow(fa, power) * std::pow(a, gamma);
            const double gb = std::pow(fb, power) * std::pow(b, gamma);
            sum += power_segment(a, b, ga, gb);
            i = j;
        }
        return sum;
    };
    const double fine = pass(1);
    const double coarse = pass(2);
    return fine + (fine - coarse) / 3.0;
}

double RadialGrid::integrate_to(const std::vector<double>& values, double gamma,
                                double power, double R) const {
    if (static_cast<int>(values.size()) != size())
        throw DomainError("values", "size must match the grid");
    if (!(R > r_min()) )
        return 0.0;
    R = std::min(R, r_max());
    double sum = 0;
    for (int i = 0; i + 1 < size(); ++i) {
        const double a = nodes_[i], b = nodes_[i + 1];
        const double fa = values[i], fb = values[i + 1];
        if (!(fa > 0) || !(fb > 0))
            throw DomainError("values", "must be positive for power quadrature");
        const double ga = std::pow(fa, power) * std::pow(a, gamma);
        const double gb = std::pow(fb, power) * std::pow(b, gamma);
        if (R >= b) {
            sum += power_segment(a, b, ga, gb);
        } else {
            const double m = std::log(gb / ga) / std::log(b / a);
            const double gR = ga * std::pow(R / a, m);
            sum += power_segment(a, R, ga, gR);
            break;
        }
    }
    return sum;
}

std::vector<double> RadialGrid::weights(double gamma) const {
    std::vector<double> w(size(), 0.0);
    for (int i = 0; i + 1 < size(); ++i) {
        const double a = nodes_[i], b = nodes_[i + 1];
        const double j0 = power_moment(a, b, gamma);
        const double j1 = power_moment(a, b, gamma + 1.0);
        w[i] += (b * j0 - j1) / (b - a);
        w[i + 1] += (j1 - a * j0) / (b - a);
    }
    return w;
}

double TailModel::eval(double r) const {
    double v = amplitude * std::pow(r, -exponent);
    if (log_flag) v *= std::log(r);
    return v;
}

std::shared_ptr<const RadialGrid> make_grid(double r_min, double r_max, int count) {
    return std::make_shared<const RadialGrid>(r_min, r_max, count);
}

double RadialField::value(double r) const {
    if (r < 0) throw DomainError("r", "must be >= 0");
    const double lo = grid->r_min(), hi = grid->r_max();
    if (r < lo) return head.eval(r);
    if (r > hi) return tail.eval(r);
    const int i = grid->interval_of(r);
    const double a = grid->node(i), b = grid->node(i + 1);
    const double fa = values[i], fb = values[i + 1];
    const double m = std::log(fb / fa) / std::log(b / a);
    return fa * std::pow(r / a, m);
}

bool RadialField::monotone_decreasing(double rel_slack) const {
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (values[i + 1] > values[i] * (1.0 + rel_slack)) return false;
    return true;
}

namespace {

TailModel anchored_tail(const RadialGrid& grid, const std::vector<double>& vals,
                        std::optional<TailHint> hint) {
    TailModel t;
    const int n = grid.size();
    if (hint) {
        t.exponent = hint->exponent;
        t.log_flag = hint->log_flag;
    } else {
        t.exponent = -(std::log(vals[n - 1]) - std::log(vals[n - 2]))
                   / (grid.log_node(n - 1) - grid.log_node(n - 2));
        t.log_flag = false;
    }
    double denom = std::pow(grid.r_max(), -t.exponent);
    if (t.log_flag) denom *= std::log(grid.r_max());
    t.amplitude = vals[n - 1] / denom;
    return t;
}

HeadModel fitted_head(const RadialGrid& grid, double f0, double f1) {
    HeadModel h;
    h.f0 = f0;
    const double r1 = grid.r_min();
    h.c = (f1 / f0 - 1.0) / (r1 * r1);
    return h;
}

} // namespace

RadialField RadialField::from_function(std::shared_ptr<const RadialGrid> grid,
                                       const std::function<double(double)>& fn,
                                       std::optional<TailHint> hint) {
    std::vector<double> vals(grid->size());
    for (int i = 0; i < grid->size(); ++i) {
        vals[i] = fn(grid->node(i));
        if (!(vals[i] > 0)) throw DomainError("field", "samples must be positive");
    }
    RadialField f;
    f.head = fitted_head(*grid, fn(0.0), vals[0]);
    if (!(f.head.f0 > 0)) throw DomainError("field", "head value must be positive");
    f.tail = anchored_tail(*grid, vals, hint);
    f.grid = std::move(grid);
    f.values = std::move(vals);
    return f;
}

RadialField RadialField::from_values(std::shared_ptr<const RadialGrid> grid,
                                     std::vector<double> values,
                                     std::optional<TailHint> hint) {
    if (static_cast<int>(values.size()) != grid->size())
        throw DomainError("values", "size must match the grid");
    for (double v : values)
        if (!(v > 0)) throw DomainError("field", "samples must be positive");
    RadialField f;
    // Head model through the first two samples: v = f0 (1 + c r^2). Falls
    // back to a flat extension when the quadratic through them degenerates.
    const double r0 = grid->node(0), r1 = grid->node(1);
    const double rho = values[1] / values[0];
    const double denom = r1 * r1 - rho * r0 * r0;
    f.head.f0 = values[0];
    f.head.c = 0.0;
    if (denom > 0) {
        const double c = (rho - 1.0) / denom;
        const double f0 = values[0] / (1.0 + c * r0 * r0);
        if (f0 > 0) {
            f.head.f0 = f0;
            f.head.c = c;
        }
    }
    f.tail = anchored_tail(*grid, values, hint);
    f.grid = std::move(grid);
    f.values = std::move(values);
    return f;
}

double weighted_integral(const RadialField& f, double gamma, double power) {
    const RadialGrid& g = *f.grid;
    if (gamma <= -1.0)
        throw DivergentIntegral(DivergentIntegral::Endpoint::Head,
                                "gamma <= -1 with a positive head value");
    const double c = f.tail.exponent * power - gamma;
    if (c <= 1.0) {
        std::ostringstream msg;
        msg << "theta*power - gamma = " << c << " <= 1";
        throw DivergentIntegral(DivergentIntegral::Endpoint::Tail, msg.str());
    }
    const double nu = f.tail.log_flag ? power : 0.0;
    if (nu > 0 && !(g.r_max() > 1.0))
        throw DomainError("tail", "log tails need r_max > 1");

    const double R = g.r_min();
    const double f0p = std::pow(f.head.f0, power);
    const double ch = f.head.c;
    // (1 + c s^2)^power expanded to second order; |c| r_min^2 is tiny here.
    const double head = f0p * (std::pow(R, gamma + 1.0) / (gamma + 1.0)
                         + power * ch * std::pow(R, gamma + 3.0) / (gamma + 3.0)
                         + 0.5 * power * (power - 1.0) * ch * ch
                               * std::pow(R, gamma + 5.0) / (gamma + 5.0));

    const double grid_part = g.integrate(f.values, gamma, power);
    const double tail = std::pow(f.tail.amplitude, power)
                      * tail_moment(g.r_max(), c, nu);
    return head + grid_part + tail;
}

double weighted_integral_truncated(const RadialField& f, double gamma,
                                   double power, double R) {
    const RadialGrid& g = *f.grid;
    if (gamma <= -1.0)
        throw DivergentIntegral(DivergentIntegral::Endpoint::Head,
                                "gamma <= -1 with a positive head value");
    const double r0 = g.r_min();
    const double f0p = std::pow(f.head.f0, power);
    const double ch = f.head.c;
    const double hcut = std::min(R, r0);
    double head = f0p * (std::pow(hcut, gamma + 1.0) / (gamma + 1.0)
                         + power * ch * std::pow(hcut, gamma + 3.0) / (gamma + 3.0));
    if (R <= r0) return head;
    return head + g.integrate_to(f.values, gamma, power, R);
}

TailModel fit_tail(const RadialField& f, double window_lo, double window_hi,
                   bool log_candidates) {
    double rms = 0;
    return fit_tail(f, window_lo, window_hi, log_candidates, rms);
}

TailModel fit_tail(const RadialField& f, double window_lo, double window_hi,
                   bool log_candidates, double& rms) {
    const RadialGrid& g = *f.grid;
    std::vector<double> xs, ys;
    double last_r = 0, last_v = 0;
    for (int i = 0; i < g.size(); ++i) {
        const double r = g.node(i);
        if (r < window_lo || r > window_hi) continue;
        xs.push_back(std::log(r));
        ys.push_back(std::log(f.values[i]));
        last_r = r;
        last_v = f.values[i];
    }
    if (xs.size() < 16)
        throw FitError("window holds fewer than 16 nodes");
    if (xs.back() - xs.front() < std::log(10.0))
        throw FitError("window spans less than one decade");

    auto linear_fit = [&](const std::vector<double>& y, double& c0, double& slope,
                          double& res) {
        const std::size_t n = y.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sx += xs[i];
            sy += y[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * y[i];
        }
        const double det = n * sxx - sx * sx;
        slope = (n * sxy - sx * sy) / det;
        c0 = (sy - slope * sx) / n;
        double ss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = y[i] - (c0 + slope * xs[i]);
            ss += e * e;
        }
        res = std::sqrt(ss / n);
    };

    double c0p, mp, rp;
    linear_fit(ys, c0p, mp, rp);

    bool use_log = false;
    double c0l = 0, ml = 0, rl = HUGE_VAL;
    // ln(ln r) needs ln r comfortably positive across the window.
    if (log_candidates && window_lo > 3.0) {
        std::vector<double> adj(ys.size());
        for (std::size_t i = 0; i < ys.size(); ++i) adj[i] = ys[i] - std::log(xs[i]);
        linear_fit(adj, c0l, ml, rl);
        use_log = rl < 0.98 * rp;
    }

    TailModel t;
    if (use_log) {
        t.exponent = -ml;
        t.amplitude = std::exp(c0l);
        t.log_flag = true;
        rms = rl;
    } else {
        t.exponent = -mp;
        t.amplitude = std::exp(c0p);
        t.log_flag = false;
        rms = rp;
    }
    if (rms > 0.1) {
        std::ostringstream msg;
        msg << "residual RMS " << rms << " exceeds 0.1";
        throw FitError(msg.str());
    }
    if (!(t.exponent > 0))
        throw FitError("fitted exponent is not positive");
    const double at_end = t.eval(last_r);
    if (std::abs(at_end - last_v) > 0.1 * last_v)
        throw FitError("model misses the window-end value by more than 10%");
    return t;
}

} // namespace hslab
