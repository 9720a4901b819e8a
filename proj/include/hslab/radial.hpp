#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "hslab/errors.hpp"

namespace hslab {

/// Log-spaced radial grid on [r_min, r_max] with product quadrature for
/// integrals against s^gamma. The composite rule interpolates positive data
/// as a power law on each interval and integrates the moment in closed form,
/// so pure powers s^{-g} integrate exactly (up to roundoff) for any g.
class RadialGrid {
public:
    RadialGrid(double r_min, double r_max, int count);

    double r_min() const noexcept { return nodes_.front(); }
    double r_max() const noexcept { return nodes_.back(); }
    int size() const noexcept { return static_cast<int>(nodes_.size()); }
    double node(int i) const { return nodes_[i]; }
    double log_node(int i) const { return logs_[i]; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    double log_step() const noexcept { return log_step_; }

    /// Index of the interval [node(i), node(i+1)] containing r (clamped).
    int interval_of(double r) const;

    /// integral over [r_min, r_max] of the power-law interpolant of
    /// g(s) = values[i]^{power} s^{gamma}; values must be positive.
    double integrate(const std::vector<double>& values, double gamma,
                     double power = 1.0) const;

    /// Same rule truncated to [r_min, R] with R <= r_max (partial last interval
    /// handled by the interpolant).
    double integrate_to(const std::vector<double>& values, double gamma,
                        double power, double R) const;

    /// Linear product-rule weights against s^gamma (positive; exact for data
    /// linear in s). Provided for callers needing a fixed weight vector.
    std::vector<double> weights(double gamma) const;

private:
    std::vector<double> nodes_, logs_;
    double log_step_ = 0;
};

/// f(r) ~ C r^{-theta} (ln r)^{log_flag} for r beyond the grid.
struct TailModel {
    double amplitude = 0;   ///< C >= 0
    double exponent = 1;    ///< theta > 0
    bool log_flag = false;

    double eval(double r) const;
};

/// Even-quadratic head extension f(r) ~ f0 (1 + c r^2) on [0, r_min].
struct HeadModel {
    double f0 = 1;
    double c = 0;

    double eval(double r) const { return f0 * (1.0 + c * r * r); }
};

struct TailHint {
    double exponent = 1;
    bool log_flag = false;
};

/// Positive radial profile: samples on a shared grid plus head and tail
/// closure models. Immutable by convention once built.
struct RadialField {
    std::shared_ptr<const RadialGrid> grid;
    std::vector<double> values;
    HeadModel head;
    TailModel tail;

    /// Evaluates via the head model (r < r_min), power interpolation between
    /// nodes, or the tail model (r > r_max).
    double value(double r) const;

    bool monotone_decreasing(double rel_slack = 1e-12) const;

    /// Samples fn on the grid; the head curvature comes from the first node
    /// and the tail from `hint` (anchored at the last node) or, without a
    /// hint, from the slope of the last two nodes.
    static RadialField from_function(std::shared_ptr<const RadialGrid> grid,
                                     const std::function<double(double)>& fn,
                                     std::optional<TailHint> hint = {});

    /// Rebuilds the head/tail closures from given samples (same rules).
    static RadialField from_values(std::shared_ptr<const RadialGrid> grid,
                                   std::vector<double> values,
                                   std::optional<TailHint> hint = {});
};

std::shared_ptr<const RadialGrid> make_grid(double r_min, double r_max, int count);

/// int_0^inf f(s)^{power} s^{gamma} ds with analytic head and tail closures.
/// Throws DivergentIntegral{head|tail} when an endpoint fails power counting;
/// the tail condition is theta * power - gamma > 1.
double weighted_integral(const RadialField& f, double gamma, double power);

/// Same integral truncated to [0, R], R <= r_max (no tail closure involved).
double weighted_integral_truncated(const RadialField& f, double gamma,
                                   double power, double R);

/// Least-squares power fit of the trailing window [lo, hi] of the field in
/// log-log coordinates, optionally testing an additional ln r factor; the
/// log variant is selected only when it improves the residual by 2%.
/// Requires >= 16 nodes spanning >= one decade; throws FitError when the
/// residual RMS exceeds 0.1 or preconditions fail.
TailModel fit_tail(const RadialField& f, double window_lo, double window_hi,
                   bool log_candidates = true);

/// Residual RMS of the chosen model in log space (diagnostic companion of
/// fit_tail; same fit, also returns the residual through `rms`).
TailModel fit_tail(const RadialField& f, double window_lo, double window_hi,
                   bool log_candidates, double& rms);

} // namespace hslab
