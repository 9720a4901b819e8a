#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace hslab {

/// Options for adaptive panel-bisection quadrature.
struct AdaptiveOptions {
    double rel_tol = 1e-10;
    double abs_floor = 1e-300;   ///< stop refining below this absolute error
    std::size_t max_evals = 100000;
};

/// Integrates f over [a, b] by Gauss-Kronrod 15(7) panels, bisecting the
/// worst panel until the summed error estimate meets rel_tol. `breaks`
/// seeds the initial panel boundaries (endpoints are added automatically);
/// use them to pre-grade integrable endpoint singularities.
/// Throws NonConvergence when the evaluation budget runs out.
double adaptive_integrate(const std::function<double(double)>& f,
                          double a, double b,
                          const AdaptiveOptions& opts = {},
                          const std::vector<double>& breaks = {});

/// Fixed 7-point Gauss-Legendre rule on [a, b].
double gauss7(const std::function<double(double)>& f, double a, double b);

/// Nodes/weights of the 7-point Gauss-Legendre rule mapped to [a, b],
/// appended to the output vectors. Used to build precomputed quadrature plans.
void gauss7_nodes(double a, double b,
                  std::vector<double>& nodes, std::vector<double>& weights);

/// Geometric panel boundaries from `from` to `to` (either direction),
/// `per_decade` panels per decade. Both endpoints included.
std::vector<double> log_panels(double from, double to, double per_decade);

/// Panel boundaries on [a, b] graded geometrically toward the interior
/// point c from both sides, starting at relative offset `eps` (|s-c| >= eps*c).
/// Used for the kernel kink along the diagonal.
std::vector<double> graded_panels_about(double a, double b, double c,
                                        double eps = 1e-11, double ratio = 2.0);

} // namespace hslab
