#pragma once

#include <memory>
#include <vector>

#include "hslab/kernel.hpp"
#include "hslab/radial.hpp"

namespace hslab {

/// Evaluates the weighted radial Riesz potential
///   P[F](r) = int_0^inf K(r, s) F(s)^{power} s^{gamma} ds
/// at every grid node, with gamma = n - 1 - sigma. The quadrature plan
/// (kernel values, panel nodes and weights, closure coefficients) is built
/// once per (profile, grid, gamma) and reused across applications, which is
/// what makes the fixed-point sweeps cheap. Panels are graded into the
/// kernel kink at s = r; head and tail are closed analytically.
class PotentialOperator {
public:
    PotentialOperator(std::shared_ptr<const RadialKernelProfile> profile,
                      std::shared_ptr<const RadialGrid> grid,
                      double sigma, double power);

    /// Applies the operator. The output field's head value is the exact
    /// r = 0 potential and its tail model comes from power counting:
    ///   theta_out = min(n - alpha, power * theta_in - (alpha - sigma)),
    /// with the log flag raised when the two branches tie. Throws
    /// DivergentIntegral{Tail} when power * theta_in <= alpha - sigma.
    RadialField apply(const RadialField& f) const;

    /// The power-counted output tail for a given input tail (no quadrature):
    /// min of the two branches, log flag on a tie.
    TailModel expected_tail(const TailModel& in) const;

    /// Power-counted candidates arbitrated by the measured edge slope of the
    /// output (transient states carry both branches; apply() uses this).
    TailModel select_tail(const TailModel& in, double edge_slope) const;

    double sigma() const noexcept { return sigma_; }
    double power() const noexcept { return power_; }
    const RadialKernelProfile& profile() const noexcept { return *profile_; }
    const RadialGrid& grid() const noexcept { return *grid_; }

private:
    struct PlanNode {
        double coef;    // weight * K(r_i, s) * s^gamma
        double dx;      // ln s - ln(grid node below); plain ln s off-grid
        int idx;        // bracketing grid interval, or -1 head / -2 tail
    };
    struct Row {
        std::vector<PlanNode> nodes;
        double head_coef = 0;   // K(r_i, 0); multiplies the [0, eps] closure
        double eps = 0;         // head sliver end
        double tail_start = 0;  // T_i; asymptotic closure beyond
        double tail_c2r2 = 0;   // c2 * r_i^2 for the closure correction
    };

    void check_input(const RadialField& f) const;
    double tail_closure(const Row& row, const TailModel& tail) const;

    std::shared_ptr<const RadialKernelProfile> profile_;
    std::shared_ptr<const RadialGrid> grid_;
    double sigma_ = 0;
    double power_ = 1;
    double gamma_ = 0;       // n - 1 - sigma
    double sphere_ = 0;
    double c2_ = 0;          // kappa asymptote correction coefficient
    std::vector<Row> rows_;
};

} // namespace hslab
