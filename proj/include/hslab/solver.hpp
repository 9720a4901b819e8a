#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hslab/exponents.hpp"
#include "hslab/potential.hpp"

namespace hslab {

struct SolverOptions {
    double damping = 0.5;          ///< omega in (0, 1]; log-space averaging
    int max_iterations = 400;
    double tol = 1e-5;             ///< relative sup-norm sweep change
    double pivot_radius = 1.0;     ///< shape monitor for collapse/blowup
    double collapse_threshold = 1e-8;
    double blowup_threshold = 1e8;
    /// Slow-tailed initializations sit on the unstable side of the far-field
    /// shape separatrix (the amplitude recursion C -> M C^q of the slow
    /// branch is supercritical); this steepens the init tail into the
    /// fast-decay basin before iterating.
    bool precondition = true;
};

enum class SolveStatus {
    Converged,
    NoFixedPointCollapse,
    NoFixedPointBlowup,
    MaxIterations,
};

const char* to_string(SolveStatus s);

struct SolutionBundle {
    SystemParams params;
    RadialField u, v;
    SolveStatus status = SolveStatus::MaxIterations;
    std::vector<double> residual_trace;   ///< per-sweep relative sup change
    double operator_residual_u = -1;      ///< sup |u - T1 v| / u at the end
    double operator_residual_v = -1;
    int iterations = 0;
    std::string status_detail;

    bool converged() const noexcept { return status == SolveStatus::Converged; }
};

/// The pair of integral operators of the system, with shared plans.
struct SystemOperators {
    PotentialOperator t1;  ///< u = T1 v: power q, weight sigma1
    PotentialOperator t2;  ///< v = T2 u: power p, weight sigma2

    SystemOperators(const SystemParams& params,
                    std::shared_ptr<const RadialKernelProfile> profile,
                    std::shared_ptr<const RadialGrid> grid);
};

/// u(r) = int K(r,s) v(s)^q s^{n-1-sigma1} ds (one-off plan; prefer
/// SystemOperators when applying repeatedly).
RadialField apply_T1(const RadialField& v, const SystemParams& params,
                     std::shared_ptr<const RadialKernelProfile> profile,
                     std::shared_ptr<const RadialGrid> grid);

RadialField apply_T2(const RadialField& u, const SystemParams& params,
                     std::shared_ptr<const RadialKernelProfile> profile,
                     std::shared_ptr<const RadialGrid> grid);

/// The scaling covariance (u, v) -> (lambda^{q0} u(lambda .), lambda^{p0} v(lambda .)),
/// which maps solutions to solutions.
std::pair<RadialField, RadialField> rescale(const RadialField& u,
                                            const RadialField& v,
                                            const SystemParams& params,
                                            double lambda);

enum class Ansatz { Slow, Fast, Bubble };

/// Initial pairs: Slow uses (1+r^2)^{-q0/2} x (1+r^2)^{-p0/2}; Fast uses the
/// fast-rate exponents; Bubble is the explicit critical profile
/// (3/(4pi))^{1/4} (1+r^2)^{-1/2} for both components.
std::pair<RadialField, RadialField> make_ansatz(const SystemParams& params,
                                                std::shared_ptr<const RadialGrid> grid,
                                                Ansatz kind,
                                                double amplitude_u = 1.0,
                                                double amplitude_v = 1.0,
                                                double stretch = 1.0);

/// Damped fixed-point iteration with per-field head normalization. Each sweep
/// computes (T1 v, T2 u), geometrically damps against the current pair, and
/// renormalizes both head values; on convergence the pair is gauge-rescaled
/// so it solves the genuine system, with operator residuals reported.
/// Divergence is classified through the pre-normalization head drift and the
/// profile value at `pivot_radius`.
SolutionBundle solve(const SystemParams& params,
                     std::pair<RadialField, RadialField> init,
                     std::shared_ptr<const RadialKernelProfile> profile,
                     std::shared_ptr<const RadialGrid> grid,
                     const SolverOptions& opts = {});

SolutionBundle solve(const SystemParams& params, Ansatz ansatz,
                     std::shared_ptr<const RadialKernelProfile> profile,
                     std::shared_ptr<const RadialGrid> grid,
                     const SolverOptions& opts = {});

} // namespace hslab
