#pragma once

#include <cmath>
#include <memory>

#include "hslab/analysis.hpp"
#include "hslab/solver.hpp"

namespace fixtures {

using namespace hslab;

inline const SystemParams& critical_params() {
    static const SystemParams sp = validate(3, 2, 5, 5, 0, 0);
    return sp;
}

inline std::shared_ptr<const RadialKernelProfile> newton_profile() {
    static auto prof = std::make_shared<const RadialKernelProfile>(3, 2.0);
    return prof;
}

inline std::shared_ptr<const RadialGrid> default_grid() {
    static auto grid = make_grid(1e-4, 1e4, 1024);
    return grid;
}

inline double bubble_amplitude() { return std::pow(3.0 / (4.0 * M_PI), 0.25); }

/// The exact critical profile A (1 + r^2)^{-1/2} as a field.
inline RadialField exact_bubble(std::shared_ptr<const RadialGrid> grid,
                                double lambda = 1.0) {
    const double A = bubble_amplitude();
    return RadialField::from_function(
        grid,
        [A, lambda](double r) {
            const double z = lambda * r;
            return std::sqrt(lambda) * A * std::pow(1.0 + z * z, -0.5);
        },
        TailHint{1.0, false});
}

/// One shared converged run of the critical case from the slow ansatz.
inline const SolutionBundle& solved_bubble() {
    static const SolutionBundle bundle = [] {
        return solve(critical_params(), Ansatz::Slow, newton_profile(),
                     default_grid(), SolverOptions{});
    }();
    return bundle;
}

} // namespace fixtures
