#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hslab/solver.hpp"

namespace hslab {

struct AnalysisOptions {
    double rate_tol = 0.02;          ///< tolerance on fitted decay exponents
    double window_decades = 1.5;     ///< fit window length
    double window_top_factor = 0.1;  ///< window ends at r_max * this
    double ratio_tol = 0.01;         ///< truncated-norm stabilization criterion
    std::vector<double> scan_radii{10.0, 1e2, 1e3, 1e4};

    double window_hi(const RadialGrid& g) const { return g.r_max() * window_top_factor; }
    double window_lo(const RadialGrid& g) const {
        return window_hi(g) / std::pow(10.0, window_decades);
    }
};

enum class Verdict { FastDecay, SlowDecay, Indeterminate };
const char* to_string(Verdict v);

struct RateReport {
    double theta_u = 0, theta_v = 0;   ///< fitted decay exponents
    bool log_u = false, log_v = false;
    double rms_u = 0, rms_v = 0;       ///< fit residuals (log space)
    double window_lo = 0, window_hi = 0;
    double slow_u = 0, slow_v = 0;     ///< predicted slow rates (q0, p0)
    double fast_u = 0, fast_v = 0;     ///< predicted fast rates
    bool fast_v_log = false;
    Verdict verdict = Verdict::Indeterminate;
};

struct AsymptoticConstants {
    VCase v_case = VCase::Plain;
    double a0 = 0;                  ///< int v^q |y|^{-sigma1} dy
    std::optional<double> a1;       ///< int u^p |y|^{-sigma2} dy, plain case
    std::optional<double> a2;       ///< A0^p * riesz_moment(p(n-a)+sigma2), anomalous
    double log_amplitude = 0;       ///< A0^p |S^{n-1}|, log case prediction
    double u_tail_amplitude = 0;    ///< fitted; should approach a0
    double v_tail_amplitude = 0;    ///< fitted; should approach the case constant
    double u_gap = 0, v_gap = 0;    ///< relative mismatches of the two checks
};

struct PohozaevReport {
    double e1 = 0;   ///< int v^{q+1} |x|^{-sigma1} dx
    double e2 = 0;   ///< int u^{p+1} |x|^{-sigma2} dx
    double energy_gap = 0;                ///< |e1-e2| / max(e1,e2)
    double criticality_coefficient = 0;   ///< vanishes exactly at criticality
    double product = 0;                   ///< coefficient * e1; ~0 for solutions
};

struct IntegrabilityRow {
    char component = 'u';
    double exponent = 0;
    std::vector<double> norms;   ///< truncated L^r norms at the scan radii
    double last_ratio = 0;       ///< final successive-R ratio
    bool stabilized = false;
};

struct BoundReport {
    double upper_u = 0;   ///< sup u (1+r)^{q0} on the window
    double upper_v = 0;
    double lower_u = 0;   ///< inf u (1+r)^{n-alpha}
    double lower_v = 0;   ///< inf v (1+r)^{min{n-alpha, p(n-alpha)-(alpha-sigma2)}}
    double fitted_u = 0, fitted_v = 0;
    std::vector<std::string> violations;
    bool ok() const noexcept { return violations.empty(); }
};

class BoundViolation : public std::runtime_error {
public:
    BoundViolation(std::string what, BoundReport report)
        : std::runtime_error(std::move(what)), report_(std::move(report)) {}
    const BoundReport& report() const noexcept { return report_; }

private:
    BoundReport report_;
};

/// Fits both tails and compares them against the slow and fast laws.
/// Ties (both within tolerance) and misses are Indeterminate.
RateReport rate_report(const SolutionBundle& bundle, const AnalysisOptions& opts = {});

/// A0 always, plus A1 or A2 per the fast-rate case of v, with the
/// tail-amplitude cross-checks of both components.
AsymptoticConstants asymptotic_constants(const SolutionBundle& bundle,
                                         const RadialKernelProfile& profile,
                                         const AnalysisOptions& opts = {});

/// Both weighted energies, their gap, and the criticality coefficient whose
/// product with them vanishes for genuine finite-energy solutions.
PohozaevReport pohozaev_report(const SolutionBundle& bundle);

/// Truncated L^r norms at the scan radii for the given exponent lists.
std::vector<IntegrabilityRow> integrability_scan(const SolutionBundle& bundle,
                                                 const std::vector<double>& u_exponents,
                                                 const std::vector<double>& v_exponents,
                                                 const AnalysisOptions& opts = {});

/// Window checks of the two-sided decay laws; `strict` throws BoundViolation
/// naming the first failed law.
BoundReport bound_checks(const SolutionBundle& bundle,
                         const AnalysisOptions& opts = {}, bool strict = true);

} // namespace hslab
