#pragma once

#include <string>
#include <vector>

#include "hslab/errors.hpp"

namespace hslab {

/// Parameters (n, alpha, p, q, sigma1, sigma2) of the weighted Riesz system
///   u(x) = int v(y)^q |x-y|^{alpha-n} |y|^{-sigma1} dy,
///   v(x) = int u(y)^p |x-y|^{alpha-n} |y|^{-sigma2} dy.
struct SystemParams {
    int n = 3;
    double alpha = 2.0;
    double p = 5.0;
    double q = 5.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
};

enum class VCase { Plain, Log, Anomalous };

/// Exponents derived from SystemParams: slow rates (q0, p0), the matching
/// integrability indices (r0, s0) and the fast-rate law for (u, v).
struct DerivedExponents {
    double p0 = 0;      ///< slow decay rate of v
    double q0 = 0;      ///< slow decay rate of u
    double r0 = 0;      ///< integrability index of u, n/q0
    double s0 = 0;      ///< integrability index of v, n/p0
    double fast_u = 0;  ///< n - alpha
    double fast_v = 0;  ///< fast decay rate of v per the three-case law
    bool fast_v_log = false;
    VCase v_case = VCase::Plain;
};

enum class RegimeKind { Subcritical, Critical, Supercritical };

struct Regime {
    RegimeKind kind = RegimeKind::Critical;
    /// S = (n-sigma1)/(1+q) + (n-sigma2)/(1+p) - (n-alpha); sign fixes the kind.
    double criticality = 0;
    /// Equivalent characterization q0 + p0 - (n-alpha); must carry the same sign.
    double rate_sum_gap = 0;
    bool theorem_a_nonexistence = false;  ///< max{p0, q0} >= n-alpha
    std::string notes;
};

const char* to_string(VCase c);
const char* to_string(RegimeKind k);

/// Validates the six raw parameters; throws DomainError naming the violated
/// constraint. pq <= 1 is rejected (no positive solutions exist there at all).
/// `for_solver` additionally requires alpha > 1, which the radial kernel needs.
SystemParams validate(double n, double alpha, double p, double q,
                      double sigma1, double sigma2, bool for_solver = false);

/// Re-checks an existing params value (same rules as validate).
void check_valid(const SystemParams& params, bool for_solver = false);

DerivedExponents derive(const SystemParams& params);

Regime classify(const SystemParams& params);

/// Iterates the comparison-rate recurrence
///   a_{j+1} = p b_j - alpha + sigma2,   b_j = q a_j - alpha + sigma1
/// from b_0 and returns [b_0, ..., b_k]. Agreement with the closed form
/// b_k = (pq)^k (b_0 - q0) + q0 is asserted to 1e-10 relative. The sequence
/// is truncated once |b_j| exceeds 1e12 (geometric growth guard).
std::vector<double> bootstrap_sequence(const SystemParams& params, double b0, int k);

} // namespace hslab
