#include "hslab/exponents.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hslab {

namespace {

constexpr double kCriticalRelTol = 1e-12;
constexpr double kIdentityRelTol = 1e-12;
constexpr double kBootstrapGuard = 1e12;

double rel_gap(double a, double b) {
    double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(a - b) / scale;
}

// Always-on consistency check; these are cheap scalar identities.
void internal_check(bool ok, const char* what) {
    if (!ok) throw std::logic_error(std::string("exponent identity broken: ") + what);
}

} // namespace

const char* to_string(VCase c) {
    switch (c) {
        case VCase::Plain: return "plain";
        case VCase::Log: return "log";
        case VCase::Anomalous: return "anomalous";
    }
    return "?";
}

const char* to_string(RegimeKind k) {
    switch (k) {
        case RegimeKind::Subcritical: return "subcritical";
        case RegimeKind::Critical: return "critical";
        case RegimeKind::Supercritical: return "supercritical";
    }
    return "?";
}

SystemParams validate(double n, double alpha, double p, double q,
                      double sigma1, double sigma2, bool for_solver) {
    if (!(n >= 3) || n != std::floor(n))
        throw DomainError("n", "must be an integer >= 3");
    if (!(alpha > 0) || !(alpha < n))
        throw DomainError("alpha", "must lie in (0, n)");
    if (for_solver && !(alpha > 1))
        throw DomainError("alpha", "must lie in (1, n) for the radial kernel");
    if (!(p > 0))
        throw DomainError("p", "must be positive");
    if (!(q > 0))
        throw DomainError("q", "must be positive");
    if (!(p * q > 1)) {
        std::ostringstream msg;
        msg << "pq = " << p * q << " <= 1, no positive solutions (Liouville nonexistence)";
        throw DomainError("pq", msg.str());
    }
    if (!(sigma1 >= 0) || !(sigma1 < alpha))
        throw DomainError("sigma1", "must lie in [0, alpha)");
    if (!(sigma2 >= 0) || !(sigma2 < alpha))
        throw DomainError("sigma2", "must lie in [0, alpha)");
    return SystemParams{static_cast<int>(n), alpha, p, q, sigma1, sigma2};
}

void check_valid(const SystemParams& params, bool for_solver) {
    validate(params.n, params.alpha, params.p, params.q,
             params.sigma1, params.sigma2, for_solver);
}

DerivedExponents derive(const SystemParams& params) {
    check_valid(params);
    const double n = params.n, a = params.alpha;
    const double p = params.p, q = params.q;
    const double s1 = params.sigma1, s2 = params.sigma2;
    const double denom = p * q - 1.0;

    DerivedExponents d;
    d.p0 = (a * (1.0 + p) - (s2 + s1 * p)) / denom;
    d.q0 = (a * (1.0 + q) - (s1 + s2 * q)) / denom;
    d.r0 = n / d.q0;
    d.s0 = n / d.p0;
    d.fast_u = n - a;

    // Internal consistency: the slow rates balance the scaling of both
    // equations exactly.
    internal_check(rel_gap(d.q0, q * d.p0 - (a - s1)) < kIdentityRelTol, "q0 = q p0 - (alpha - sigma1)");
    internal_check(rel_gap(d.p0, p * d.q0 - (a - s2)) < kIdentityRelTol, "p0 = p q0 - (alpha - sigma2)");

    const double split = p * (n - a) + s2;  // against n, the trichotomy pivot
    const double scale = std::max({std::abs(split), n, 1.0});
    if (split - n > kCriticalRelTol * scale) {
        d.v_case = VCase::Plain;
        d.fast_v = n - a;
        d.fast_v_log = false;
    } else if (n - split > kCriticalRelTol * scale) {
        d.v_case = VCase::Anomalous;
        d.fast_v = p * (n - a) - (a - s2);
        d.fast_v_log = false;
    } else {
        d.v_case = VCase::Log;
        d.fast_v = n - a;
        d.fast_v_log = true;
    }
    return d;
}

Regime classify(const SystemParams& params) {
    check_valid(params);
    const DerivedExponents d = derive(params);
    const double n = params.n, a = params.alpha;

    Regime r;
    r.criticality = (n - params.sigma1) / (1.0 + params.q)
                  + (n - params.sigma2) / (1.0 + params.p) - (n - a);
    r.rate_sum_gap = d.q0 + d.p0 - (n - a);

    const double scale = std::max(n - a, 1.0);
    if (r.criticality > kCriticalRelTol * scale)
        r.kind = RegimeKind::Subcritical;
    else if (r.criticality < -kCriticalRelTol * scale)
        r.kind = RegimeKind::Supercritical;
    else
        r.kind = RegimeKind::Critical;

    // The two characterizations differ by the positive factor
    // (1+p)(1+q)/(pq-1); their signs must agree.
    internal_check(r.criticality * r.rate_sum_gap >= 0 ||
                   std::abs(r.rate_sum_gap) < 1e-9 * scale,
                   "sign(S) = sign(q0 + p0 - (n - alpha))");

    r.theorem_a_nonexistence = std::max(d.p0, d.q0) >= (n - a);
    if (r.theorem_a_nonexistence)
        r.notes = "max{p0, q0} >= n - alpha: no positive solutions at all";
    else if (r.kind == RegimeKind::Subcritical)
        r.notes = "no bounded decaying positive solutions";
    return r;
}

std::vector<double> bootstrap_sequence(const SystemParams& params, double b0, int k) {
    check_valid(params);
    if (k < 0) throw DomainError("k", "must be >= 0");

    const DerivedExponents d = derive(params);
    const double pq = params.p * params.q;

    std::vector<double> b;
    b.reserve(static_cast<size_t>(k) + 1);
    b.push_back(b0);
    for (int j = 1; j <= k; ++j) {
        const double aj = params.p * b.back() - params.alpha + params.sigma2;
        const double bj = params.q * aj - params.alpha + params.sigma1;
        if (std::abs(bj) > kBootstrapGuard) break;  // geometric growth guard
        const double closed = std::pow(pq, j) * (b0 - d.q0) + d.q0;
        internal_check(rel_gap(bj, closed) < 1e-10, "b_k = (pq)^k (b0 - q0) + q0");
        b.push_back(bj);
    }
    return b;
}

} // namespace hslab
