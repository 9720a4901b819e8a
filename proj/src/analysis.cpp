#include "hslab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hslab {

namespace {

void require_converged(const SolutionBundle& bundle) {
    if (!bundle.converged())
        throw DomainError("bundle", "analysis needs a converged solution");
}

double rel_gap(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

} // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::FastDecay: return "fast_decay";
        case Verdict::SlowDecay: return "slow_decay";
        case Verdict::Indeterminate: return "indeterminate";
    }
    return "?";
}

RateReport rate_report(const SolutionBundle& bundle, const AnalysisOptions& opts) {
    require_converged(bundle);
    const RadialGrid& g = *bundle.u.grid;
    const DerivedExponents d = derive(bundle.params);

    RateReport rep;
    rep.window_lo = opts.window_lo(g);
    rep.window_hi = opts.window_hi(g);

    TailModel tu = fit_tail(bundle.u, rep.window_lo, rep.window_hi, true, rep.rms_u);
    TailModel tv = fit_tail(bundle.v, rep.window_lo, rep.window_hi, true, rep.rms_v);
    rep.theta_u = tu.exponent;
    rep.theta_v = tv.exponent;
    rep.log_u = tu.log_flag;
    rep.log_v = tv.log_flag;

    rep.slow_u = d.q0;
    rep.slow_v = d.p0;
    rep.fast_u = d.fast_u;
    rep.fast_v = d.fast_v;
    rep.fast_v_log = d.fast_v_log;

    const double tol = opts.rate_tol;
    const bool fast_u_ok = std::abs(rep.theta_u - d.fast_u) <= tol && !rep.log_u;
    const bool fast_v_ok = std::abs(rep.theta_v - d.fast_v) <= tol
                           && rep.log_v == d.fast_v_log;
    const bool slow_ok = std::abs(rep.theta_u - d.q0) <= tol
                         && std::abs(rep.theta_v - d.p0) <= tol
                         && !rep.log_u && !rep.log_v;
    const bool fast_ok = fast_u_ok && fast_v_ok;
    if (fast_ok && !slow_ok)
        rep.verdict = Verdict::FastDecay;
    else if (slow_ok && !fast_ok)
        rep.verdict = Verdict::SlowDecay;
    else
        rep.verdict = Verdict::Indeterminate;
    return rep;
}

AsymptoticConstants asymptotic_constants(const SolutionBundle& bundle,
                                         const RadialKernelProfile& profile,
                                         const AnalysisOptions& opts) {
    require_converged(bundle);
    const SystemParams& sp = bundle.params;
    const DerivedExponents d = derive(sp);
    const double sn = profile.sphere_area();
    const RadialGrid& g = *bundle.u.grid;

    AsymptoticConstants out;
    out.v_case = d.v_case;
    out.a0 = sn * weighted_integral(bundle.v, sp.n - 1.0 - sp.sigma1, sp.q);

    const double lo = opts.window_lo(g), hi = opts.window_hi(g);
    out.u_tail_amplitude = fit_tail(bundle.u, lo, hi, false).amplitude;
    if (d.v_case == VCase::Log) {
        // v r^{n-alpha} = C ln r + O(1): the slope estimator kills the O(1)
        // offset that biases a plain amplitude fit at finite radii.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int count = 0;
        for (int i = 0; i < g.size(); ++i) {
            const double r = g.node(i);
            if (r < lo || r > hi) continue;
            const double x = std::log(r);
            const double y = bundle.v.values[i] * std::pow(r, sp.n - sp.alpha);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++count;
        }
        if (count < 16) throw FitError("log-amplitude window holds too few nodes");
        out.v_tail_amplitude = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    } else {
        out.v_tail_amplitude = fit_tail(bundle.v, lo, hi, true).amplitude;
    }

    out.u_gap = rel_gap(out.u_tail_amplitude, out.a0);

    double v_target = 0;
    switch (d.v_case) {
        case VCase::Plain:
            out.a1 = sn * weighted_integral(bundle.u, sp.n - 1.0 - sp.sigma2, sp.p);
            v_target = *out.a1;
            break;
        case VCase::Anomalous:
            out.a2 = std::pow(out.a0, sp.p)
                     * profile.riesz_moment(sp.p * (sp.n - sp.alpha) + sp.sigma2);
            v_target = *out.a2;
            break;
        case VCase::Log:
            v_target = std::pow(out.a0, sp.p) * sn;
            out.log_amplitude = v_target;
            break;
    }
    if (d.v_case != VCase::Log) out.log_amplitude = 0;
    out.v_gap = rel_gap(out.v_tail_amplitude, v_target);
    return out;
}

PohozaevReport pohozaev_report(const SolutionBundle& bundle) {
    require_converged(bundle);
    const SystemParams& sp = bundle.params;
    const double sn = surface_area(sp.n);

    PohozaevReport rep;
    rep.e1 = sn * weighted_integral(bundle.v, sp.n - 1.0 - sp.sigma1, sp.q + 1.0);
    rep.e2 = sn * weighted_integral(bundle.u, sp.n - 1.0 - sp.sigma2, sp.p + 1.0);
    rep.energy_gap = std::abs(rep.e1 - rep.e2) / std::max(rep.e1, rep.e2);
    rep.criticality_coefficient = classify(sp).criticality;
    rep.product = rep.criticality_coefficient * rep.e1;
    return rep;
}

std::vector<IntegrabilityRow> integrability_scan(const SolutionBundle& bundle,
                                                 const std::vector<double>& u_exponents,
                                                 const std::vector<double>& v_exponents,
                                                 const AnalysisOptions& opts) {
    require_converged(bundle);
    const SystemParams& sp = bundle.params;
    const double sn = surface_area(sp.n);

    std::vector<IntegrabilityRow> rows;
    auto scan_one = [&](const RadialField& f, char tag, double expo) {
        IntegrabilityRow row;
        row.component = tag;
        row.exponent = expo;
        for (double R : opts.scan_radii) {
            const double val =
                sn * weighted_integral_truncated(f, sp.n - 1.0, expo, R);
            row.norms.push_back(std::pow(val, 1.0 / expo));
        }
        const std::size_t m = row.norms.size();
        row.last_ratio = m >= 2 ? row.norms[m - 1] / row.norms[m - 2] : 1.0;
        row.stabilized = std::abs(row.last_ratio - 1.0) <= opts.ratio_tol;
        rows.push_back(std::move(row));
    };
    for (double e : u_exponents) scan_one(bundle.u, 'u', e);
    for (double e : v_exponents) scan_one(bundle.v, 'v', e);
    return rows;
}

BoundReport bound_checks(const SolutionBundle& bundle,
                         const AnalysisOptions& opts, bool strict) {
    require_converged(bundle);
    const SystemParams& sp = bundle.params;
    const DerivedExponents d = derive(sp);
    const RadialGrid& g = *bundle.u.grid;
    const double hi = opts.window_hi(g);
    const double anomalous_rate = sp.p * (sp.n - sp.alpha) - (sp.alpha - sp.sigma2);
    const double low_v = std::min(d.fast_u, anomalous_rate);

    BoundReport rep;
    rep.upper_u = 0;
    rep.upper_v = 0;
    rep.lower_u = HUGE_VAL;
    rep.lower_v = HUGE_VAL;
    for (int i = 0; i < g.size(); ++i) {
        const double r = g.node(i);
        if (r < 1.0 || r > hi) continue;
        rep.upper_u = std::max(rep.upper_u, bundle.u.values[i] * std::pow(1 + r, d.q0));
        rep.upper_v = std::max(rep.upper_v, bundle.v.values[i] * std::pow(1 + r, d.p0));
        rep.lower_u = std::min(rep.lower_u,
                               bundle.u.values[i] * std::pow(1 + r, d.fast_u));
        rep.lower_v = std::min(rep.lower_v, bundle.v.values[i] * std::pow(1 + r, low_v));
    }

    const double lo = opts.window_lo(g);
    rep.fitted_u = fit_tail(bundle.u, lo, hi, true).exponent;
    rep.fitted_v = fit_tail(bundle.v, lo, hi, true).exponent;

    const double tol = opts.rate_tol;
    auto flag = [&](bool bad, const std::string& msg) {
        if (bad) rep.violations.push_back(msg);
    };
    std::ostringstream m1, m2, m3, m4;
    m1 << "u decays slower than the slow rate: theta " << rep.fitted_u
       << " < q0 = " << d.q0;
    flag(rep.fitted_u < d.q0 - tol, m1.str());
    m2 << "v decays slower than the slow rate: theta " << rep.fitted_v
       << " < p0 = " << d.p0;
    flag(rep.fitted_v < d.p0 - tol, m2.str());
    m3 << "u decays faster than the fast-rate floor: theta " << rep.fitted_u
       << " > n - alpha = " << d.fast_u;
    flag(rep.fitted_u > d.fast_u + tol, m3.str());
    m4 << "v decays faster than its lower-bound rate: theta " << rep.fitted_v
       << " > " << low_v;
    flag(rep.fitted_v > low_v + tol, m4.str());
    flag(!(rep.lower_u > 0) || !(rep.lower_v > 0),
         "window lower-bound constants are not positive");

    if (strict && !rep.ok())
        throw BoundViolation(rep.violations.front(), rep);
    return rep;
}

} // namespace hslab
