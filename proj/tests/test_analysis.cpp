#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"

using namespace hslab;
using namespace fixtures;

namespace {

// A synthetic "bundle" wrapping given fields as if converged.
SolutionBundle fake_bundle(const SystemParams& sp, RadialField u, RadialField v) {
    SolutionBundle b;
    b.params = sp;
    b.u = std::move(u);
    b.v = std::move(v);
    b.status = SolveStatus::Converged;
    b.operator_residual_u = b.operator_residual_v = 0;
    return b;
}

} // namespace

TEST_CASE("rate verdicts") {
    AnalysisOptions opts;

    SUBCASE("converged critical run is fast decay") {
        const RateReport r = rate_report(solved_bubble(), opts);
        CHECK(r.verdict == Verdict::FastDecay);
        CHECK(r.theta_u == doctest::Approx(1.0).epsilon(0.02));
        CHECK(r.theta_v == doctest::Approx(1.0).epsilon(0.02));
        CHECK_FALSE(r.log_u);
    }

    SUBCASE("synthetic slow pair is slow decay") {
        auto grid = default_grid();
        const auto& sp = critical_params();  // q0 = p0 = 1/2
        auto u = RadialField::from_function(
            grid, [](double r) { return std::pow(1.0 + r * r, -0.25); },
            TailHint{0.5, false});
        const RateReport r = rate_report(fake_bundle(sp, u, u), opts);
        CHECK(r.verdict == Verdict::SlowDecay);
        CHECK(r.theta_u == doctest::Approx(0.5).epsilon(0.02));
    }

    SUBCASE("rate fits require a decent window") {
        AnalysisOptions narrow;
        narrow.window_decades = 0.5;  // less than one decade
        CHECK_THROWS_AS(rate_report(solved_bubble(), narrow), FitError);
    }

    SUBCASE("non-converged bundles are rejected") {
        SolutionBundle nope;
        nope.status = SolveStatus::MaxIterations;
        CHECK_THROWS_AS(rate_report(nope, opts), DomainError);
    }
}

TEST_CASE("asymptotic constants on the converged critical run") {
    const AsymptoticConstants ac =
        asymptotic_constants(solved_bubble(), *newton_profile(), {});
    CHECK(ac.v_case == VCase::Plain);
    // scale-invariant cross-checks: tail amplitudes match the integrals
    CHECK(ac.u_gap < 0.05);
    CHECK(ac.v_gap < 0.05);
    REQUIRE(ac.a1.has_value());

    // aligned to the unit bubble, A0 equals the closed-form amplitude
    const auto& b = solved_bubble();
    const double A = bubble_amplitude();
    const double lam_now = std::pow(b.u.head.f0 / A, 2.0);
    auto aligned = rescale(b.u, b.v, b.params, 1.0 / lam_now);
    SolutionBundle unit = fake_bundle(b.params, aligned.first, aligned.second);
    const AsymptoticConstants au = asymptotic_constants(unit, *newton_profile(), {});
    CHECK(au.a0 == doctest::Approx(A).epsilon(0.05));
    CHECK(au.u_tail_amplitude == doctest::Approx(A).epsilon(0.05));
}

TEST_CASE("operator outputs carry the predicted asymptotic constants") {
    // Structural checks of the three-case limit laws for T2 applied to a
    // fast-decaying u with unit tail amplitude.
    auto grid = make_grid(1e-4, 1e6, 1536);
    auto prof = newton_profile();
    auto u = RadialField::from_function(
        grid, [](double r) { return std::pow(1.0 + r * r, -0.5); },
        TailHint{1.0, false});
    AnalysisOptions w;  // fit window [1e3, 1e5] on this grid
    const double sn = surface_area(3);

    SUBCASE("plain: v-amplitude approaches the weighted integral of u^p") {
        const auto sp = validate(3, 2, 4, 2, 0, 0);
        RadialField v = apply_T2(u, sp, prof, grid);
        const double predicted = sn * weighted_integral(u, 2.0, 4.0);
        const TailModel fit = fit_tail(v, 1e3, 1e5, false);
        CHECK(fit.amplitude == doctest::Approx(predicted).epsilon(0.05));
    }

    SUBCASE("log: v r^{n-alpha} grows with slope A^p |S^{n-1}| in ln r") {
        const auto sp = validate(3, 2, 3, 2, 0, 0);
        RadialField v = apply_T2(u, sp, prof, grid);
        CHECK(fit_tail(v, 1e3, 1e5, true).log_flag);
        // slope regression of v r against ln r removes the O(1) offset
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int count = 0;
        for (int i = 0; i < grid->size(); ++i) {
            const double r = grid->node(i);
            if (r < 1e3 || r > 1e5) continue;
            const double x = std::log(r), y = v.values[i] * r;
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++count;
        }
        const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
        CHECK(slope == doctest::Approx(sn).epsilon(0.05));  // A = 1
    }

    SUBCASE("anomalous: v-amplitude approaches A^p riesz_moment") {
        const auto sp = validate(3, 2, 2.5, 2, 0, 0);
        RadialField v = apply_T2(u, sp, prof, grid);
        const double predicted = prof->riesz_moment(2.5);  // p(n-a)+s2
        const TailModel fit = fit_tail(v, 1e3, 1e5, false);
        CHECK(fit.amplitude == doctest::Approx(predicted).epsilon(0.05));
    }

    SUBCASE("anomalous case refuses the plain-case constant") {
        // int u^p |y|^{-sigma2} dy diverges when p(n-alpha)+sigma2 < n,
        // which is exactly what moves the limit law to the anomalous branch.
        const auto sp = validate(3, 2, 2.5, 2, 0, 0);
        CHECK_THROWS_AS(weighted_integral(u, sp.n - 1.0 - sp.sigma2, sp.p),
                        DivergentIntegral);
    }
}

TEST_CASE("pohozaev identities") {
    SUBCASE("critical converged run balances the energies") {
        const PohozaevReport pr = pohozaev_report(solved_bubble());
        const double exact = std::pow(3.0 / (4.0 * M_PI), 1.5) * M_PI * M_PI / 4.0;
        CHECK(pr.e1 == doctest::Approx(exact).epsilon(0.01));
        CHECK(pr.e2 == doctest::Approx(exact).epsilon(0.01));
        CHECK(pr.energy_gap < 0.01);
        CHECK(pr.criticality_coefficient == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(pr.product == doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("mismatched non-solution pair shows an order-one gap") {
        auto grid = default_grid();
        const auto& sp = critical_params();
        auto u = exact_bubble(grid, 1.0);
        auto v = RadialField::from_function(
            grid, [](double r) { return 0.4 * std::pow(1.0 + r * r, -0.8); },
            TailHint{1.6, false});
        const PohozaevReport pr = pohozaev_report(fake_bundle(sp, u, v));
        CHECK(pr.energy_gap > 0.3);
    }

    SUBCASE("slow tails diverge, and the signal names the tail") {
        auto grid = default_grid();
        const auto& sp = critical_params();
        auto slow = RadialField::from_function(
            grid, [](double r) { return std::pow(1.0 + r * r, -0.25); },
            TailHint{0.5, false});
        // v^{q+1} s^2 has tail exponent 6*0.5 - 2 = 1: divergent
        CHECK_THROWS_AS(pohozaev_report(fake_bundle(sp, slow, slow)),
                        DivergentIntegral);
    }
}

TEST_CASE("criticality coefficient sign matches the regime") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const int n = 3 + int(uni(rng) * 5.99);
        const double alpha = 0.2 + (n - 0.4) * uni(rng);
        const double p = 0.3 + 7.7 * uni(rng);
        const double q = 0.3 + 7.7 * uni(rng);
        if (p * q <= 1.05) continue;
        const auto sp = validate(n, alpha, p, q, alpha * 0.9 * uni(rng),
                                 alpha * 0.9 * uni(rng));
        const Regime reg = classify(sp);
        if (reg.kind == RegimeKind::Subcritical) CHECK(reg.criticality > 0);
        if (reg.kind == RegimeKind::Supercritical) CHECK(reg.criticality < 0);
        if (reg.kind == RegimeKind::Critical)
            CHECK(std::abs(reg.criticality) <= 1e-12 * std::max(1.0, double(n)));
    }
}

TEST_CASE("integrability scan endpoints") {
    const auto rows = integrability_scan(solved_bubble(), {4.0, 6.0, 3.0}, {6.0, 3.0}, {});
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].stabilized);        // u, r = 4: interior
    CHECK(rows[1].stabilized);        // u, r = 6 = r0
    CHECK_FALSE(rows[2].stabilized);  // u, r = 3 = n/(n-alpha): endpoint
    CHECK(rows[2].last_ratio > 1.05);
    CHECK(rows[3].stabilized);        // v interior
    CHECK_FALSE(rows[4].stabilized);  // v endpoint
}

TEST_CASE("bound checks") {
    SUBCASE("the converged critical run satisfies both laws") {
        const BoundReport br = bound_checks(solved_bubble(), {}, true);
        CHECK(br.ok());
        CHECK(br.lower_u > 0);
        CHECK(br.lower_v > 0);
        CHECK(br.upper_u < HUGE_VAL);
    }

    SUBCASE("decay slower than the slow rate is flagged") {
        auto grid = default_grid();
        const auto& sp = critical_params();  // q0 = 0.5
        auto too_slow = RadialField::from_function(
            grid, [](double r) { return std::pow(1.0 + r * r, -0.15); },
            TailHint{0.3, false});
        CHECK_THROWS_AS(bound_checks(fake_bundle(sp, too_slow, too_slow), {}, true),
                        BoundViolation);
        const BoundReport br =
            bound_checks(fake_bundle(sp, too_slow, too_slow), {}, false);
        CHECK_FALSE(br.ok());
        CHECK(br.violations.size() >= 2);
    }

    SUBCASE("decay faster than the fast-rate floor is flagged") {
        auto grid = default_grid();
        const auto& sp = critical_params();
        auto too_fast = RadialField::from_function(
            grid, [](double r) { return std::pow(1.0 + r * r, -1.0); },
            TailHint{2.0, false});
        const BoundReport br =
            bound_checks(fake_bundle(sp, too_fast, too_fast), {}, false);
        CHECK_FALSE(br.ok());
    }
}
