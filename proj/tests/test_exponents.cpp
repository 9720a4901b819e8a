#include <doctest.h>

#include <cmath>
#include <random>

#include "hslab/exponents.hpp"

using namespace hslab;

namespace {

SystemParams random_valid(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dim(3, 8);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    while (true) {
        const int n = dim(rng);
        const double alpha = 0.2 + (n - 0.4) * uni(rng);
        const double p = 0.3 + 7.7 * uni(rng);
        const double q = 0.3 + 7.7 * uni(rng);
        if (p * q <= 1.05) continue;
        const double s1 = alpha * 0.95 * uni(rng);
        const double s2 = alpha * 0.95 * uni(rng);
        return validate(n, alpha, p, q, s1, s2);
    }
}

} // namespace

TEST_CASE("validate accepts and rejects per the stated constraints") {
    CHECK_NOTHROW(validate(3, 2, 5, 5, 0, 0));

    CHECK_THROWS_AS(validate(3, 2, 1, 1, 0, 0), DomainError);
    try {
        validate(3, 2, 1, 1, 0, 0);
    } catch (const DomainError& e) {
        CHECK(e.field() == "pq");
        CHECK(std::string(e.what()).find("no positive solutions") != std::string::npos);
    }

    CHECK_THROWS_AS(validate(3, 2, 5, 5, 2.5, 0), DomainError);
    try {
        validate(3, 2, 5, 5, 2.5, 0);
    } catch (const DomainError& e) {
        CHECK(e.field() == "sigma1");
    }

    CHECK_THROWS_AS(validate(2, 1.5, 5, 5, 0, 0), DomainError);
    CHECK_THROWS_AS(validate(3, 0, 5, 5, 0, 0), DomainError);
    CHECK_THROWS_AS(validate(3, 3, 5, 5, 0, 0), DomainError);
    CHECK_THROWS_AS(validate(3, 2, -1, 5, 0, 0), DomainError);
    CHECK_THROWS_AS(validate(3, 2, 5, 5, 0, -0.1), DomainError);

    // alpha in (0, 1] is fine for classification but not for the solver.
    CHECK_NOTHROW(validate(3, 0.5, 5, 5, 0, 0));
    CHECK_THROWS_AS(validate(3, 0.5, 5, 5, 0, 0, /*for_solver=*/true), DomainError);
}

TEST_CASE("derive reproduces hand-evaluated exponents") {
    const auto d1 = derive(validate(3, 2, 5, 5, 0, 0));
    CHECK(d1.p0 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(d1.q0 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(d1.r0 == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(d1.s0 == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(d1.fast_u == doctest::Approx(1.0));
    CHECK(d1.v_case == VCase::Plain);  // p(n-alpha)+sigma2 = 5 > 3
    CHECK(d1.fast_v == doctest::Approx(1.0));
    CHECK_FALSE(d1.fast_v_log);

    const auto d2 = derive(validate(4, 2, 2, 3, 1, 0.5));
    CHECK(d2.q0 == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(d2.p0 == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(3.0 * d2.p0 - (2.0 - 1.0) == doctest::Approx(d2.q0).epsilon(1e-12));

    const auto d3 = derive(validate(3, 2, 3, 3, 0, 0));
    CHECK(d3.v_case == VCase::Log);  // p(n-alpha)+sigma2 = 3 = n
    CHECK(d3.fast_v_log);
    CHECK(d3.fast_v == doctest::Approx(1.0));

    const auto d4 = derive(validate(3, 2, 2.5, 4, 0, 0));
    CHECK(d4.v_case == VCase::Anomalous);  // 2.5 < 3
    CHECK(d4.fast_v == doctest::Approx(2.5 * 1.0 - 2.0));
}

TEST_CASE("classify matches the sign of the criticality sum") {
    const auto r1 = classify(validate(3, 2, 5, 5, 0, 0));
    CHECK(r1.kind == RegimeKind::Critical);  // 3/6 + 3/6 = 1 = n - alpha
    CHECK(r1.criticality == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_FALSE(r1.theorem_a_nonexistence);

    const auto r2 = classify(validate(5, 2, 4, 4, 0, 0));
    CHECK(r2.kind == RegimeKind::Supercritical);  // 5/5 + 5/5 = 2 < 3
    CHECK_FALSE(r2.theorem_a_nonexistence);

    const auto r3 = classify(validate(5, 2, 1.5, 1.5, 0, 0));
    CHECK(r3.theorem_a_nonexistence);  // q0 = 4 >= n - alpha = 3

    const auto r4 = classify(validate(3, 2, 4, 4, 0, 0));
    CHECK(r4.kind == RegimeKind::Subcritical);  // 3/5 + 3/5 = 1.2 > 1
}

TEST_CASE("exponent identities over random valid tuples") {
    std::mt19937_64 rng(0x5eed);
    for (int trial = 0; trial < 10000; ++trial) {
        const SystemParams sp = random_valid(rng);
        const auto d = derive(sp);
        const double a = sp.alpha;
        const double lhs1 = sp.q * d.p0 - (a - sp.sigma1);
        const double lhs2 = sp.p * d.q0 - (a - sp.sigma2);
        const double scale = std::max({std::abs(d.q0), std::abs(d.p0), 1.0});
        CHECK(std::abs(lhs1 - d.q0) <= 1e-10 * scale);
        CHECK(std::abs(lhs2 - d.p0) <= 1e-10 * scale);

        // -q0 (p+1) + n - sigma2 = (n - alpha) - (q0 + p0)
        const double left = -d.q0 * (sp.p + 1.0) + sp.n - sp.sigma2;
        const double right = (sp.n - a) - (d.q0 + d.p0);
        CHECK(std::abs(left - right) <= 1e-10 * std::max(std::abs(left), 1.0));

        const auto reg = classify(sp);
        if (std::abs(reg.criticality) > 1e-9)
            CHECK(reg.criticality * reg.rate_sum_gap > 0);
    }
}

TEST_CASE("bootstrap sequence follows the closed form") {
    SUBCASE("fixed point stays put") {
        const auto sp = validate(3, 2, 5, 5, 0, 0);
        const auto d = derive(sp);
        const auto seq = bootstrap_sequence(sp, d.q0, 10);
        REQUIRE(seq.size() == 11);
        for (double b : seq) CHECK(b == doctest::Approx(d.q0).epsilon(1e-12));
    }
    SUBCASE("pq = 2 instance with q0 = 1") {
        const auto sp = validate(3, 1.0 / 3.0, 1, 2, 0, 0);
        const auto d = derive(sp);
        CHECK(d.q0 == doctest::Approx(1.0).epsilon(1e-14));
        const auto seq = bootstrap_sequence(sp, 0.5, 2);
        REQUIRE(seq.size() == 3);
        CHECK(seq[1] == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(seq[2] == doctest::Approx(-1.0).epsilon(1e-14));
    }
    SUBCASE("k = 0 returns just b0") {
        const auto sp = validate(3, 2, 5, 5, 0, 0);
        const auto seq = bootstrap_sequence(sp, 0.37, 0);
        REQUIRE(seq.size() == 1);
        CHECK(seq[0] == doctest::Approx(0.37));
    }
    SUBCASE("closed form holds to k = 40 over random tuples") {
        std::mt19937_64 rng(0xb007);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            const SystemParams sp = random_valid(rng);
            const auto d = derive(sp);
            const double b0 = d.q0 + (uni(rng) - 0.5);
            const auto seq = bootstrap_sequence(sp, b0, 40);
            const double pq = sp.p * sp.q;
            for (std::size_t k = 0; k < seq.size(); ++k) {
                const double closed = std::pow(pq, double(k)) * (b0 - d.q0) + d.q0;
                CHECK(std::abs(seq[k] - closed)
                      <= 1e-10 * std::max(std::abs(closed), 1.0));
            }
            // guard: anything past the cut would have exceeded 1e12
            if (seq.size() < 41u)
                CHECK(std::abs(std::pow(pq, double(seq.size())) * (b0 - d.q0) + d.q0)
                      > 1e12);
        }
    }
}
