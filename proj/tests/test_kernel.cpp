#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "hslab/kernel.hpp"

using namespace hslab;

namespace {

// Gamma-composition closed form of the Riesz moment.
double riesz_moment_oracle(int n, double alpha, double beta) {
    auto lg = [](double x) { return std::lgamma(x); };
    const double log_val = 0.5 * n * std::log(M_PI)
        + lg(0.5 * (n - beta)) + lg(0.5 * alpha) + lg(0.5 * (beta - alpha))
        - lg(0.5 * beta) - lg(0.5 * (n - alpha)) - lg(0.5 * (n - beta + alpha));
    return std::exp(log_val);
}

} // namespace

TEST_CASE("surface areas of unit spheres") {
    CHECK(surface_area(2) == doctest::Approx(2 * M_PI).epsilon(1e-14));
    CHECK(surface_area(3) == doctest::Approx(4 * M_PI).epsilon(1e-14));
    CHECK(surface_area(4) == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-14));
}

TEST_CASE("angular kernel closed form for n=3, alpha=2") {
    // Newton shell: kappa(t) = 4 pi / max(1, t).
    CHECK(angular_kernel(3, 2.0, 0.5) == doctest::Approx(4 * M_PI).epsilon(1e-9));
    CHECK(angular_kernel(3, 2.0, 0.0) == doctest::Approx(4 * M_PI).epsilon(1e-12));
    CHECK(angular_kernel(3, 2.0, 2.0) == doctest::Approx(2 * M_PI).epsilon(1e-9));
    CHECK(angular_kernel(3, 2.0, 1.0) == doctest::Approx(4 * M_PI).epsilon(1e-8));

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    for (int i = 0; i < 50; ++i) {
        const double t = std::pow(10.0, uni(rng));
        const double expect = 4 * M_PI / std::max(1.0, t);
        CHECK(angular_kernel(3, 2.0, t) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("angular kernel reflection symmetry") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uni(-2.5, 2.5);
    for (int i = 0; i < 25; ++i) {
        const double t = std::pow(10.0, uni(rng));
        const double lhs = angular_kernel(4, 2.5, t);
        const double rhs = std::pow(t, 2.5 - 4.0) * angular_kernel(4, 2.5, 1.0 / t);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
    // near-singular alpha < 2 case
    const double t = 1.0 + 1e-7;
    const double lhs = angular_kernel(3, 1.5, t);
    const double rhs = std::pow(t, 1.5 - 3.0) * angular_kernel(3, 1.5, 1.0 / t);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
}

TEST_CASE("angular kernel rejects bad arguments") {
    CHECK_THROWS_AS(angular_kernel(3, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(angular_kernel(3, 0.5, 0.5), DomainError);
    CHECK_THROWS_AS(angular_kernel(3, 2.0, -1.0), DomainError);
}

TEST_CASE("profile interpolation and asymptotics") {
    const RadialKernelProfile prof(4, 2.5);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uni(-5.5, 5.5);
    for (int i = 0; i < 60; ++i) {
        const double t = std::pow(10.0, uni(rng));
        CHECK(prof.kappa(t) == doctest::Approx(angular_kernel(4, 2.5, t)).epsilon(1e-5));
    }
    const double sn = surface_area(4);
    CHECK(std::abs(prof.kappa(1e-3) / sn - 1.0) <= 1e-4);
    CHECK(std::abs(prof.kappa(1e3) / (sn * std::pow(1e3, 2.5 - 4.0)) - 1.0) <= 1e-4);

    // reflection symmetry across the table
    for (int i = 0; i < 30; ++i) {
        const double t = std::pow(10.0, uni(rng));
        CHECK(prof.kappa(t) ==
              doctest::Approx(std::pow(t, 2.5 - 4.0) * prof.kappa(1.0 / t)).epsilon(1e-5));
    }
}

TEST_CASE("kernel_value closed form and symmetry") {
    const RadialKernelProfile p32(3, 2.0);
    CHECK(p32.value(2.0, 1.0) == doctest::Approx(2 * M_PI).epsilon(1e-8));

    const RadialKernelProfile p42(4, 2.0);
    CHECK(p42.value(2.0, 0.0) ==
          doctest::Approx(2 * M_PI * M_PI / 4.0).epsilon(1e-12));

    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double r = std::pow(10.0, uni(rng));
        const double s = std::pow(10.0, uni(rng));
        CHECK(p32.value(r, s) * std::max(r, s) == doctest::Approx(4 * M_PI).epsilon(1e-8));
        CHECK(p42.value(r, s) == doctest::Approx(p42.value(s, r)).epsilon(1e-8));
    }
}

TEST_CASE("riesz moment matches the Gamma composition oracle") {
    const RadialKernelProfile prof(3, 2.0);
    CHECK(prof.riesz_moment(2.5) ==
          doctest::Approx(riesz_moment_oracle(3, 2.0, 2.5)).epsilon(1e-6));

    CHECK_THROWS_AS(prof.riesz_moment(2.0), DivergentIntegral);
    CHECK_THROWS_AS(prof.riesz_moment(1.5), DivergentIntegral);
    CHECK_THROWS_AS(prof.riesz_moment(3.0), DivergentIntegral);
    CHECK_THROWS_AS(prof.riesz_moment(3.5), DivergentIntegral);
    try {
        prof.riesz_moment(1.5);
    } catch (const DivergentIntegral& e) {
        CHECK(e.where() == DivergentIntegral::Endpoint::Infinity);
    }
    try {
        prof.riesz_moment(3.5);
    } catch (const DivergentIntegral& e) {
        CHECK(e.where() == DivergentIntegral::Endpoint::Origin);
    }
}

TEST_CASE("profile cache round-trips bit-identically") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "hslab_kernel_cache_test";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const RadialKernelProfile built(3, 1.8);
    built.save((dir / RadialKernelProfile::cache_file_name(3, 1.8)).string());
    const RadialKernelProfile loaded =
        RadialKernelProfile::load_or_build(3, 1.8, dir.string());

    REQUIRE(loaded.sample_t().size() == built.sample_t().size());
    for (std::size_t i = 0; i < built.sample_t().size(); ++i) {
        CHECK(loaded.sample_t()[i] == built.sample_t()[i]);
        CHECK(loaded.sample_kappa()[i] == built.sample_kappa()[i]);
    }
    fs::remove_all(dir);
}
