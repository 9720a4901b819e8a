#include <doctest.h>

#include <cmath>

#include "hslab/errors.hpp"
#include "hslab/quadrature.hpp"

using namespace hslab;

TEST_CASE("adaptive integration hits analytic values") {
    AdaptiveOptions opts;
    opts.rel_tol = 1e-12;

    const double s = adaptive_integrate([](double x) { return std::sin(x); },
                                        0.0, M_PI, opts);
    CHECK(s == doctest::Approx(2.0).epsilon(1e-12));

    const double e = adaptive_integrate([](double x) { return std::exp(-x); },
                                        0.0, 40.0, opts);
    CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adaptive integration resolves an endpoint singularity with grading") {
    AdaptiveOptions opts;
    opts.rel_tol = 1e-11;
    std::vector<double> breaks;
    for (double d = 0.5; d > 1e-60; d /= 2) breaks.push_back(d);
    // int_0^1 x^{-1/2} dx = 2
    const double v = adaptive_integrate([](double x) { return 1.0 / std::sqrt(x); },
                                        0.0, 1.0, opts, breaks);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("adaptive integration reports budget exhaustion") {
    AdaptiveOptions opts;
    opts.rel_tol = 1e-14;
    opts.max_evals = 60;
    CHECK_THROWS_AS(adaptive_integrate([](double x) { return std::sqrt(std::abs(x)); },
                                       -1.0, 1.0, opts),
                    NonConvergence);
}

TEST_CASE("gauss panel helpers") {
    const double v = gauss7([](double x) { return x * x * x * x; }, 0.0, 1.0);
    CHECK(v == doctest::Approx(0.2).epsilon(1e-14));

    std::vector<double> nodes, weights;
    gauss7_nodes(2.0, 3.0, nodes, weights);
    REQUIRE(nodes.size() == 7);
    double sum = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        sum += weights[i] * nodes[i] * nodes[i];
    CHECK(sum == doctest::Approx((27.0 - 8.0) / 3.0).epsilon(1e-14));

    const auto edges = log_panels(1e-2, 1e2, 2.0);
    CHECK(edges.front() == doctest::Approx(1e-2));
    CHECK(edges.back() == doctest::Approx(1e2));
    CHECK(edges.size() == 9);

    const auto graded = graded_panels_about(0.5, 2.0, 1.0, 1e-6, 2.0);
    CHECK(graded.front() == doctest::Approx(0.5));
    CHECK(graded.back() == doctest::Approx(2.0));
    for (std::size_t i = 0; i + 1 < graded.size(); ++i)
        CHECK(graded[i] < graded[i + 1]);
}
