#include "hslab/hls.hpp"

#include <cmath>
#include <sstream>

#include "hslab/potential.hpp"
#include "hslab/quadrature.hpp"

namespace hslab {

IndexCheck check_indices(const HlsIndices& idx) {
    IndexCheck out;
    auto fail = [&](const std::string& msg) {
        out.valid = false;
        out.failures.push_back(msg);
    };
    if (idx.n < 3) fail("n must be >= 3");
    if (!(idx.alpha > 0 && idx.alpha < idx.n)) fail("alpha must lie in (0, n)");
    if (!(idx.r > 1)) fail("r must exceed 1");
    if (!(idx.s > 1)) fail("s must exceed 1");
    if (!(idx.sigma1 >= 0 && idx.sigma2 >= 0))
        fail("weights must be nonnegative");
    if (!(idx.sigma1 + idx.sigma2 <= idx.alpha))
        fail("sigma1 + sigma2 must not exceed alpha");
    const double n = idx.n;
    if (!(idx.alpha / n - 1.0 / idx.r < idx.sigma1 / n))
        fail("sigma1/n must exceed alpha/n - 1/r");
    if (!(idx.sigma1 / n < 1.0 - 1.0 / idx.r))
        fail("sigma1/n must stay below 1 - 1/r");
    const double relation = 1.0 / idx.r + 1.0 / idx.s + (idx.sigma1 + idx.sigma2) / n;
    const double target = (n + idx.alpha) / n;
    if (std::abs(relation - target) > 1e-12 * target) {
        std::ostringstream msg;
        msg << "index relation off: 1/r + 1/s + (s1+s2)/n = " << relation
            << " vs (n+alpha)/n = " << target;
        fail(msg.str());
    }
    return out;
}

namespace {

// One iterated evaluation: inner potential against g (weight sigma_inner),
// outer weighted integral against f (weight sigma_outer).
double j_one_ordering(const RadialField& f, const RadialField& g,
                      double sigma_outer, double sigma_inner,
                      const std::shared_ptr<const RadialKernelProfile>& profile) {
    PotentialOperator inner(profile, f.grid, sigma_inner, 1.0);
    RadialField pot = inner.apply(g);

    RadialField prod;
    prod.grid = f.grid;
    prod.values.resize(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i)
        prod.values[i] = f.values[i] * pot.values[i];
    prod.head.f0 = f.head.f0 * pot.head.f0;
    prod.head.c = f.head.c + pot.head.c;
    prod.tail.exponent = f.tail.exponent + pot.tail.exponent;
    prod.tail.log_flag = f.tail.log_flag || pot.tail.log_flag;
    prod.tail.amplitude = f.tail.amplitude * pot.tail.amplitude;

    return profile->sphere_area()
           * weighted_integral(prod, profile->n() - 1.0 - sigma_outer, 1.0);
}

} // namespace

double j_functional(const RadialField& f, const RadialField& g,
                    const HlsIndices& idx,
                    std::shared_ptr<const RadialKernelProfile> profile) {
    const IndexCheck chk = check_indices(idx);
    if (!chk.valid) throw DomainError("indices", chk.failures.front());
    if (profile->n() != idx.n || profile->alpha() != idx.alpha)
        throw DomainError("profile", "kernel profile does not match the indices");

    // Both iterated orderings, averaged: the quadrature then respects the
    // exact (f, sigma1) <-> (g, sigma2) symmetry of the functional.
    const double a = j_one_ordering(f, g, idx.sigma1, idx.sigma2, profile);
    const double b = j_one_ordering(g, f, idx.sigma2, idx.sigma1, profile);
    return 0.5 * (a + b);
}

double j_functional_brute(const std::function<double(double)>& f,
                          const std::function<double(double)>& g,
                          const HlsIndices& idx,
                          double r_lo, double r_hi,
                          double panels_per_decade) {
    const IndexCheck chk = check_indices(idx);
    if (!chk.valid) throw DomainError("indices", chk.failures.front());
    const int n = idx.n;
    const double alpha = idx.alpha;

    std::vector<double> outer_nodes, outer_weights;
    {
        const auto edges = log_panels(r_lo, r_hi, panels_per_decade);
        for (std::size_t k = 0; k + 1 < edges.size(); ++k)
            gauss7_nodes(edges[k], edges[k + 1], outer_nodes, outer_weights);
    }

    double total = 0;
    for (std::size_t a = 0; a < outer_nodes.size(); ++a) {
        const double r = outer_nodes[a];
        // Inner domain [r_lo, r_hi] split into below / around / above the
        // diagonal, with the middle part graded into the kink at s = r.
        const double mid_lo = std::max(r_lo, 0.5 * r);
        const double mid_hi = std::min(r_hi, 2.0 * r);
        std::vector<double> sn, sw;
        auto add = [&](const std::vector<double>& edges) {
            for (std::size_t k = 0; k + 1 < edges.size(); ++k)
                gauss7_nodes(edges[k], edges[k + 1], sn, sw);
        };
        if (mid_lo > r_lo) add(log_panels(r_lo, mid_lo, panels_per_decade));
        add(graded_panels_about(mid_lo, mid_hi, r, 1e-10, 2.0));
        if (mid_hi < r_hi) add(log_panels(mid_hi, r_hi, panels_per_decade));
        double inner = 0;
        for (std::size_t b = 0; b < sn.size(); ++b) {
            const double s = sn[b];
            inner += sw[b] * g(s) * std::pow(s, n - 1.0 - idx.sigma2)
                     * std::pow(r, alpha - n) * angular_kernel(n, alpha, s / r);
        }
        total += outer_weights[a] * f(r) * std::pow(r, n - 1.0 - idx.sigma1) * inner;
    }
    return surface_area(n) * total;
}

double lebesgue_norm(const RadialField& f, double r, int n) {
    if (!(r > 0)) throw DomainError("r", "must be positive");
    return std::pow(surface_area(n) * weighted_integral(f, n - 1.0, r), 1.0 / r);
}

double j_normalized(const RadialField& f, const RadialField& g,
                    const HlsIndices& idx,
                    std::shared_ptr<const RadialKernelProfile> profile) {
    const double j = j_functional(f, g, idx, std::move(profile));
    return j / (lebesgue_norm(f, idx.r, idx.n) * lebesgue_norm(g, idx.s, idx.n));
}

} // namespace hslab
