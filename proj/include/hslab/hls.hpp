#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hslab/kernel.hpp"
#include "hslab/radial.hpp"

namespace hslab {

/// Lebesgue indices and weights of the doubly weighted convolution functional
///   J(f, g) = int int f(x) g(y) |x|^{-sigma1} |x-y|^{alpha-n} |y|^{-sigma2} dx dy.
struct HlsIndices {
    int n = 3;
    double alpha = 2.0;
    double r = 1.2;
    double s = 1.2;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
};

struct IndexCheck {
    bool valid = true;
    std::vector<std::string> failures;
};

/// Verifies r, s in (1, inf), 0 <= sigma1 + sigma2 <= alpha, the sigma1
/// bracket alpha/n - 1/r < sigma1/n < 1 - 1/r, and the index relation
/// 1/r + 1/s + (sigma1 + sigma2)/n = (n + alpha)/n (to 1e-12 relative).
IndexCheck check_indices(const HlsIndices& idx);

/// J(f, g) for radial pairs by tensorized quadrature sharing the kernel
/// profile and the singular-panel treatment along r = s:
///   J = |S^{n-1}| int int f(r) g(s) r^{n-1-sigma1} s^{n-1-sigma2} K(r, s) dr ds.
/// Throws DivergentIntegral naming the failing corner, DomainError on
/// invalid indices.
double j_functional(const RadialField& f, const RadialField& g,
                    const HlsIndices& idx,
                    std::shared_ptr<const RadialKernelProfile> profile);

/// Independent cross-check of j_functional: direct two-dimensional panel
/// quadrature over [r_lo, r_hi]^2 with graded refinement along the diagonal,
/// evaluating the kernel by angular quadrature at every node (no table, no
/// field interpolation, no closures). Slow; the given truncation must make
/// the neglected corners negligible for the pair at hand.
double j_functional_brute(const std::function<double(double)>& f,
                          const std::function<double(double)>& g,
                          const HlsIndices& idx,
                          double r_lo, double r_hi,
                          double panels_per_decade = 4.0);

/// ||f||_{L^r(R^n)} of a radial profile.
double lebesgue_norm(const RadialField& f, double r, int n);

/// J(f, g) / (||f||_r ||g||_s); dilation-invariant when the index relation
/// holds.
double j_normalized(const RadialField& f, const RadialField& g,
                    const HlsIndices& idx,
                    std::shared_ptr<const RadialKernelProfile> profile);

} // namespace hslab
