#pragma once

#include <string>
#include <vector>

#include "hslab/errors.hpp"

namespace hslab {

/// Surface area of the unit sphere S^{n-1}, 2 pi^{n/2} / Gamma(n/2).
double surface_area(int n);

/// Sphere average of the Riesz kernel at unit radius,
///   kappa(t) = int_{S^{n-1}} |e - t w|^{alpha-n} dw
///            = |S^{n-2}| int_0^pi (1 + t^2 - 2 t cos h)^{(alpha-n)/2} sin^{n-2}h dh,
/// by adaptive quadrature to ~1e-10 relative. Near t = 1 the integrand has an
/// integrable h^{alpha-2} endpoint singularity, pre-graded geometrically toward
/// h = 0; full accuracy needs alpha - 1 not too small (>= ~0.05, else the
/// grading depth is limited by double range).
/// Requires alpha in (1, n): at alpha <= 1 the diagonal value diverges.
double angular_kernel(int n, double alpha, double t);

/// Tabulated kappa(t) with monotone-cubic interpolation in log-log
/// coordinates, split at the derivative kink t = 1. Outside the table the
/// two-term power asymptote is used (relative error ~t_min^4). Immutable
/// once built; safe to share across threads.
class RadialKernelProfile {
public:
    RadialKernelProfile(int n, double alpha);

    /// Loads the sample table from `cache_dir` if a matching file exists,
    /// otherwise builds it and writes the cache (best effort). Cached tables
    /// are stored bit-exact, so hits reproduce regeneration exactly.
    static RadialKernelProfile load_or_build(int n, double alpha,
                                             const std::string& cache_dir);

    int n() const noexcept { return n_; }
    double alpha() const noexcept { return alpha_; }
    double sphere_area() const noexcept { return sphere_; }

    double kappa(double t) const;

    /// K(r, s) = r^{alpha-n} kappa(s/r); symmetric in (r, s).
    double value(double r, double s) const;

    /// int_{R^n} |z|^{-beta} |e - z|^{alpha-n} dz = int_0^inf kappa(s) s^{n-1-beta} ds.
    /// Throws DivergentIntegral naming the failing endpoint when beta is
    /// outside the window (alpha, n). Evaluates kappa by direct quadrature
    /// rather than through the table, to keep full accuracy.
    double riesz_moment(double beta) const;

    const std::vector<double>& sample_t() const noexcept { return t_; }
    const std::vector<double>& sample_kappa() const noexcept { return k_; }

    void save(const std::string& path) const;
    static RadialKernelProfile load(const std::string& path);

    static std::string cache_file_name(int n, double alpha);

private:
    RadialKernelProfile() = default;
    void finish_setup();  // derived arrays (logs, slopes) from t_, k_

    int n_ = 0;
    double alpha_ = 0;
    double sphere_ = 0;   // |S^{n-1}|
    double c2_ = 0;       // small-t correction: kappa ~ |S|(1 + c2 t^2)
    std::vector<double> t_, k_;       // samples, ascending t, includes t = 1
    std::vector<double> lt_, lk_, m_; // log t, log kappa, interpolation slopes
    std::size_t split_ = 0;           // index of t = 1
    double split_slope_left_ = 0;     // left-sided slope at the kink
};

/// Free-function spellings of the profile operations.
inline double kernel_value(const RadialKernelProfile& profile, double r, double s) {
    return profile.value(r, s);
}
inline double riesz_moment(const RadialKernelProfile& profile, double beta) {
    return profile.riesz_moment(beta);
}

} // namespace hslab
