#include "hslab/kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "hslab/quadrature.hpp"

namespace hslab {

namespace {

constexpr double kTableMin = 1e-6;
constexpr double kTableMax = 1e6;
constexpr int kTableCount = 2048;
constexpr int kGradedPerSide = 128;
constexpr double kGradedInner = 1e-7;
constexpr double kGradedOuter = 0.25;

void check_kernel_params(int n, double alpha) {
    if (n < 3) throw DomainError("n", "must be >= 3");
    if (!(alpha > 1.0))
        throw DomainError("alpha", "must exceed 1 (diagonal kernel value diverges)");
    if (!(alpha < n)) throw DomainError("alpha", "must be below n");
}

// Monotone cubic slopes (Fritsch-Carlson) for data on [first, last).
void pchip_slopes(const std::vector<double>& x, const std::vector<double>& y,
                  std::size_t first, std::size_t last, std::vector<double>& m) {
    const std::size_t count = last - first;
    if (count < 2) return;
    if (count == 2) {
        const double d = (y[first + 1] - y[first]) / (x[first + 1] - x[first]);
        m[first] = m[first + 1] = d;
        return;
    }
    std::vector<double> h(count - 1), del(count - 1);
    for (std::size_t i = 0; i + 1 < count; ++i) {
        h[i] = x[first + i + 1] - x[first + i];
        del[i] = (y[first + i + 1] - y[first + i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < count; ++i) {
        if (del[i - 1] * del[i] <= 0) {
            m[first + i] = 0;
        } else {
            const double w1 = 2 * h[i] + h[i - 1];
            const double w2 = h[i] + 2 * h[i - 1];
            m[first + i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
        }
    }
    auto edge = [](double h0, double h1, double d0, double d1) {
        double d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0) return 0.0;
        if (d0 * d1 < 0 && std::abs(d) > 3 * std::abs(d0)) return 3 * d0;
        return d;
    };
    m[first] = edge(h[0], h[1], del[0], del[1]);
    m[last - 1] = edge(h[count - 2], h[count - 3], del[count - 2], del[count - 3]);
}

std::uint64_t double_bits(double v) { return std::bit_cast<std::uint64_t>(v); }

} // namespace

double surface_area(int n) {
    if (n < 1) throw DomainError("n", "must be >= 1");
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

double angular_kernel(int n, double alpha, double t) {
    check_kernel_params(n, alpha);
    if (!(t >= 0)) throw DomainError("t", "must be >= 0");
    const double sn2 = surface_area(n - 1);  // |S^{n-2}|
    if (t == 0.0) return surface_area(n);

    const double expo = 0.5 * (alpha - n);
    // (1-t)^2 + 4t sin^2(h/2) is the cancellation-free form of
    // 1 + t^2 - 2t cos h; the naive form collapses to 0 near h = 0, t = 1.
    const auto integrand = [=](double theta) {
        const double sh = std::sin(0.5 * theta);
        const double base = (1.0 - t) * (1.0 - t) + 4.0 * t * sh * sh;
        return std::pow(base, expo) * std::pow(std::sin(theta), n - 2);
    };

    std::vector<double> breaks{M_PI / 2};
    const double delta = std::abs(1.0 - t);
    if (delta < 0.05) {
        // Grade toward the (near-)singular corner theta = 0. At t = 1 the
        // integrand behaves like theta^{alpha-2}; the neglected inner sliver
        // carries eps^{alpha-1}, so pick eps accordingly (capped by double range).
        double eps;
        if (delta > 0) {
            eps = std::max(delta / 4.0, 1e-280);
        } else {
            eps = std::pow(10.0, -std::min(260.0, 13.0 / (alpha - 1.0)));
        }
        for (double d = M_PI / 4; d > eps; d /= 2) breaks.push_back(d);
        breaks.push_back(eps);
    }

    AdaptiveOptions opts;
    opts.rel_tol = 1e-10;
    opts.max_evals = 100000;
    return sn2 * adaptive_integrate(integrand, 0.0, M_PI, opts, breaks);
}

RadialKernelProfile::RadialKernelProfile(int n, double alpha) {
    check_kernel_params(n, alpha);
    n_ = n;
    alpha_ = alpha;

    std::vector<double> ts;
    ts.reserve(kTableCount + 2 * kGradedPerSide + 1);
    for (int i = 0; i < kTableCount; ++i) {
        const double x = std::log10(kTableMin)
                       + (std::log10(kTableMax) - std::log10(kTableMin)) * i
                             / (kTableCount - 1);
        ts.push_back(std::pow(10.0, x));
    }
    const double gspan = std::log(kGradedOuter / kGradedInner);
    for (int i = 0; i < kGradedPerSide; ++i) {
        const double d = kGradedInner * std::exp(gspan * i / (kGradedPerSide - 1));
        ts.push_back(1.0 - d);
        ts.push_back(1.0 + d);
    }
    ts.push_back(1.0);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    t_ = std::move(ts);
    k_.assign(t_.size(), 0.0);

    const unsigned workers =
        std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
    auto sample_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            k_[i] = angular_kernel(n_, alpha_, t_[i]);
    };
    if (workers == 1) {
        sample_range(0, t_.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (t_.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(t_.size(), lo + chunk);
            if (lo < hi) pool.emplace_back(sample_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    finish_setup();
}

void RadialKernelProfile::finish_setup() {
    sphere_ = surface_area(n_);
    c2_ = (alpha_ - n_) * (alpha_ - 2.0) / (2.0 * n_);

    lt_.resize(t_.size());
    lk_.resize(t_.size());
    m_.assign(t_.size(), 0.0);
    for (std::size_t i = 0; i < t_.size(); ++i) {
        lt_[i] = std::log(t_[i]);
        lk_[i] = std::log(k_[i]);
    }
    split_ = std::lower_bound(t_.begin(), t_.end(), 1.0) - t_.begin();
    // Interpolate each side of the kink separately; the sample at t = 1 gets
    // one-sided slopes, the left one kept apart since m_[split_] holds the
    // right-sided value.
    pchip_slopes(lt_, lk_, 0, split_ + 1, m_);
    split_slope_left_ = m_[split_];
    pchip_slopes(lt_, lk_, split_, t_.size(), m_);
}

double RadialKernelProfile::kappa(double t) const {
    if (!(t >= 0)) throw DomainError("t", "must be >= 0");
    if (t < t_.front())
        return sphere_ * (1.0 + c2_ * t * t);
    if (t > t_.back())
        return sphere_ * std::pow(t, alpha_ - n_) * (1.0 + c2_ / (t * t));

    const double x = std::log(t);
    std::size_t lo, hi;
    if (t <= 1.0) {
        lo = 0;
        hi = split_;
    } else {
        lo = split_;
        hi = t_.size() - 1;
    }
    // Binary search within the side.
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (lt_[mid] <= x) lo = mid; else hi = mid;
    }
    const double h = lt_[lo + 1] - lt_[lo];
    const double u = (x - lt_[lo]) / h;
    const double y0 = lk_[lo], y1 = lk_[lo + 1];
    const double slope1 = (lo + 1 == split_) ? split_slope_left_ : m_[lo + 1];
    const double m0 = m_[lo] * h, m1 = slope1 * h;
    const double u2 = u * u, u3 = u2 * u;
    const double val = (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * m0
                     + (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * m1;
    return std::exp(val);
}

double RadialKernelProfile::value(double r, double s) const {
    if (!(r > 0)) {
        if (r == 0.0 && s > 0)  // K(0, s) = |S^{n-1}| s^{alpha-n}
            return sphere_ * std::pow(s, alpha_ - n_);
        throw DomainError("r", "must be positive");
    }
    if (!(s >= 0)) throw DomainError("s", "must be >= 0");
    // Evaluate at t <= 1 through the reflection law; this keeps the value
    // exactly symmetric in (r, s) including interpolation error.
    const double hi = std::max(r, s), lo = std::min(r, s);
    return std::pow(hi, alpha_ - n_) * kappa(lo / hi);
}

double RadialKernelProfile::riesz_moment(double beta) const {
    if (beta >= n_)
        throw DivergentIntegral(DivergentIntegral::Endpoint::Origin,
                                "beta >= n makes the origin non-integrable");
    if (beta <= alpha_)
        throw DivergentIntegral(DivergentIntegral::Endpoint::Infinity,
                                "beta <= alpha makes the tail non-integrable");

    const double eps = 1e-3, big = 1e3;
    // Head and tail closures use the two-term power asymptotes of kappa;
    // the truncation error is O(eps^4), O(big^-4) relative.
    const double head = sphere_ * (std::pow(eps, n_ - beta) / (n_ - beta)
                        + c2_ * std::pow(eps, n_ - beta + 2) / (n_ - beta + 2));
    const double tail = sphere_ * (std::pow(big, alpha_ - beta) / (beta - alpha_)
                        + c2_ * std::pow(big, alpha_ - beta - 2) / (beta - alpha_ + 2));

    const int n = n_;
    const double alpha = alpha_;
    const auto integrand = [n, alpha, beta](double s) {
        return angular_kernel(n, alpha, s) * std::pow(s, n - 1 - beta);
    };
    std::vector<double> breaks = log_panels(eps, big, 1.0);
    for (double d : {0.3, 0.1, 0.03, 0.01, 1e-3, 1e-4, 1e-5, 1e-6}) {
        breaks.push_back(1.0 - d);
        breaks.push_back(1.0 + d);
    }
    AdaptiveOptions opts;
    opts.rel_tol = 3e-8;
    opts.max_evals = 20000;  // outer evaluations; each is an adaptive kappa
    const double mid = adaptive_integrate(integrand, eps, big, opts, breaks);
    return head + mid + tail;
}

std::string RadialKernelProfile::cache_file_name(int n, double alpha) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "kappa_n%d_a%016llx_v1.bin", n,
                  static_cast<unsigned long long>(double_bits(alpha)));
    return buf;
}

void RadialKernelProfile::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write kernel cache: " + path);
    const char magic[8] = {'H', 'S', 'K', 'P', 'R', 'O', 'F', '1'};
    out.write(magic, 8);
    const std::uint64_t nn = n_, count = t_.size();
    out.write(reinterpret_cast<const char*>(&nn), 8);
    out.write(reinterpret_cast<const char*>(&alpha_), 8);
    out.write(reinterpret_cast<const char*>(&count), 8);
    out.write(reinterpret_cast<const char*>(t_.data()), 8 * count);
    out.write(reinterpret_cast<const char*>(k_.data()), 8 * count);
}

RadialKernelProfile RadialKernelProfile::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read kernel cache: " + path);
    char magic[8];
    in.read(magic, 8);
    if (std::string(magic, 8) != "HSKPROF1")
        throw std::runtime_error("bad kernel cache header: " + path);
    std::uint64_t nn = 0, count = 0;
    double alpha = 0;
    in.read(reinterpret_cast<char*>(&nn), 8);
    in.read(reinterpret_cast<char*>(&alpha), 8);
    in.read(reinterpret_cast<char*>(&count), 8);
    if (!in || count == 0 || count > (1u << 22))
        throw std::runtime_error("bad kernel cache body: " + path);

    RadialKernelProfile p;
    p.n_ = static_cast<int>(nn);
    p.alpha_ = alpha;
    p.t_.resize(count);
    p.k_.resize(count);
    in.read(reinterpret_cast<char*>(p.t_.data()), 8 * count);
    in.read(reinterpret_cast<char*>(p.k_.data()), 8 * count);
    if (!in) throw std::runtime_error("truncated kernel cache: " + path);
    check_kernel_params(p.n_, p.alpha_);
    p.finish_setup();
    return p;
}

RadialKernelProfile RadialKernelProfile::load_or_build(int n, double alpha,
                                                       const std::string& cache_dir) {
    namespace fs = std::filesystem;
    if (cache_dir.empty()) return RadialKernelProfile(n, alpha);
    const fs::path file = fs::path(cache_dir) / cache_file_name(n, alpha);
    if (fs::exists(file)) {
        try {
            return load(file.string());
        } catch (const std::exception&) {
            // fall through and rebuild
        }
    }
    RadialKernelProfile p(n, alpha);
    try {
        fs::create_directories(cache_dir);
        p.save(file.string());
    } catch (const std::exception&) {
        // cache is an optimization; building succeeded, so carry on
    }
    return p;
}

} // namespace hslab
