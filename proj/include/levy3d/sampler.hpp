#pragma once

// Truncated power-law step lengths:
//   p(l) = a            for l <= 1
//        = a * l^-mu    for 1 < l < l_max
//        = 0            otherwise,
// with a chosen so the density has unit mass.

#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

#include "error.hpp"
#include "random.hpp"
#include "stats.hpp"
#include "vec3.hpp"

namespace levy3d {

namespace detail {

inline constexpr double kLogBranchTolerance = 1e-9;

/// (1 - x^{-k}) / k, continuous at k = 0 where it equals log(x).
inline double power_integral(double x, double k) {
    if (std::abs(k) < kLogBranchTolerance) {
        return std::log(x);
    }
    return -std::expm1(-k * std::log(x)) / k;
}

inline void check_step_params(double mu, double ell_max) {
    require(std::isfinite(mu) && mu > 1.0 && mu <= 3.0, "mu must lie in (1, 3]");
    require(std::isfinite(ell_max) && ell_max > 1.0, "ell_max must exceed 1");
}

}  // namespace detail

/// Closed-form normalization constant a(mu, l_max).
inline double normalization(double mu, double ell_max) {
    detail::check_step_params(mu, ell_max);
    return 1.0 / (1.0 + detail::power_integral(ell_max, mu - 1.0));
}

struct Moments {
    double tau = 0.0;     // mean step length
    double sigma2 = 0.0;  // variance
    double second = 0.0;  // second moment M
};

class StepDist {
public:
    StepDist(double mu, double ell_max) : mu_(mu), ell_max_(ell_max), a_(normalization(mu, ell_max)) {}

    /// Builds a distribution with an explicit normalization constant. Only
    /// meant for negative controls; the result does not integrate to one
    /// unless `a` is the true constant.
    static StepDist with_normalization(double mu, double ell_max, double a) {
        StepDist d(mu, ell_max);
        d.a_ = a;
        return d;
    }

    double mu() const { return mu_; }
    double ell_max() const { return ell_max_; }
    double a() const { return a_; }

    double pdf(double ell) const {
        if (ell < 0.0 || ell >= ell_max_) return 0.0;
        if (ell <= 1.0) return a_;
        return a_ * std::pow(ell, -mu_);
    }

    double cdf(double ell) const {
        if (ell <= 0.0) return 0.0;
        if (ell >= ell_max_) return 1.0;
        if (ell <= 1.0) return a_ * ell;
        return a_ * (1.0 + detail::power_integral(ell, mu_ - 1.0));
    }

    /// Piecewise closed-form inverse of cdf on (0, 1).
    double quantile(double u) const {
        if (u <= a_) {
            return u / a_;
        }
        const double k = mu_ - 1.0;
        // Solve (1 - l^{-k}) / k = u/a - 1 for l.
        const double rhs = u / a_ - 1.0;
        const double ell = std::exp(-std::log1p(-k * rhs) / k);
        return std::min(ell, std::nextafter(ell_max_, 0.0));
    }

    template <class Engine>
    double sample(Engine& rng) const {
        return quantile(uniform_open01(rng));
    }

    Moments moments() const {
        // E[l]   = a (1/2 + int_1^lmax l^{1-mu})
        // E[l^2] = a (1/3 + int_1^lmax l^{2-mu})
        Moments m;
        m.tau = a_ * (0.5 + detail::power_integral(ell_max_, mu_ - 2.0));
        m.second = a_ * (1.0 / 3.0 + detail::power_integral(ell_max_, mu_ - 3.0));
        m.sigma2 = m.second - m.tau * m.tau;
        return m;
    }

private:
    double mu_;
    double ell_max_;
    double a_;
};

inline double cdf(const StepDist& dist, double ell) { return dist.cdf(ell); }

template <class Engine>
double sample_length(const StepDist& dist, Engine& rng) {
    return dist.sample(rng);
}

inline Moments moments(const StepDist& dist) { return dist.moments(); }

/// Uniform direction on the unit sphere from a normalized Gaussian triple.
template <class Engine>
Vec3 sample_direction(Engine& rng) {
    std::normal_distribution<double> gauss;
    for (;;) {
        const Vec3 g{gauss(rng), gauss(rng), gauss(rng)};
        const double r2 = dot(g, g);
        // Probability zero, but avoids dividing by a denormal.
        if (r2 > 1e-300) {
            return g * (1.0 / std::sqrt(r2));
        }
    }
}

struct TailFit {
    double mu_hat = 0.0;
    double slope_stderr = 0.0;
    std::size_t bins = 0;
    std::size_t samples_in_window = 0;
};

/// Estimates the power-law exponent of |V_1|, the projection of a full step
/// on one coordinate axis, by regressing the log of its log-binned density on
/// the log of the bin center over [window_lo, window_hi]. The window defaults
/// to [2, l_max / 4].
template <class Engine>
TailFit projected_tail_exponent(const StepDist& dist, std::size_t samples, Engine& rng, double window_lo = 2.0,
                                double window_hi = 0.0, std::size_t bins = 16) {
    detail::require(samples >= 1000000, "projected_tail_exponent: need at least 1e6 samples");
    if (window_hi <= 0.0) {
        window_hi = dist.ell_max() / 4.0;
    }
    if (!(window_hi > window_lo && window_lo > 0.0)) {
        throw DiagnosticError("projected_tail_exponent: empty fit window");
    }
    const double log_lo = std::log(window_lo);
    const double log_width = (std::log(window_hi) - log_lo) / static_cast<double>(bins);
    std::vector<std::size_t> counts(bins, 0);
    std::size_t in_window = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double ell = dist.sample(rng);
        const double v1 = std::abs(ell * sample_direction(rng).z);
        if (v1 < window_lo || v1 >= window_hi) continue;
        const auto b = static_cast<std::size_t>((std::log(v1) - log_lo) / log_width);
        ++counts[std::min(b, bins - 1)];
        ++in_window;
    }
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t b = 0; b < bins; ++b) {
        if (counts[b] < 10) continue;
        const double lo = std::exp(log_lo + log_width * static_cast<double>(b));
        const double hi = std::exp(log_lo + log_width * static_cast<double>(b + 1));
        x.push_back(std::sqrt(lo * hi));
        y.push_back(static_cast<double>(counts[b]) / (hi - lo));
    }
    if (x.size() < 3) {
        throw DiagnosticError("projected_tail_exponent: too few populated bins in the fit window");
    }
    const LinearFit fit = fit_loglog(x, y);
    return {-fit.slope, fit.slope_stderr, x.size(), in_window};
}

}  // namespace levy3d
