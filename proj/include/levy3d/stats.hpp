#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "error.hpp"

namespace levy3d {

/// Welford accumulator. Results depend on insertion order, so callers that
/// need reproducibility feed values in a fixed order.
class RunningStats {
public:
    void add(double x) {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }

    std::size_t count() const { return count_; }
    double mean() const { return count_ ? mean_ : std::numeric_limits<double>::quiet_NaN(); }

    /// Unbiased sample variance.
    double variance() const {
        return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
    }
    double stddev() const { return std::sqrt(variance()); }

    /// Standard error of the mean, sample-std / sqrt(count).
    double sem() const {
        return count_ ? stddev() / std::sqrt(static_cast<double>(count_))
                      : std::numeric_limits<double>::quiet_NaN();
    }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope * x.
inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    detail::require(x.size() == y.size(), "fit_line: size mismatch");
    const std::size_t n = x.size();
    if (n < 2) {
        throw DiagnosticError("fit_line: need at least two points");
    }
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) {
        throw DiagnosticError("fit_line: degenerate abscissae");
    }
    LinearFit fit;
    fit.points = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - fit.intercept - fit.slope * x[i];
            rss += r * r;
        }
        fit.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    }
    return fit;
}

/// Slope of log(y) against log(x).
inline LinearFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx(x.size());
    std::vector<double> ly(y.size());
    std::transform(x.begin(), x.end(), lx.begin(), [](double v) { return std::log(v); });
    std::transform(y.begin(), y.end(), ly.begin(), [](double v) { return std::log(v); });
    return fit_line(lx, ly);
}

/// Two-sided Kolmogorov-Smirnov distance between a sample and a continuous CDF.
/// Sorts `sample` in place.
template <class Cdf>
double ks_distance(std::vector<double>& sample, Cdf&& cdf) {
    if (sample.empty()) {
        throw DiagnosticError("ks_distance: empty sample");
    }
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::max(static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n));
    }
    return d;
}

/// 95% normal-approximation confidence interval.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

inline Interval ci95(double mean, double sem) { return {mean - 1.96 * sem, mean + 1.96 * sem}; }

inline bool overlaps(const Interval& a, const Interval& b) { return a.lo <= b.hi && b.lo <= a.hi; }

}  // namespace levy3d
