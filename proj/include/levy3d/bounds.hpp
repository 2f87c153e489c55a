#pragma once

// Order-of-growth bounds on the detection time, evaluated with every hidden
// constant set to 1 and natural logarithms. Absolute values are therefore
// only meaningful up to constants; ratios between configurations in the
// same regime are the useful quantity.

#include <cmath>
#include <optional>
#include <string>

#include "error.hpp"
#include "geometry.hpp"

namespace levy3d {

/// A bound that may not apply in the current regime.
struct BoundValue {
    std::optional<double> value;
    std::string formula;  // what was evaluated
    std::string reason;   // why it is absent, empty when present

    bool present() const { return value.has_value(); }

    static BoundValue of(double v, std::string formula) { return {v, std::move(formula), {}}; }
    static BoundValue absent(std::string formula, std::string reason) {
        return {std::nullopt, std::move(formula), std::move(reason)};
    }
};

struct BoundsReport {
    double mu = 0.0;
    double n = 0.0;
    GeoDescriptors geometry;

    BoundValue universal_lb;   // n / Delta_B, any strategy
    BoundValue ballistic_lb;   // n^{1+eps/3} / V, mu = 2 - eps < 2
    BoundValue diffusive_lb;   // mu = 2 + eps: n Delta_B^{eps(1-delta)-1}; mu = 3: n / (Delta_B^delta log Delta_B)
    BoundValue ball_disc_lb;   // ball/disc only: n Delta^{eps/2-1}; mu = 3: n / (Delta^{1/2} log Delta)
    BoundValue cauchy_ub;      // n log^3 n / Delta_P
    BoundValue travel_time;    // T_x at x = Delta_B^{1-delta}: x^{mu-1}; mu = 3: x^2 / log x

    std::string disclaimer =
        "asymptotic bounds with all constants set to 1 and natural logs; compare ratios, not absolute values";

    /// The lower bound that governs the walk's regime: ballistic for mu < 2,
    /// universal at mu = 2, diffusive for mu > 2.
    double regime_lb() const {
        if (ballistic_lb.present()) return *ballistic_lb.value;
        if (diffusive_lb.present()) return *diffusive_lb.value;
        return *universal_lb.value;
    }
};

namespace detail {

inline constexpr double kRegimeTolerance = 1e-9;

inline bool is_cauchy(double mu) { return std::abs(mu - 2.0) < kRegimeTolerance; }
inline bool is_mu3(double mu) { return std::abs(mu - 3.0) < kRegimeTolerance; }

}  // namespace detail

/// Bounds for a precomputed descriptor set.
inline BoundsReport evaluate(const GeoDescriptors& g, ShapeKind kind, double mu, double n) {
    detail::require(std::isfinite(mu) && mu > 1.0 && mu <= 3.0, "mu must lie in (1, 3]");
    detail::require(std::isfinite(n) && n >= 8.0, "n must be >= 8");

    BoundsReport r;
    r.mu = mu;
    r.n = n;
    r.geometry = g;
    const double db = g.largest_face_area;
    const double delta = g.elongation;

    r.universal_lb = BoundValue::of(n / db, "n / Delta_B");
    const double logn = std::log(n);
    r.cauchy_ub = BoundValue::of(n * logn * logn * logn / g.projected_area, "n log^3 n / Delta_P");

    if (mu < 2.0 && !detail::is_cauchy(mu)) {
        const double eps = 2.0 - mu;
        r.ballistic_lb = BoundValue::of(std::pow(n, 1.0 + eps / 3.0) / g.volume, "n^{1+eps/3} / V, eps = 2 - mu");
    } else {
        r.ballistic_lb = BoundValue::absent("n^{1+eps/3} / V, eps = 2 - mu",
                                            detail::is_cauchy(mu) ? "regime mu=2" : "regime mu>2");
    }

    const bool diffusive = mu > 2.0 && !detail::is_cauchy(mu);
    const bool round = kind == ShapeKind::ball || kind == ShapeKind::disc;
    const std::string absent_reason = detail::is_cauchy(mu) ? "regime mu=2" : "regime mu<2";
    if (diffusive && detail::is_mu3(mu)) {
        r.diffusive_lb = BoundValue::of(n / (std::pow(db, delta) * std::log(db)),
                                        "n / (Delta_B^delta log Delta_B)");
        if (round) {
            const double area = g.surface_area;
            r.ball_disc_lb = BoundValue::of(n / (std::sqrt(area) * std::log(area)), "n / (Delta^{1/2} log Delta)");
        } else {
            r.ball_disc_lb = BoundValue::absent("n / (Delta^{1/2} log Delta)", "target is not a ball or disc");
        }
        const double x2 = std::pow(db, 1.0 - delta);
        if (x2 > 1.0) {
            r.travel_time = BoundValue::of(x2 * x2 / std::log(x2), "x^2 / log x, x = Delta_B^{1-delta}");
        } else {
            r.travel_time = BoundValue::absent("x^2 / log x, x = Delta_B^{1-delta}", "x <= 1");
        }
    } else if (diffusive) {
        const double eps = mu - 2.0;
        r.diffusive_lb = BoundValue::of(n * std::pow(db, eps * (1.0 - delta) - 1.0),
                                        "n Delta_B^{eps(1-delta)-1}, eps = mu - 2");
        if (round) {
            r.ball_disc_lb = BoundValue::of(n * std::pow(g.surface_area, eps / 2.0 - 1.0),
                                            "n Delta^{eps/2-1}, eps = mu - 2");
        } else {
            r.ball_disc_lb = BoundValue::absent("n Delta^{eps/2-1}, eps = mu - 2", "target is not a ball or disc");
        }
        const double x2 = std::pow(db, 1.0 - delta);
        r.travel_time = BoundValue::of(std::pow(x2, mu - 1.0), "x^{mu-1}, x = Delta_B^{1-delta}");
    } else {
        r.diffusive_lb = BoundValue::absent("n Delta_B^{eps(1-delta)-1}", absent_reason);
        r.ball_disc_lb = BoundValue::absent("n Delta^{eps/2-1}", absent_reason);
        r.travel_time = BoundValue::absent("x^{mu-1}", absent_reason);
    }
    return r;
}

inline BoundsReport evaluate(const Target& target, double mu, double n) {
    return evaluate(descriptors(target), target.kind(), mu, n);
}

/// Simulated mean time over the universal lower bound. Since the optimal
/// detection time is at least that bound, this over-estimates the overhead.
inline double overhead(double sim_mean_time, const GeoDescriptors& g, double n) {
    detail::require(sim_mean_time > 0.0, "overhead: simulated mean time must be positive");
    return sim_mean_time / (n / g.largest_face_area);
}

inline double overhead(double sim_mean_time, const Target& target, double n) {
    return overhead(sim_mean_time, descriptors(target), n);
}

/// Lower bound n / V on the expected number of steps, any mu.
inline double steps_lower_bound(const Target& target, double n) {
    detail::require(std::isfinite(n) && n > 0.0, "n must be positive");
    return n / descriptors(target).volume;
}

}  // namespace levy3d
