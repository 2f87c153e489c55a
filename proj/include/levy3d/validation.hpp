#pragma once

// Built-in self-checks. Each check compares an implementation against
// something computed another way (quadrature, enumeration, exact linear
// algebra) and reports pass/fail with a short detail string.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "discrete.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "random.hpp"
#include "sampler.hpp"
#include "stats.hpp"
#include "walker.hpp"

namespace levy3d {

enum class ValidationLevel { quick, full };

struct ValidationOptions {
    ValidationLevel level = ValidationLevel::quick;
    /// Multiplies the step-length normalization constant. Anything other than
    /// 1 corrupts the sampler; the suite must then report failures.
    double normalization_scale = 1.0;
    std::uint64_t seed = 20240601;
};

struct CheckResult {
    std::string module;
    std::string invariant;
    bool passed = false;
    std::string detail;
};

inline bool all_passed(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks) {
        if (!c.passed) return false;
    }
    return !checks.empty();
}

namespace detail {

inline std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

inline StepDist validation_dist(double mu, double ell_max, const ValidationOptions& opt) {
    return StepDist::with_normalization(mu, ell_max, normalization(mu, ell_max) * opt.normalization_scale);
}

/// Integral of f over [lo, hi] by adaptive Gauss-Kronrod.
inline double integrate(const std::function<double(double)>& f, double lo, double hi) {
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, 1e-13);
}

inline void sampler_checks(std::vector<CheckResult>& out, const ValidationOptions& opt) {
    const double lmax = 64.0;
    for (double mu : {1.5, 2.0, 2.5, 3.0}) {
        const StepDist dist = validation_dist(mu, lmax, opt);
        const auto pdf = [&](double l) { return dist.pdf(l); };
        const double mass = integrate(pdf, 0.0, 1.0) + integrate(pdf, 1.0, lmax);
        out.push_back({"sampler", fmt("density integrates to 1 (mu=%.1f)", mu), std::abs(mass - 1.0) < 1e-9,
                       fmt("integral %.12f", mass)});

        const double tau_q = integrate([&](double l) { return l * dist.pdf(l); }, 0.0, 1.0) +
                             integrate([&](double l) { return l * dist.pdf(l); }, 1.0, lmax);
        const double tau = dist.moments().tau;
        out.push_back({"sampler", fmt("mean step length matches quadrature (mu=%.1f)", mu),
                       std::abs(tau - tau_q) < 1e-9 * tau_q, fmt("closed form %.12g, quadrature %.12g", tau, tau_q)});

        double worst = 0.0;
        for (double l : {0.25, 0.5, 1.0, 1.5, 3.0, 10.0, 40.0}) {
            const double c = integrate(pdf, 0.0, std::min(l, 1.0)) + (l > 1.0 ? integrate(pdf, 1.0, l) : 0.0);
            worst = std::max(worst, std::abs(c - dist.cdf(l)));
        }
        out.push_back({"sampler", fmt("cdf matches integrated density (mu=%.1f)", mu), worst < 1e-9,
                       fmt("max deviation %.3g", worst)});
    }

    const std::size_t samples = opt.level == ValidationLevel::full ? 100000 : 20000;
    for (double mu : {1.5, 2.0, 2.5, 3.0}) {
        const StepDist dist = validation_dist(mu, 128.0, opt);
        const StepDist reference(mu, 128.0);
        Rng rng = make_stream(opt.seed, static_cast<std::uint64_t>(mu * 10));
        std::vector<double> xs(samples);
        RunningStats stats;
        for (auto& x : xs) {
            x = dist.sample(rng);
            stats.add(x);
        }
        // Judged against the uncorrupted law so a wrong constant shows up.
        const double ks = ks_distance(xs, [&](double l) { return reference.cdf(l); });
        const double limit = 1.63 / std::sqrt(static_cast<double>(samples));  // 1% level
        out.push_back({"sampler", fmt("KS distance below 1%% critical value (mu=%.1f)", mu), ks < limit,
                       fmt("D = %.5f, limit %.5f", ks, limit)});
        const double tau = reference.moments().tau;
        out.push_back({"sampler", fmt("sample mean within 4 SEM of tau (mu=%.1f)", mu),
                       std::abs(stats.mean() - tau) <= 4.0 * stats.sem(),
                       fmt("mean %.5f, tau %.5f, sem %.5f", stats.mean(), tau, stats.sem())});
    }

    Rng rng = make_stream(opt.seed, 99);
    RunningStats z2;
    RunningStats xy;
    const std::size_t dirs = opt.level == ValidationLevel::full ? 200000 : 20000;
    for (std::size_t i = 0; i < dirs; ++i) {
        const Vec3 u = sample_direction(rng);
        z2.add(u.z * u.z);
        xy.add(u.x * u.y);
    }
    out.push_back({"sampler", "directions isotropic: E[u_z^2] = 1/3, E[u_x u_y] = 0",
                   std::abs(z2.mean() - 1.0 / 3.0) < 4.0 * z2.sem() && std::abs(xy.mean()) < 4.0 * xy.sem(),
                   fmt("E[u_z^2] %.5f, E[u_x u_y] %.5f", z2.mean(), xy.mean())});

    if (opt.level == ValidationLevel::full) {
        for (double mu : {1.5, 2.0, 2.5}) {
            const StepDist dist = validation_dist(mu, 256.0, opt);
            Rng r = make_stream(opt.seed, 1000 + static_cast<std::uint64_t>(mu * 10));
            const TailFit fit = projected_tail_exponent(dist, 4000000, r);
            out.push_back({"sampler", fmt("projected step tail exponent within 0.2 of mu (mu=%.1f)", mu),
                           std::abs(fit.mu_hat - mu) <= 0.2, fmt("mu_hat %.3f +- %.3f", fit.mu_hat, fit.slope_stderr)});
        }
    }
}

inline void geometry_checks(std::vector<CheckResult>& out, const ValidationOptions& opt) {
    const double h = 8.0;
    Rng rng = make_stream(opt.seed, 7);
    double worst_wrap = 0.0;
    double worst_sym = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const Vec3 p{(uniform01(rng) - 0.5) * 100, (uniform01(rng) - 0.5) * 100, (uniform01(rng) - 0.5) * 100};
        const Vec3 q{(uniform01(rng) - 0.5) * 100, (uniform01(rng) - 0.5) * 100, (uniform01(rng) - 0.5) * 100};
        const TorusPoint a(p, h);
        const TorusPoint b(q, h);
        for (std::size_t k = 0; k < 3; ++k) {
            const double period_off = std::remainder(p[k] - a.position()[k], 2 * h);
            worst_wrap = std::max(worst_wrap, std::abs(period_off));
        }
        worst_sym = std::max(worst_sym, norm(torus_displacement(a, b) + torus_displacement(b, a)));
    }
    out.push_back({"geometry", "wrapping preserves position modulo the period", worst_wrap < 1e-9,
                   fmt("max offset %.3g", worst_wrap)});
    out.push_back({"geometry", "torus displacement is antisymmetric", worst_sym < 1e-9,
                   fmt("max |d(a,b) + d(b,a)| %.3g", worst_sym)});

    bool convex_ok = true;
    for (const Target& t : {Target::ball(4), Target::disc(6), Target::line(20), Target::rect(10, 5)}) {
        const auto g = descriptors(t);
        convex_ok = convex_ok && g.approx_convex && g.projected_area <= g.largest_face_area * (1 + 1e-12);
    }
    out.push_back({"geometry", "canonical shapes approximately convex with Delta_P <= Delta_B", convex_ok, ""});
    const double ratio = counterexample_ratio(100.0, 1.0);
    out.push_back({"geometry", "crossed segments not approximately convex at L = 100d",
                   ratio < kApproxConvexThreshold, fmt("ratio %.5f", ratio)});

    if (opt.level == ValidationLevel::full) {
        for (const Target& t : {Target::ball(5), Target::line(30), Target::disc(8)}) {
            const auto g = descriptors(t);
            const AreaEstimate est = mc_projected_area(t, 200000, opt.seed);
            out.push_back({"geometry", "Monte Carlo projected area within 4 SE of closed form (" +
                                           std::string(to_string(t.kind())) + ")",
                           std::abs(est.area - g.projected_area) <= 4.0 * est.std_error,
                           fmt("estimate %.3f +- %.3f, exact %.3f", est.area, est.std_error, g.projected_area)});
        }
    }
}

inline void bounds_checks(std::vector<CheckResult>& out) {
    const Target ball = Target::ball(4);
    const auto g = descriptors(ball);
    const double n = 262144.0;
    const auto r2 = evaluate(ball, 2.0, n);
    const auto r3 = evaluate(ball, 3.0, n);
    out.push_back({"bounds", "universal bound equals n / Delta_B",
                   std::abs(*r2.universal_lb.value - n / 64.0) < 1e-9, fmt("%.6f", *r2.universal_lb.value)});
    out.push_back({"bounds", "ballistic bound absent at mu = 2, diffusive present at mu = 3",
                   !r2.ballistic_lb.present() && r3.diffusive_lb.present(), r2.ballistic_lb.reason});
    const double logn = std::log(n);
    out.push_back({"bounds", "Cauchy bound equals n log^3 n / Delta_P",
                   std::abs(*r2.cauchy_ub.value - n * logn * logn * logn / g.projected_area) <
                       1e-9 * *r2.cauchy_ub.value,
                   ""});
}

inline void discrete_checks(std::vector<CheckResult>& out, const ValidationOptions& opt) {
    bool shells_ok = true;
    for (int l = 1; l <= 8; ++l) {
        const LatticeShellIndex shell(l);
        std::int64_t count = 0;
        for (int x = -l; x <= l; ++x) {
            for (int y = -l; y <= l; ++y) {
                const int rest = l - std::abs(x) - std::abs(y);
                if (rest < 0) continue;
                count += rest == 0 ? 1 : 2;
            }
        }
        shells_ok = shells_ok && shell.size() == count && shell_size(l) == count;
        for (std::int64_t i = 0; i < shell.size(); ++i) {
            const Offset p = shell.at(i);
            shells_ok = shells_ok && std::abs(p[0]) + std::abs(p[1]) + std::abs(p[2]) == l && shell.index_of(p) == i;
        }
    }
    out.push_back({"discrete", "Manhattan shell indexing is a bijection of the right size", shells_ok, ""});

    const MarkovChain cycle = lazy_simple_cycle(8);
    const std::uint32_t zero = 0;
    const auto h = exact_hitting_steps(cycle, std::span<const std::uint32_t>(&zero, 1));
    out.push_back({"discrete", "lazy cycle of 8 nodes: hitting time from distance 4 is 32", std::abs(h[4] - 32.0) < 1e-9,
                   fmt("%.9f", h[4])});

    if (opt.level == ValidationLevel::full) {
        LatticeWalkParams p;
        p.side = 5;
        p.mu = 2.5;
        const MarkovChain chain = lattice_chain(p);
        std::vector<std::uint32_t> targets;
        for (int x = 0; x < 3; ++x) targets.push_back(lattice_node(5, x, 0, 0));
        const auto exact = exact_hitting_steps(chain, targets);
        double mean_exact = 0.0;
        for (double v : exact) mean_exact += v;
        mean_exact /= static_cast<double>(exact.size());
        const HitSummary mc = hit_line(p, 3, 20000, opt.seed);
        out.push_back({"discrete", "Monte Carlo hitting steps within 3 SEM of exact (5^3 lattice, 3-node line)",
                       std::abs(mc.mean_steps - mean_exact) <= 3.0 * mc.sem_steps,
                       fmt("MC %.4f +- %.4f, exact %.4f", mc.mean_steps, mc.sem_steps, mean_exact)});
    }
}

inline void walker_checks(std::vector<CheckResult>& out, const ValidationOptions& opt) {
    WalkParams p;
    p.n = 16.0 * 16.0 * 16.0;
    p.mu = 2.0;
    const Target t = Target::ball(2.0);
    const auto a = run_batch(p, t, 20, opt.seed);
    const auto b = run_batch(p, t, 20, opt.seed);
    out.push_back({"walker", "batches are reproducible from the seed", a.outcomes == b.outcomes, ""});

    if (opt.level == ValidationLevel::full) {
        for (double mu : {1.5, 2.0, 3.0}) {
            WalkParams q;
            q.n = 32.0 * 32.0 * 32.0;
            q.mu = mu;
            const auto batch = run_batch(q, t, 1000, opt.seed + static_cast<std::uint64_t>(mu * 10));
            const double tau = StepDist(mu, q.effective_ell_max()).moments().tau;
            const WaldCheck w = wald_check(batch.outcomes, tau);
            out.push_back({"walker", fmt("Wald identity E[T] = tau E[steps] within 3 SE (mu=%.1f)", mu), w.within(3.0),
                           fmt("difference %.4f, SE %.4f", w.difference, w.std_error)});
        }
    }
}

}  // namespace detail

inline std::vector<CheckResult> run_validation(const ValidationOptions& opt = {}) {
    detail::require(std::isfinite(opt.normalization_scale) && opt.normalization_scale > 0.0,
                    "normalization_scale must be positive");
    std::vector<CheckResult> out;
    detail::sampler_checks(out, opt);
    detail::geometry_checks(out, opt);
    detail::bounds_checks(out);
    detail::discrete_checks(out, opt);
    detail::walker_checks(out, opt);
    return out;
}

}  // namespace levy3d
