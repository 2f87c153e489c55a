// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and budgets are fixed here, not tuned per run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <levy3d/levy3d.hpp>

using namespace levy3d;

namespace {

constexpr double kSide64 = 64.0 * 64.0 * 64.0;

struct Verdict {
    bool passed = false;
    std::string detail;
};

// Every simulated batch, kept for the Wald-identity criterion.
struct RecordedBatch {
    std::string label;
    double tau = 0.0;
    std::vector<TrialOutcome> outcomes;
};
std::vector<RecordedBatch> g_batches;

BatchSummary simulate(const std::string& label, double n, double mu, const Target& target, std::size_t trials) {
    WalkParams p;
    p.n = n;
    p.mu = mu;
    p.d = target.detection_radius();
    BatchResult r = run_batch(p, target, trials, hash_combine(20240917, label));
    const double tau = StepDist(mu, p.effective_ell_max()).moments().tau;
    g_batches.push_back({label, tau, std::move(r.outcomes)});
    return r.summary;
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 95% interval of a / b by the delta method.
Interval ratio_ci(double a, double sa, double b, double sb) {
    const double r = a / b;
    const double se = r * std::sqrt((sa / a) * (sa / a) + (sb / b) * (sb / b));
    return ci95(r, se);
}

Verdict sampler_correctness() {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v{true, ""};
    for (double mu : {1.5, 2.0, 2.5, 3.0}) {
        const StepDist dist(mu, 128.0);
        Rng rng = make_stream(101, static_cast<std::uint64_t>(mu * 10));
        std::vector<double> xs(100000);
        RunningStats s;
        for (auto& x : xs) {
            x = dist.sample(rng);
            s.add(x);
        }
        const double ks = ks_distance(xs, [&](double l) { return dist.cdf(l); });
        const double z = (s.mean() - dist.moments().tau) / s.sem();
        const bool ok = ks < 0.006 && std::abs(z) <= 3.0;
        v.passed = v.passed && ok;
        v.detail += fmt("mu=%.1f KS=%.4f z=%+.2f; ", mu, ks, z);
    }
    const double secs = seconds_since(t0);
    v.passed = v.passed && secs < 10.0;
    v.detail += fmt("%.1fs (budget 10s)", secs);
    return v;
}

Verdict projection_exponent() {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v{true, ""};
    for (double mu : {1.5, 2.0, 2.5}) {
        const StepDist dist(mu, 256.0);
        Rng rng = make_stream(202, static_cast<std::uint64_t>(mu * 10));
        const TailFit fit = projected_tail_exponent(dist, 10000000, rng);
        const bool ok = std::abs(fit.mu_hat - mu) <= 0.2;
        v.passed = v.passed && ok;
        v.detail += fmt("mu=%.1f fit=%.3f+-%.3f; ", mu, fit.mu_hat, fit.slope_stderr);
    }
    const double secs = seconds_since(t0);
    v.passed = v.passed && secs < 60.0;
    v.detail += fmt("%.1fs (budget 60s)", secs);
    return v;
}

Verdict wald_identity() {
    // Dedicated batches across regimes, then every other batch of the suite
    // that has at least 1e3 completed trials.
    for (double mu : {1.5, 2.0, 2.5, 3.0}) {
        simulate(fmt("wald mu=%.1f", mu), 32.0 * 32.0 * 32.0, mu, Target::ball(2.0), 1000);
    }
    Verdict v{true, ""};
    std::size_t checked = 0;
    double worst = 0.0;
    std::string worst_label;
    for (const auto& b : g_batches) {
        std::size_t completed = 0;
        for (const auto& o : b.outcomes) completed += o.truncated ? 0 : 1;
        if (completed < 1000) continue;
        const WaldCheck w = wald_check(b.outcomes, b.tau);
        ++checked;
        const double z = std::abs(w.difference) / w.std_error;
        if (z > worst) {
            worst = z;
            worst_label = b.label;
        }
        if (!w.within(3.0)) {
            v.passed = false;
            v.detail += b.label + fmt(" |z|=%.2f; ", z);
        }
    }
    v.passed = v.passed && checked >= 4;
    v.detail += fmt("%.0f batches checked, max |diff|/SE = %.2f", static_cast<double>(checked), worst) + " (" +
                worst_label + ")";
    return v;
}

Verdict cauchy_scale_invariance() {
    const auto t0 = std::chrono::steady_clock::now();
    const SweepSpec spec = scenario_library(kSide64).at("cauchy-shapes");
    std::map<ShapeKind, std::vector<double>> area;
    std::map<ShapeKind, std::vector<double>> time;
    double lo = INFINITY;
    double hi = 0.0;
    for (const auto& cell : expand(spec)) {
        const Target t = make_target(cell.shape);
        const double dp = descriptors(t).projected_area;
        const auto s = simulate("cauchy " + std::string(to_string(cell.shape.kind)) + fmt(" %.4f", cell.shape.p1),
                                kSide64, 2.0, t, 1000);
        area[cell.shape.kind].push_back(dp);
        time[cell.shape.kind].push_back(s.mean_time);
        const double q = s.mean_time * dp / kSide64;
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    Verdict v{hi / lo < 4.0, fmt("mean_time*DP/n in [%.3f, %.3f], spread x%.2f; ", lo, hi, hi / lo)};
    for (const auto& [kind, a] : area) {
        const LinearFit fit = fit_loglog(a, time[kind]);
        v.passed = v.passed && std::abs(fit.slope + 1.0) <= 0.2 && a.size() == 3;
        v.detail += std::string(to_string(kind)) + fmt(" slope %.3f; ", fit.slope);
    }
    const double secs = seconds_since(t0);
    v.passed = v.passed && secs < 1800.0;
    v.detail += fmt("%.1fs (budget 1800s)", secs);
    return v;
}

Verdict ballistic_penalty() {
    const Target ball = Target::ball(2.0);
    std::vector<BatchSummary> by_mu;
    Verdict v{true, ""};
    for (double mu : {1.2, 1.5, 1.8, 2.0}) {
        by_mu.push_back(simulate(fmt("ballistic mu=%.1f", mu), kSide64, mu, ball, 1000));
        v.detail += fmt("mu=%.1f %.4g+-%.2g; ", mu, by_mu.back().mean_time, by_mu.back().sem_time);
    }
    for (std::size_t i = 0; i + 1 < by_mu.size(); ++i) {
        v.passed = v.passed && by_mu[i].mean_time > by_mu[i + 1].mean_time;
    }
    v.passed = v.passed && !overlaps(ci95(by_mu.front().mean_time, by_mu.front().sem_time),
                                     ci95(by_mu.back().mean_time, by_mu.back().sem_time));
    std::vector<double> ns;
    std::vector<double> times;
    for (double side : {32.0, 64.0, 128.0}) {
        const double n = side * side * side;
        const auto s = simulate(fmt("ballistic n=%.0f", n), n, 1.5, ball, 1000);
        ns.push_back(n);
        times.push_back(s.mean_time);
    }
    const LinearFit fit = fit_loglog(ns, times);
    const double expected = 1.0 + 0.5 / 3.0;
    v.passed = v.passed && std::abs(fit.slope - expected) <= 0.15;
    v.detail += fmt("n-exponent %.3f (target %.3f +- 0.15)", fit.slope, expected);
    return v;
}

Verdict diffusive_penalty() {
    Verdict v{true, ""};
    for (ShapeKind kind : {ShapeKind::ball, ShapeKind::disc}) {
        std::vector<Interval> ratios;
        std::vector<double> points;
        for (double r : {4.0, 8.0, 16.0}) {
            const Target t = make_target({kind, r, 0.0});
            const std::string label = std::string(to_string(kind)) + fmt(" R=%.0f", r);
            const auto s3 = simulate("diffusive mu=3 " + label, kSide64, 3.0, t, 1000);
            const auto s2 = simulate("diffusive mu=2 " + label, kSide64, 2.0, t, 1000);
            ratios.push_back(ratio_ci(s3.mean_time, s3.sem_time, s2.mean_time, s2.sem_time));
            points.push_back(s3.mean_time / s2.mean_time);
        }
        const bool ok = points[0] < points[1] && points[1] < points[2] && !overlaps(ratios.front(), ratios.back());
        v.passed = v.passed && ok;
        v.detail += std::string(to_string(kind)) + fmt(" t3/t2 = %.3f, %.3f, %.3f; ", points[0], points[1], points[2]);
    }
    return v;
}

Verdict line_exception() {
    Verdict v{true, ""};
    std::map<int, std::vector<double>> q_by_length;
    for (int side : {16, 32, 64}) {
        LatticeWalkParams p;
        p.side = side;
        p.mu = 2.5;
        const double n = p.nodes();
        std::vector<double> lengths;
        std::vector<double> means;
        for (int length : {2, 4, 8}) {
            const std::size_t trials = 800;
            const auto s = hit_line(p, length, trials, hash_combine(303, fmt("side %.0f L %.0f", side, length)));
            lengths.push_back(length);
            means.push_back(s.mean_time);
            q_by_length[length].push_back(s.mean_time * length / (n * std::log(n)));
        }
        const LinearFit fit = fit_loglog(lengths, means);
        v.passed = v.passed && std::abs(fit.slope + 1.0) <= 0.15;
        v.detail += fmt("side %.0f slope %.3f; ", side, fit.slope);
    }
    double worst = 0.0;
    for (const auto& [length, q] : q_by_length) {
        const auto [mn, mx] = std::minmax_element(q.begin(), q.end());
        worst = std::max(worst, *mx / *mn);
    }
    v.passed = v.passed && worst < 3.0;
    v.detail += fmt("max spread of mean*L/(n ln n) across sides x%.2f", worst);
    return v;
}

Verdict exact_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    LatticeWalkParams p;
    p.side = 5;
    p.mu = 2.5;
    std::vector<std::uint32_t> targets;
    for (int x = 0; x < 3; ++x) targets.push_back(lattice_node(5, x, 0, 0));
    const auto h = exact_hitting_steps(lattice_chain(p), targets);
    double exact = 0.0;
    for (double x : h) exact += x;
    exact /= static_cast<double>(h.size());
    const HitSummary mc = hit_line(p, 3, 20000, 404);
    const double z = (mc.mean_steps - exact) / mc.sem_steps;

    const std::uint32_t zero = 0;
    const auto cyc = exact_hitting_steps(lazy_simple_cycle(8), std::span<const std::uint32_t>(&zero, 1));
    const double secs = seconds_since(t0);
    Verdict v{std::abs(z) <= 3.0 && std::abs(cyc[4] - 32.0) < 1e-9 && secs < 60.0, ""};
    v.detail = fmt("MC %.4f+-%.4f vs exact %.4f (z=%+.2f); ", mc.mean_steps, mc.sem_steps, exact, z) +
               fmt("cycle h(4) = %.12g; %.1fs (budget 60s)", cyc[4], secs);
    return v;
}

Verdict geometry_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v{true, ""};
    for (const Target& t : {Target::ball(6.0), Target::disc(10.0), Target::line(40.0)}) {
        const double exact = descriptors(t).projected_area;
        const AreaEstimate est = mc_projected_area(t, 1000000, 505);
        const double z = (est.area - exact) / est.std_error;
        v.passed = v.passed && std::abs(z) <= 4.0;
        v.detail += std::string(to_string(t.kind())) + fmt(" z=%+.2f; ", z);
    }
    bool canonical = true;
    for (const Target& t : {Target::ball(1.0), Target::ball(16.0), Target::disc(1.0), Target::disc(30.0),
                            Target::line(1.0), Target::line(500.0), Target::rect(2.0, 2.0),
                            Target::rect(300.0, 1.5)}) {
        canonical = canonical && descriptors(t).approx_convex;
    }
    bool cross = true;
    for (double length : {100.0, 200.0, 1000.0}) {
        cross = cross && counterexample_ratio(length, 1.0) < kApproxConvexThreshold;
    }
    const double secs = seconds_since(t0);
    v.passed = v.passed && canonical && cross && secs < 30.0;
    v.detail += fmt("cross ratio at L=100d %.4f < 1/36; canonical convex ", counterexample_ratio(100.0, 1.0)) +
                (canonical ? "yes" : "no") + fmt("; %.1fs (budget 30s)", secs);
    return v;
}

Verdict elongation_sweep() {
    Verdict v{true, ""};
    std::vector<BatchSummary> s;
    for (double delta : {0.5, 0.7, 0.9}) {
        const ShapeSpec shape = elongated_rect(64.0, delta);
        s.push_back(simulate(fmt("rect delta=%.1f", delta), kSide64, 3.0, make_target(shape), 1000));
        v.detail += fmt("delta=%.1f %.4g+-%.2g; ", delta, s.back().mean_time, s.back().sem_time);
    }
    v.passed = s[0].mean_time > s[1].mean_time && s[1].mean_time > s[2].mean_time &&
               !overlaps(ci95(s[0].mean_time, s[0].sem_time), ci95(s[2].mean_time, s[2].sem_time));
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"sampler correctness", sampler_correctness},
        {"projection tail exponent", projection_exponent},
        {"cauchy scale invariance", cauchy_scale_invariance},
        {"ballistic penalty", ballistic_penalty},
        {"diffusive penalty", diffusive_penalty},
        {"line exception (discrete)", line_exception},
        {"exact oracle agreement", exact_oracle},
        {"geometry oracle", geometry_oracle},
        {"elongation sweep", elongation_sweep},
        {"wald identity", wald_identity},
    };
    // Printed in criterion order; the Wald check runs last so it sees every batch.
    const std::map<std::string, int> number = {
        {"sampler correctness", 1},  {"projection tail exponent", 2}, {"wald identity", 3},
        {"cauchy scale invariance", 4}, {"ballistic penalty", 5},      {"diffusive penalty", 6},
        {"line exception (discrete)", 7}, {"exact oracle agreement", 8}, {"geometry oracle", 9},
        {"elongation sweep", 10}};

    std::map<int, std::string> lines;
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += v.passed ? 0 : 1;
        std::ostringstream line;
        line << (v.passed ? "PASS" : "FAIL") << " criterion " << number.at(name) << " " << name << " | "
             << v.detail << fmt(" [%.1fs]", seconds_since(t0));
        std::fprintf(stderr, "%s\n", line.str().c_str());
        lines[number.at(name)] = line.str();
    }
    std::printf("\n");
    for (const auto& [n, line] : lines) std::printf("%s\n", line.c_str());
    std::printf("%d of %zu criteria passed\n", static_cast<int>(lines.size()) - failures, lines.size());
    return failures == 0 ? 0 : 1;
}
