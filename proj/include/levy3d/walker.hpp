#pragma once

// Intermittent Levy walk on the cubic torus. Detection is tested only at
// step endpoints; elapsed time is the summed step length (unit speed, zero
// scan time).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "sampler.hpp"
#include "stats.hpp"

namespace levy3d {

inline constexpr std::uint64_t kDefaultStepCap = 100'000'000;

struct WalkParams {
    double mu = 2.0;
    double n = 262144.0;  // torus volume
    double ell_max = 0.0;  // <= 0 selects cbrt(n) / 2
    double d = 1.0;

    double half_width() const { return torus_half_width(n); }
    double effective_ell_max() const { return ell_max > 0.0 ? ell_max : half_width(); }

    void validate() const {
        detail::require(std::isfinite(n) && n >= 8.0, "torus volume n must be >= 8");
        detail::require(std::isfinite(mu) && mu > 1.0 && mu <= 3.0, "mu must lie in (1, 3]");
        detail::require(std::isfinite(d) && d >= 1.0, "detection radius d must be >= 1");
        const double lmax = effective_ell_max();
        detail::require(lmax > 1.0, "ell_max must exceed 1");
        detail::require(lmax <= half_width() * (1.0 + 1e-12), "ell_max must not exceed cbrt(n)/2");
    }
};

struct TrialOutcome {
    double detect_time = 0.0;
    std::uint64_t detect_steps = 0;
    bool truncated = false;

    friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

namespace detail {

inline void check_target(const WalkParams& params, const Target& target) {
    require(target.detection_radius() == params.d, "target detection radius differs from walk d");
    require(target.fits(params.half_width()), "target does not fit in the torus");
}

/// Trial loop shared by run_trial and run_batch; inputs already validated.
template <class Engine>
TrialOutcome walk_until_detect(const StepDist& dist, double half_width, const Target& target, Engine& rng,
                               std::uint64_t step_cap) {
    const Vec3 start{(2.0 * uniform01(rng) - 1.0) * half_width, (2.0 * uniform01(rng) - 1.0) * half_width,
                     (2.0 * uniform01(rng) - 1.0) * half_width};
    TorusPoint pos(start, half_width);
    TrialOutcome out;
    if (contains(target, pos)) {
        return out;
    }
    while (out.detect_steps < step_cap) {
        const double ell = dist.sample(rng);
        pos = pos.moved(sample_direction(rng) * ell);
        out.detect_time += ell;
        ++out.detect_steps;
        if (contains(target, pos)) {
            return out;
        }
    }
    out.truncated = true;
    return out;
}

}  // namespace detail

/// One search from a uniform start until the endpoint of a step lands in the
/// target, or `step_cap` steps elapse (flagged, not an error).
template <class Engine>
TrialOutcome run_trial(const WalkParams& params, const Target& target, Engine& rng,
                       std::uint64_t step_cap = kDefaultStepCap) {
    params.validate();
    detail::check_target(params, target);
    detail::require(step_cap >= 1, "step_cap must be >= 1");
    const StepDist dist(params.mu, params.effective_ell_max());
    return detail::walk_until_detect(dist, params.half_width(), target, rng, step_cap);
}

struct BatchSummary {
    std::size_t trials = 0;
    std::size_t completed = 0;
    double truncated_fraction = 0.0;
    double mean_time = 0.0;
    double sem_time = 0.0;
    double mean_steps = 0.0;
    double sem_steps = 0.0;
};

struct BatchResult {
    std::vector<TrialOutcome> outcomes;
    BatchSummary summary;
};

/// Aggregates non-truncated outcomes in index order.
inline BatchSummary summarize(const std::vector<TrialOutcome>& outcomes) {
    RunningStats time;
    RunningStats steps;
    std::size_t truncated = 0;
    for (const auto& o : outcomes) {
        if (o.truncated) {
            ++truncated;
            continue;
        }
        time.add(o.detect_time);
        steps.add(static_cast<double>(o.detect_steps));
    }
    BatchSummary s;
    s.trials = outcomes.size();
    s.completed = time.count();
    s.truncated_fraction =
        outcomes.empty() ? 0.0 : static_cast<double>(truncated) / static_cast<double>(outcomes.size());
    s.mean_time = time.mean();
    s.sem_time = time.sem();
    s.mean_steps = steps.mean();
    s.sem_steps = steps.sem();
    return s;
}

/// Independent trials; trial i draws from stream derive_seed(master_seed, i),
/// so the result does not depend on scheduling.
inline BatchResult run_batch(const WalkParams& params, const Target& target, std::size_t trials,
                             std::uint64_t master_seed, std::uint64_t step_cap = kDefaultStepCap) {
    params.validate();
    detail::check_target(params, target);
    detail::require(trials >= 1, "run_batch: need at least one trial");
    detail::require(step_cap >= 1, "step_cap must be >= 1");
    const StepDist dist(params.mu, params.effective_ell_max());
    const double h = params.half_width();

    BatchResult result;
    result.outcomes.resize(trials);
    parallel_for(trials, [&](std::size_t i) {
        Rng rng = make_stream(master_seed, i);
        result.outcomes[i] = detail::walk_until_detect(dist, h, target, rng, step_cap);
    });
    result.summary = summarize(result.outcomes);
    if (result.summary.completed == 0) {
        throw DiagnosticError("run_batch: every trial hit the step cap (" + std::to_string(step_cap) + ")");
    }
    return result;
}

/// Difference mean(T) - tau * mean(steps) over completed trials. Its standard
/// error comes from the per-trial residuals T_i - tau * steps_i, which is much
/// tighter than combining the two marginal errors.
struct WaldCheck {
    double difference = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;

    bool within(double sigmas) const { return std::abs(difference) <= sigmas * std_error; }
};

inline WaldCheck wald_check(const std::vector<TrialOutcome>& outcomes, double tau) {
    RunningStats residual;
    for (const auto& o : outcomes) {
        if (!o.truncated) residual.add(o.detect_time - tau * static_cast<double>(o.detect_steps));
    }
    if (residual.count() < 2) {
        throw DiagnosticError("wald_check: need at least two completed trials");
    }
    return {residual.mean(), residual.sem(), residual.count()};
}

}  // namespace levy3d
