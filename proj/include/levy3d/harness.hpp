#pragma once

// Parameter sweeps over (mu, target) grids, named scenario presets, and the
// join of simulated means with the bounds oracle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "bounds.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "random.hpp"
#include "walker.hpp"

namespace levy3d {

/// Target family member. p1/p2 are: ball (R, 0), disc (R, 0), line (L, 0),
/// rect (a, b).
struct ShapeSpec {
    ShapeKind kind = ShapeKind::ball;
    double p1 = 0.0;
    double p2 = 0.0;

    friend bool operator==(const ShapeSpec&, const ShapeSpec&) = default;
};

inline Target make_target(const ShapeSpec& s, double d = 1.0) {
    switch (s.kind) {
        case ShapeKind::ball: return Target::ball(s.p1, d);
        case ShapeKind::disc: return Target::disc(s.p1, d);
        case ShapeKind::line: return Target::line(s.p1, d);
        case ShapeKind::rect: return Target::rect(s.p1, s.p2, d);
    }
    throw InvalidInput("make_target: unknown shape kind");
}

struct SweepSpec {
    std::string scenario = "custom";
    double n = 262144.0;
    std::vector<double> mus;
    std::vector<ShapeSpec> shapes;
    std::size_t trials = 200;
    std::uint64_t master_seed = 1;
    std::uint64_t step_cap = kDefaultStepCap;
    double d = 1.0;
};

struct SweepCell {
    ShapeSpec shape;
    double mu = 0.0;
};

struct SweepRecord {
    std::string scenario;
    double mu = 0.0;
    double n = 0.0;
    ShapeKind shape = ShapeKind::ball;
    double p1 = 0.0;
    double p2 = 0.0;
    double d = 1.0;
    double delta_B = 0.0;
    double delta_P = 0.0;
    double elong = 0.0;
    double V = 0.0;
    std::uint64_t trials = 0;
    double truncated_frac = 0.0;
    double mean_time = 0.0;
    double sem_time = 0.0;
    double mean_steps = 0.0;
    double sem_steps = 0.0;
    double universal_lb = std::numeric_limits<double>::quiet_NaN();
    double cauchy_ub = std::numeric_limits<double>::quiet_NaN();
    double regime_lb = std::numeric_limits<double>::quiet_NaN();
    double overhead = std::numeric_limits<double>::quiet_NaN();

    bool all_truncated() const { return truncated_frac >= 1.0; }

    friend bool operator==(const SweepRecord& a, const SweepRecord& b) {
        // NaN-aware field comparison.
        auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
        return a.scenario == b.scenario && same(a.mu, b.mu) && same(a.n, b.n) && a.shape == b.shape &&
               same(a.p1, b.p1) && same(a.p2, b.p2) && same(a.d, b.d) && same(a.delta_B, b.delta_B) &&
               same(a.delta_P, b.delta_P) && same(a.elong, b.elong) && same(a.V, b.V) && a.trials == b.trials &&
               same(a.truncated_frac, b.truncated_frac) && same(a.mean_time, b.mean_time) &&
               same(a.sem_time, b.sem_time) && same(a.mean_steps, b.mean_steps) &&
               same(a.sem_steps, b.sem_steps) && same(a.universal_lb, b.universal_lb) &&
               same(a.cauchy_ub, b.cauchy_ub) && same(a.regime_lb, b.regime_lb) && same(a.overhead, b.overhead);
    }
};

/// Cells in deterministic order: shapes by (kind, p1, p2), then mu ascending.
inline std::vector<SweepCell> expand(const SweepSpec& spec) {
    std::vector<SweepCell> cells;
    for (const auto& s : spec.shapes) {
        for (double mu : spec.mus) cells.push_back({s, mu});
    }
    std::stable_sort(cells.begin(), cells.end(), [](const SweepCell& a, const SweepCell& b) {
        return std::tie(a.shape.kind, a.shape.p1, a.shape.p2, a.mu) <
               std::tie(b.shape.kind, b.shape.p1, b.shape.p2, b.mu);
    });
    return cells;
}

/// Seed for a cell, derived from its content rather than its position so
/// that adding or removing cells leaves the others untouched.
inline std::uint64_t cell_seed(const SweepSpec& spec, const SweepCell& cell) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s|%a|%a|%a|%a|%a", std::string(to_string(cell.shape.kind)).c_str(),
                  cell.shape.p1, cell.shape.p2, cell.mu, spec.n, spec.d);
    return hash_combine(spec.master_seed, spec.scenario + "|" + buf);
}

inline SweepRecord run_cell(const SweepSpec& spec, const SweepCell& cell) {
    const Target target = make_target(cell.shape, spec.d);
    const GeoDescriptors g = descriptors(target);
    SweepRecord r;
    r.scenario = spec.scenario;
    r.mu = cell.mu;
    r.n = spec.n;
    r.shape = cell.shape.kind;
    r.p1 = cell.shape.p1;
    r.p2 = cell.shape.p2;
    r.d = spec.d;
    r.delta_B = g.largest_face_area;
    r.delta_P = g.projected_area;
    r.elong = g.elongation;
    r.V = g.volume;
    r.trials = spec.trials;

    WalkParams params;
    params.mu = cell.mu;
    params.n = spec.n;
    params.d = spec.d;
    try {
        const BatchResult batch = run_batch(params, target, spec.trials, cell_seed(spec, cell), spec.step_cap);
        r.truncated_frac = batch.summary.truncated_fraction;
        r.mean_time = batch.summary.mean_time;
        r.sem_time = batch.summary.sem_time;
        r.mean_steps = batch.summary.mean_steps;
        r.sem_steps = batch.summary.sem_steps;
    } catch (const DiagnosticError&) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.truncated_frac = 1.0;
        r.mean_time = r.sem_time = r.mean_steps = r.sem_steps = nan;
    }
    return r;
}

/// Runs every cell. A cell whose trials all truncate yields a record with
/// truncated_frac = 1 and NaN means; the sweep continues.
inline std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
    detail::require(!spec.mus.empty() && !spec.shapes.empty(), "run_sweep: empty grid");
    detail::require(spec.trials >= 1, "run_sweep: need at least one trial per cell");
    WalkParams probe;
    probe.n = spec.n;
    probe.d = spec.d;
    const double h = probe.half_width();
    for (double mu : spec.mus) {
        probe.mu = mu;
        probe.validate();
    }
    for (const auto& s : spec.shapes) {
        detail::require(make_target(s, spec.d).fits(h), "run_sweep: a target does not fit in the torus");
    }
    std::vector<SweepRecord> out;
    for (const auto& cell : expand(spec)) out.push_back(run_cell(spec, cell));
    return out;
}

/// Fills universal_lb, cauchy_ub, regime_lb and overhead from the bounds
/// oracle, using the descriptors of each record's target.
inline std::vector<SweepRecord> join_bounds(std::vector<SweepRecord> records) {
    for (auto& r : records) {
        const Target t = make_target({r.shape, r.p1, r.p2}, r.d);
        const BoundsReport b = evaluate(t, r.mu, r.n);
        r.universal_lb = *b.universal_lb.value;
        r.cauchy_ub = *b.cauchy_ub.value;
        r.regime_lb = b.regime_lb();
        r.overhead = std::isfinite(r.mean_time) && r.mean_time > 0.0 ? overhead(r.mean_time, b.geometry, r.n)
                                                                     : std::numeric_limits<double>::quiet_NaN();
    }
    return records;
}

// ---------------------------------------------------------------------------
// Scenario presets
//
// Target sizes are chosen for a torus of side 64 and scaled by side / 64.
// Shapes whose scaled size would not fit, or would fall below the detection
// radius, are dropped.

inline std::vector<double> mu_grid(double lo, double hi, double step) {
    std::vector<double> out;
    const int count = static_cast<int>(std::lround((hi - lo) / step));
    for (int i = 0; i <= count; ++i) out.push_back(std::round((lo + step * i) * 1e9) / 1e9);
    return out;
}

namespace detail {

inline bool admissible(const ShapeSpec& s, double d, double half_width) {
    try {
        return make_target(s, d).fits(half_width);
    } catch (const InvalidInput&) {
        return false;
    }
}

inline SweepSpec preset(std::string name, double n, std::vector<double> mus, const std::vector<ShapeSpec>& shapes) {
    SweepSpec spec;
    spec.scenario = std::move(name);
    spec.n = n;
    spec.mus = std::move(mus);
    const double h = torus_half_width(n);
    for (const auto& s : shapes) {
        if (admissible(s, spec.d, h)) spec.shapes.push_back(s);
    }
    return spec;
}

}  // namespace detail

/// Ball/disc radius and line length sharing projected area `area` (d = 1).
inline std::vector<ShapeSpec> matched_projection_shapes(double area, double d = 1.0) {
    const double radius = std::sqrt(area / std::numbers::pi);
    const double length = (area - std::numbers::pi * d * d) / (2.0 * d);
    return {{ShapeKind::ball, radius, 0.0}, {ShapeKind::disc, radius, 0.0}, {ShapeKind::line, length, 0.0}};
}

/// Rectangle a x b with a = area^delta and b = area^{1-delta}.
inline ShapeSpec elongated_rect(double area, double delta) {
    return {ShapeKind::rect, std::pow(area, delta), std::pow(area, 1.0 - delta)};
}

inline std::vector<std::string> scenario_names() {
    return {"cauchy-shapes",      "relative-ball",       "relative-disk", "relative-line",
            "ratio-fixed-volume", "ratio-fixed-surface", "rect-delta"};
}

/// All presets for a torus of volume n.
inline std::map<std::string, SweepSpec> scenario_library(double n = 262144.0) {
    const double side = std::cbrt(n);
    const double s = side / 64.0;
    const auto relative_mus = mu_grid(1.2, 3.0, 0.2);
    std::map<std::string, SweepSpec> lib;

    {
        std::vector<ShapeSpec> shapes;
        for (double frac : {1.0 / 128.0, 1.0 / 64.0, 1.0 / 34.0}) {
            for (const auto& sh : matched_projection_shapes(side * side * frac)) shapes.push_back(sh);
        }
        lib["cauchy-shapes"] = detail::preset("cauchy-shapes", n, {2.0}, shapes);
    }
    {
        std::vector<ShapeSpec> balls;
        std::vector<ShapeSpec> discs;
        std::vector<ShapeSpec> lines;
        for (double r : {2.0, 4.0, 8.0, 16.0}) balls.push_back({ShapeKind::ball, r * s, 0.0});
        for (double r : {4.0, 8.0, 16.0, 24.0}) discs.push_back({ShapeKind::disc, r * s, 0.0});
        for (double l : {8.0, 16.0, 32.0, 56.0}) lines.push_back({ShapeKind::line, l * s, 0.0});
        lib["relative-ball"] = detail::preset("relative-ball", n, relative_mus, balls);
        lib["relative-disk"] = detail::preset("relative-disk", n, relative_mus, discs);
        lib["relative-line"] = detail::preset("relative-line", n, relative_mus, lines);
    }
    {
        // Ball of radius R against the line of equal volume (resp. surface).
        std::vector<ShapeSpec> by_volume;
        for (double r : {1.5, 2.0, 2.5, 3.0, 3.5}) {
            const double volume = 4.0 / 3.0 * std::numbers::pi * r * r * r;
            const double length = (volume - 4.0 / 3.0 * std::numbers::pi) / std::numbers::pi;
            const ShapeSpec ball{ShapeKind::ball, r, 0.0};
            const ShapeSpec line{ShapeKind::line, length, 0.0};
            if (detail::admissible(ball, 1.0, side / 2) && detail::admissible(line, 1.0, side / 2)) {
                by_volume.push_back(ball);
                by_volume.push_back(line);
            }
        }
        std::vector<ShapeSpec> by_surface;
        for (double r : {2.0, 3.0, 4.0, 5.0}) {
            const ShapeSpec ball{ShapeKind::ball, r, 0.0};
            const ShapeSpec line{ShapeKind::line, 2.0 * (r * r - 1.0), 0.0};
            if (detail::admissible(ball, 1.0, side / 2) && detail::admissible(line, 1.0, side / 2)) {
                by_surface.push_back(ball);
                by_surface.push_back(line);
            }
        }
        lib["ratio-fixed-volume"] = detail::preset("ratio-fixed-volume", n, relative_mus, by_volume);
        lib["ratio-fixed-surface"] = detail::preset("ratio-fixed-surface", n, relative_mus, by_surface);
    }
    {
        std::vector<ShapeSpec> rects;
        const double area = 64.0 * s * s;
        for (double delta : {0.5, 0.6, 0.7, 0.8, 0.9}) rects.push_back(elongated_rect(area, delta));
        lib["rect-delta"] = detail::preset("rect-delta", n, {1.1, 1.5, 2.0, 2.5, 3.0}, rects);
    }
    return lib;
}

}  // namespace levy3d
