#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <levy3d/levy3d.hpp>

namespace levy3d::cli {
namespace {

using nlohmann::ordered_json;

constexpr const char* kVersion = "levy3d 1.0.0";

struct TargetFlags {
    std::string kind;
    std::vector<double> size;
    double d = 1.0;
};

struct SimulateFlags {
    double n = 262144.0;
    double mu = 0.0;
    TargetFlags target;
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    std::uint64_t step_cap = kDefaultStepCap;
    std::string out = "-";
};

struct ScenarioFlags {
    std::string name;
    double n = 262144.0;
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    std::uint64_t step_cap = kDefaultStepCap;
    std::string out = "-";
    bool list = false;
};

struct BoundsFlags {
    double n = 262144.0;
    double mu = 0.0;
    TargetFlags target;
    std::string out = "-";
};

struct DiscreteFlags {
    int side = 16;
    double mu = 2.5;
    int length = 4;
    int ell_max = 0;
    double lazy = 0.5;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::uint64_t step_cap = 1'000'000'000ULL;
    bool exact = false;
    std::string out = "-";
};

struct ValidateFlags {
    std::string level = "quick";
    double corrupt_normalization = 1.0;
    std::uint64_t seed = 20240601;
};

void add_target_flags(CLI::App* sub, TargetFlags& t) {
    sub->add_option("--target", t.kind, "Target shape: ball|disc|line|rect")->required();
    sub->add_option("--size", t.size, "Shape parameters: R (ball, disc), L (line), or a,b (rect)")
        ->required()
        ->expected(1, 2)
        ->delimiter(',');
    sub->add_option("--d", t.d, "Detection radius (>= 1)")->capture_default_str();
}

ShapeSpec shape_from(const TargetFlags& t) {
    const ShapeKind kind = parse_shape_kind(t.kind);
    const std::size_t want = kind == ShapeKind::rect ? 2 : 1;
    if (t.size.size() != want) {
        throw InvalidInput("--size for " + t.kind + " takes " + std::to_string(want) + " value(s)");
    }
    return {kind, t.size[0], want == 2 ? t.size[1] : 0.0};
}

void check_mu(double mu) {
    if (!(std::isfinite(mu) && mu > 1.0 && mu <= 3.0)) {
        throw InvalidInput("--mu must lie in (1, 3]");
    }
}

/// Writes to `fallback` for "-", otherwise to the named file.
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        body(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw InvalidInput("cannot open output file '" + path + "'");
    body(file);
    if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<std::string> provenance(const CLI::App& app, const std::string& command) {
    std::vector<std::string> lines{std::string(kVersion) + " " + command};
    std::istringstream config(app.config_to_str(true, false));
    std::string line;
    while (std::getline(config, line)) {
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

ordered_json to_json(const BoundValue& b) {
    ordered_json j;
    j["value"] = b.value ? ordered_json(*b.value) : ordered_json(nullptr);
    j["formula"] = b.formula;
    if (!b.present()) j["reason"] = b.reason;
    return j;
}

int cmd_simulate(const CLI::App& app, const SimulateFlags& f, std::ostream& out, std::ostream& err) {
    check_mu(f.mu);
    SweepSpec spec;
    spec.scenario = "simulate";
    spec.n = f.n;
    spec.mus = {f.mu};
    spec.shapes = {shape_from(f.target)};
    spec.trials = f.trials;
    spec.master_seed = f.seed;
    spec.step_cap = f.step_cap;
    spec.d = f.target.d;
    const auto records = join_bounds(run_sweep(spec));
    emit(f.out, out, [&](std::ostream& o) { write_csv(o, records, provenance(app, "simulate")); });
    if (records.front().all_truncated()) {
        err << "degenerate result: every trial reached the step cap (" << f.step_cap << ")\n";
        return degenerate;
    }
    return ok;
}

int cmd_scenario(const CLI::App& app, const ScenarioFlags& f, std::ostream& out, std::ostream& err) {
    const auto names = scenario_names();
    if (f.list) {
        for (const auto& name : names) out << name << '\n';
        return ok;
    }
    const auto library = scenario_library(f.n);
    const auto it = library.find(f.name);
    if (it == library.end()) {
        std::string valid;
        for (const auto& name : names) valid += (valid.empty() ? "" : ", ") + name;
        throw InvalidInput("unknown scenario '" + f.name + "'; valid names: " + valid);
    }
    SweepSpec spec = it->second;
    if (spec.shapes.empty()) {
        throw InvalidInput("scenario '" + f.name + "' has no target that fits a torus of volume " +
                           std::to_string(f.n));
    }
    spec.trials = f.trials;
    spec.master_seed = f.seed;
    spec.step_cap = f.step_cap;
    const auto records = join_bounds(run_sweep(spec));
    emit(f.out, out, [&](std::ostream& o) { write_csv(o, records, provenance(app, "scenario " + f.name)); });
    std::size_t degenerate_cells = 0;
    for (const auto& r : records) degenerate_cells += r.all_truncated() ? 1 : 0;
    if (degenerate_cells > 0) {
        err << "degenerate result: " << degenerate_cells << " cell(s) had every trial reach the step cap\n";
        return degenerate;
    }
    return ok;
}

int cmd_bounds(const BoundsFlags& f, std::ostream& out) {
    check_mu(f.mu);
    const ShapeSpec s = shape_from(f.target);
    const Target target = make_target(s, f.target.d);
    const BoundsReport r = evaluate(target, f.mu, f.n);
    const GeoDescriptors& g = r.geometry;

    ordered_json j;
    j["mu"] = r.mu;
    j["n"] = r.n;
    j["target"] = {{"shape", std::string(to_string(s.kind))}, {"p1", s.p1}, {"p2", s.p2}, {"d", f.target.d}};
    j["geometry"] = {{"V", g.volume},
                     {"surface_area", g.surface_area},
                     {"delta_B", g.largest_face_area},
                     {"delta_P", g.projected_area},
                     {"elong", g.elongation},
                     {"box_sides", g.box_sides},
                     {"approx_convex", g.approx_convex}};
    j["universal_lb"] = to_json(r.universal_lb);
    j["ballistic_lb"] = to_json(r.ballistic_lb);
    j["diffusive_lb"] = to_json(r.diffusive_lb);
    j["ball_disc_lb"] = to_json(r.ball_disc_lb);
    j["cauchy_ub"] = to_json(r.cauchy_ub);
    j["travel_time"] = to_json(r.travel_time);
    j["regime_lb"] = r.regime_lb();
    j["disclaimer"] = r.disclaimer;
    emit(f.out, out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
    return ok;
}

int cmd_discrete(const DiscreteFlags& f, std::ostream& out) {
    check_mu(f.mu);
    LatticeWalkParams p;
    p.side = f.side;
    p.mu = f.mu;
    p.ell_max = f.ell_max;
    p.lazy_prob = f.lazy;
    const HitSummary s = hit_line(p, f.length, f.trials, f.seed, f.step_cap);

    ordered_json j;
    j["side"] = f.side;
    j["nodes"] = p.nodes();
    j["mu"] = f.mu;
    j["ell_max"] = p.effective_ell_max();
    j["lazy"] = f.lazy;
    j["length"] = f.length;
    j["trials"] = s.trials;
    j["truncated_frac"] = s.truncated_fraction;
    j["mean_time"] = s.mean_time;
    j["sem_time"] = s.sem_time;
    j["mean_steps"] = s.mean_steps;
    j["sem_steps"] = s.sem_steps;
    if (f.exact) {
        std::vector<std::uint32_t> targets;
        for (int x = 0; x < f.length; ++x) targets.push_back(lattice_node(f.side, x, 0, 0));
        const auto h = exact_hitting_steps(lattice_chain(p), targets);
        double mean = 0.0;
        for (double v : h) mean += v;
        j["exact_mean_steps"] = mean / static_cast<double>(h.size());
    }
    emit(f.out, out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
    return ok;
}

int cmd_validate(const ValidateFlags& f, std::ostream& out) {
    ValidationOptions opt;
    opt.level = f.level == "full" ? ValidationLevel::full : ValidationLevel::quick;
    opt.normalization_scale = f.corrupt_normalization;
    opt.seed = f.seed;
    const auto checks = run_validation(opt);
    std::size_t failed = 0;
    for (const auto& c : checks) {
        failed += c.passed ? 0 : 1;
        out << (c.passed ? "PASS " : "FAIL ") << c.module << ": " << c.invariant;
        if (!c.detail.empty()) out << " [" << c.detail << "]";
        out << '\n';
    }
    out << checks.size() << " checks, " << failed << " failed\n";
    return failed == 0 ? ok : validation_failed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Intermittent Levy walk search on the 3D torus"};
    app.set_config("--config", "", "INI file with one section per subcommand; flags override it");
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    SimulateFlags sim;
    auto* simulate = app.add_subcommand("simulate", "Run one batch and write one CSV row");
    simulate->add_option("--n", sim.n, "Torus volume")->capture_default_str();
    simulate->add_option("--mu", sim.mu, "Levy exponent in (1, 3]")->required();
    add_target_flags(simulate, sim.target);
    simulate->add_option("--trials", sim.trials, "Independent trials")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
    simulate->add_option("--step-cap", sim.step_cap, "Per-trial step cap")->capture_default_str();
    simulate->add_option("--out", sim.out, "Output CSV path, - for stdout")->capture_default_str();

    ScenarioFlags sc;
    auto* scenario = app.add_subcommand("scenario", "Run a named preset sweep and write CSV");
    scenario->add_option("name", sc.name, "Scenario name");
    scenario->add_flag("--list", sc.list, "List scenario names");
    scenario->add_option("--n", sc.n, "Torus volume")->capture_default_str();
    scenario->add_option("--trials", sc.trials, "Trials per cell")->capture_default_str();
    scenario->add_option("--seed", sc.seed, "Master seed")->capture_default_str();
    scenario->add_option("--step-cap", sc.step_cap, "Per-trial step cap")->capture_default_str();
    scenario->add_option("--out", sc.out, "Output CSV path, - for stdout")->capture_default_str();

    BoundsFlags bf;
    auto* bounds = app.add_subcommand("bounds", "Evaluate the detection-time bounds as JSON");
    bounds->add_option("--n", bf.n, "Torus volume")->capture_default_str();
    bounds->add_option("--mu", bf.mu, "Levy exponent in (1, 3]")->required();
    add_target_flags(bounds, bf.target);
    bounds->add_option("--out", bf.out, "Output JSON path, - for stdout")->capture_default_str();

    DiscreteFlags df;
    auto* discrete = app.add_subcommand("discrete", "Lattice walk hitting an axis-parallel path");
    discrete->add_option("--side", df.side, "Lattice side")->capture_default_str();
    discrete->add_option("--mu", df.mu, "Levy exponent in (1, 3]")->capture_default_str();
    discrete->add_option("--length", df.length, "Path length in nodes")->capture_default_str();
    discrete->add_option("--ell-max", df.ell_max, "Largest jump, 0 for side/2")->capture_default_str();
    discrete->add_option("--lazy", df.lazy, "Probability of staying put")->capture_default_str();
    discrete->add_option("--trials", df.trials, "Independent trials")->capture_default_str();
    discrete->add_option("--seed", df.seed, "Master seed")->capture_default_str();
    discrete->add_option("--step-cap", df.step_cap, "Per-trial step cap")->capture_default_str();
    discrete->add_flag("--exact", df.exact, "Also solve the exact hitting time (small lattices)");
    discrete->add_option("--out", df.out, "Output JSON path, - for stdout")->capture_default_str();

    ValidateFlags vf;
    auto* validate = app.add_subcommand("validate", "Run the self-checks");
    validate->add_option("--level", vf.level, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}))
        ->capture_default_str();
    validate->add_option("--seed", vf.seed, "Seed for the Monte Carlo checks")->capture_default_str();
    validate->add_option("--corrupt-normalization", vf.corrupt_normalization,
                         "Test hook: scale the step-length normalization constant")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return usage;
    }

    try {
        if (*simulate) return cmd_simulate(app, sim, out, err);
        if (*scenario) {
            if (!sc.list && sc.name.empty()) throw InvalidInput("scenario: a name or --list is required");
            return cmd_scenario(app, sc, out, err);
        }
        if (*bounds) return cmd_bounds(bf, out);
        if (*discrete) return cmd_discrete(df, out);
        if (*validate) return cmd_validate(vf, out);
    } catch (const InvalidInput& e) {
        err << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const DiagnosticError& e) {
        err << "degenerate result: " << e.what() << '\n';
        return degenerate;
    }
    return usage;
}

}  // namespace levy3d::cli
