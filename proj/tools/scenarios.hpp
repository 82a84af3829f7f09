#pragma once

// End-to-end verification recipes behind `pushfront verify <scenario>`.

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "pushfront/pushfront.hpp"
#include "pushfront/io.hpp"

namespace pushfront::cli {

struct Criterion {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ScenarioResult {
    std::vector<Criterion> criteria;
    json report = json::object();
    std::vector<std::pair<std::string, Table>> tables;  // file name, contents
    bool passed() const {
        return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass; });
    }
};

inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"stability",  "global-front", "two-front",
                                                "spreading", "envelope",     "origin-approach"};
    return names;
}

/// Recipe defaults; a config file and flags are layered on top.
inline RunConfig scenario_defaults(const std::string& name, const std::string& preset) {
    RunConfig c;
    c.model.preset = preset;
    auto& s = c.simulation;
    if (name == "global-front") {
        s.datum = "front_like";
        s.x_min = -150; s.x_max = 180; s.dt = 5e-5; s.T = 120; s.B = 140;
    } else if (name == "two-front") {
        c.h = 0.1;
        s.datum = "compact_bump";
        s.x_min = -360; s.x_max = 360; s.dt = 0.0025; s.T = 120;
    } else if (name == "spreading") {
        s.datum = preset == "kpp" ? "heaviside" : "compact_bump";
        s.x_min = -300; s.x_max = 300; s.dt = 0.0025; s.T = 120;
    } else if (name == "stability" || name == "envelope") {
        s.datum = "perturbed_profile";
        s.x_min = -300; s.x_max = 100; s.dt = 0.001; s.T = 40;
        c.diagnostics.snapshot_cadence = 0.5;
    } else if (name == "origin-approach") {
        s.datum = "heaviside";
        s.x_min = -180; s.x_max = 180; s.dt = 0.0025; s.T = 60;
    } else {
        throw InvalidArgument("unknown scenario '" + name + "'");
    }
    return c;
}

inline ProfileOptions profile_options(const RunConfig& c) {
    ProfileOptions o;
    if (c.profile.half_width > 0) o.half_width = c.profile.half_width;
    if (c.profile.right_width > 0) o.right_width = c.profile.right_width;
    o.dz = c.profile.dz;
    o.tol = c.profile.tol;
    o.max_iterations = static_cast<std::size_t>(c.profile.max_iterations);
    return o;
}

struct FrontData {
    MinimalSpeed speed;
    std::shared_ptr<const WaveProfile> phi;  // refined when `refine` > 1
    SpectralSummary spec;
    FrontClass kind;
};

/// Minimal front; pushed fronts are re-matched on a grid `refine` times finer.
inline FrontData minimal_front(const RunConfig& c, const BirthFunction& g, int refine = 1) {
    FrontData f;
    f.spec = minimal_linear_speed(g, c.h);
    const auto opt = profile_options(c);
    f.speed = minimal_speed(c.h, g, c.profile.tol_c, opt);
    f.kind = classify_front(f.speed, f.spec, c.profile.tol_c);
    if (refine > 1 && f.speed.fast_tail) {
        auto fine = opt;
        fine.dz = opt.dz / refine;
        const double c0 = f.speed.front.c;
        f.phi = std::make_shared<WaveProfile>(fast_front(c.h, g, c0 - 3e-4, c0 + 1e-4, c.profile.tol_c, fine));
    } else {
        f.phi = std::make_shared<WaveProfile>(f.speed.front);
    }
    return f;
}

inline double diagnostic_lambda(const RunConfig& c, const FrontData& f) {
    if (c.diagnostics.lambda > 0.0) return WeightedFrame::make(c.diagnostics.lambda, f.phi->c, f.spec).lambda;
    return WeightedFrame::midpoint(f.phi->c, f.spec).lambda;
}

struct SimOutput {
    InitialDatum datum;
    std::vector<Snapshot> snapshots;
    std::vector<LevelRecord> levels;
    std::vector<PointRecord> points;
};

inline SimOutput simulate(const RunConfig& c, const BirthFunction& g, const FrontData& f, double lambda) {
    const auto& s = c.simulation;
    validate_domain(c, f.spec.c_sharp);
    const double dt = s.dt > 0.0 ? s.dt : max_time_step(c.h, g);
    const auto grid = UniformGrid::span(s.x_min, s.x_max, s.dx);
    DatumParams p;
    p.mu = s.mu > 0.0 ? s.mu : f.spec.decay_rates(f.phi->c).lambda2;
    p.B = s.B;
    p.sigma = s.sigma;
    p.center = s.center;
    p.width = s.width;
    p.height = s.height;
    p.profile = f.phi;
    p.shift = s.shift;
    p.epsilon = s.epsilon;
    p.lambda = lambda;
    p.seed = static_cast<std::uint64_t>(s.seed);
    SimOutput out;
    out.datum = make_initial_datum(parse_datum_kind(s.datum), p, grid, c.h, dt, g);
    DelayedField field(out.datum, g);
    SnapshotRecorder snaps;
    LevelSetRecorder levels(c.diagnostics.level * g.kappa());
    PointRecorder point(c.diagnostics.point_x);
    run(field, g, s.T,
        {snaps.observer(c.diagnostics.snapshot_cadence), levels.observer(c.diagnostics.level_cadence),
         point.observer(c.diagnostics.point_cadence)});
    out.snapshots = std::move(snaps.snapshots);
    out.levels = std::move(levels.records);
    out.points = std::move(point.records);
    return out;
}

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline Criterion below(const std::string& name, double value, double bound) {
    return {name, value < bound, fmt(value) + " < " + fmt(bound)};
}

inline Criterion within(const std::string& name, double value, double target, double rel) {
    const double err = std::abs(value - target) / std::abs(target);
    return {name, err <= rel, fmt(value) + " vs " + fmt(target) + " (rel " + fmt(err) + " <= " + fmt(rel) + ")"};
}

// Time window [t_from, T] covering the last quarter.
inline double last_quarter(const RunConfig& c) { return 0.75 * c.simulation.T; }

inline ScenarioResult global_front(const RunConfig& c, const BirthFunction& g) {
    ScenarioResult r;
    const auto f = minimal_front(c, g, 4);
    const double lambda = diagnostic_lambda(c, f);
    auto sim = simulate(c, g, f, lambda);
    const auto ic = validate_IC(sim.datum, f.spec.decay_rates(f.phi->c).lambda1);
    r.criteria.push_back({"datum satisfies (IC)", ic.ic1 && ic.ic2 && ic.ic3,
                          "IC1 " + std::to_string(ic.ic1) + ", IC2 " + std::to_string(ic.ic2) + ", IC3 " +
                              std::to_string(ic.ic3)});
    const auto rep = single_front_report(sim.datum.grid, sim.snapshots, *f.phi, lambda);
    const auto spread = phase_spread(rep.left, last_quarter(c));
    r.criteria.push_back(spread ? below("phase Cauchy over last quarter", *spread, 1e-2)
                                : Criterion{"phase Cauchy over last quarter", false, "phase fit failed"});
    r.criteria.push_back(below("final weighted distance", rep.left.back().weighted_distance, 0.02));
    r.report = to_json(rep);
    r.report["c_star"] = f.phi->c;
    r.tables.push_back({"phases.csv", phase_table(rep.left)});
    return r;
}

inline ScenarioResult two_front(const RunConfig& c, const BirthFunction& g) {
    ScenarioResult r;
    const auto f = minimal_front(c, g);
    const double lambda = diagnostic_lambda(c, f);
    auto sim = simulate(c, g, f, lambda);
    auto rep = two_front_report(sim.datum.grid, sim.snapshots, *f.phi, lambda);
    if (rep.trivial_extinction) {
        r.criteria.push_back({"nontrivial solution", false, "u vanished"});
    } else {
        r.criteria.push_back(below("left half-line weighted distance", rep.left.back().weighted_distance, 0.02));
        r.criteria.push_back(below("right half-line weighted distance", rep.right.back().weighted_distance, 0.02));
        const auto est = spreading_speed_estimate(sim.levels, c.diagnostics.discard);
        rep.speeds = est;
        r.criteria.push_back(within("left level-set slope", est.c_left, -f.phi->c, 0.02));
        r.criteria.push_back(within("right level-set slope", est.c_right, f.phi->c, 0.02));
        double mn = INFINITY;
        const auto& grid = sim.datum.grid;
        for (std::size_t i = 0; i < grid.n; ++i)
            if (std::abs(grid[i]) <= 5.0) mn = std::min(mn, sim.snapshots.back().u[i]);
        r.criteria.push_back({"min u(T) on [-5, 5] > kappa - 1e-2", mn > g.kappa() - 1e-2, fmt(mn)});
    }
    r.report = to_json(rep);
    r.report["c_star"] = f.phi->c;
    r.tables.push_back({"phases_left.csv", phase_table(rep.left)});
    r.tables.push_back({"phases_right.csv", phase_table(rep.right)});
    r.tables.push_back({"level_sets.csv", level_table(sim.levels)});
    return r;
}

inline ScenarioResult spreading(const RunConfig& c, const BirthFunction& g) {
    ScenarioResult r;
    const auto f = minimal_front(c, g);
    auto sim = simulate(c, g, f, diagnostic_lambda(c, f));
    const auto est = spreading_speed_estimate(sim.levels, c.diagnostics.discard);
    const double target = f.kind.kind == FrontKind::Pushed ? f.speed.c_star : f.spec.c_sharp;
    if (parse_datum_kind(c.simulation.datum) == DatumKind::CompactBump) {
        r.criteria.push_back(within("left level-set slope", est.c_left, -target, 0.02));
        r.criteria.push_back(within("right level-set slope", est.c_right, target, 0.02));
    } else {
        // A single front: both crossings are the same leftward-moving level.
        r.criteria.push_back(within("level-set speed", std::abs(est.c_right), target, 0.02));
    }
    r.report = {{"c_star", f.speed.c_star},
                {"c_sharp", f.spec.c_sharp},
                {"kind", to_string(f.kind.kind)},
                {"c_left", est.c_left},
                {"c_right", est.c_right},
                {"stderr_left", est.stderr_left},
                {"stderr_right", est.stderr_right}};
    r.tables.push_back({"level_sets.csv", level_table(sim.levels)});
    return r;
}

// Shared by stability and envelope: perturbed minimal front with eps = q0+/2.
inline ScenarioResult perturbation(const RunConfig& base, const BirthFunction& g, bool stability, bool envelope) {
    ScenarioResult r;
    RunConfig c = base;
    const auto f = minimal_front(c, g);
    const double lambda = diagnostic_lambda(c, f);
    const auto k = lemma1_constants(g, *f.phi, f.phi->c, c.h, lambda, c.simulation.sigma);
    if (!(c.simulation.epsilon > 0.0)) c.simulation.epsilon = 0.5 * k.q0_plus;
    auto sim = simulate(c, g, f, lambda);
    auto rep = single_front_report(sim.datum.grid, sim.snapshots, *f.phi, lambda);
    if (stability) {
        const double d0 = rep.left.front().weighted_distance;
        double dmax = 0.0;
        for (const auto& rec : rep.left) dmax = std::max(dmax, rec.weighted_distance);
        r.criteria.push_back({"weighted distance stays below 3x initial", dmax < 3.0 * d0,
                              "max " + fmt(dmax) + ", initial " + fmt(d0)});
    }
    if (envelope) {
        const double q = c.simulation.epsilon;
        auto up = envelope_check(sim.datum, sim.snapshots, *f.phi, k, q, lambda, EnvelopeDirection::Upper,
                                 c.simulation.shift);
        auto lo = envelope_check(sim.datum, sim.snapshots, *f.phi, k, q, lambda, EnvelopeDirection::Lower,
                                 c.simulation.shift);
        r.criteria.push_back({"upper envelope violations", up.empty(), std::to_string(up.size())});
        r.criteria.push_back({"lower envelope violations", lo.empty(), std::to_string(lo.size())});
        rep.violations = up;
        rep.violations.insert(rep.violations.end(), lo.begin(), lo.end());
    }
    r.report = to_json(rep);
    r.report["constants"] = to_json(k);
    r.report["epsilon"] = c.simulation.epsilon;
    r.tables.push_back({"phases.csv", phase_table(rep.left)});
    return r;
}

inline ScenarioResult origin_approach(const RunConfig& c, const BirthFunction& g) {
    ScenarioResult r;
    const auto f = minimal_front(c, g);
    auto sim = simulate(c, g, f, diagnostic_lambda(c, f));
    // Stop the window before kappa - u reaches the round-off floor.
    double t_hi = c.diagnostics.origin_t_lo;
    for (const auto& p : sim.points)
        if (p.t <= c.diagnostics.origin_t_hi && g.kappa() - p.u > 1e-10) t_hi = std::max(t_hi, p.t);
    const auto fit = origin_approach_fit(sim.points, g.kappa(), c.diagnostics.origin_t_lo, t_hi);
    r.criteria.push_back({"rate nu > 0", fit.nu > 0.0, fmt(fit.nu)});
    r.criteria.push_back(below("log-linear residual", fit.residual, 0.1));
    r.report = {{"q", fit.q}, {"nu", fit.nu}, {"residual", fit.residual}, {"samples", fit.samples},
                {"t_lo", c.diagnostics.origin_t_lo}, {"t_hi", t_hi}};
    r.tables.push_back({"origin.csv", point_table(sim.points)});
    return r;
}

inline ScenarioResult run_scenario(const std::string& name, const RunConfig& c, const BirthFunction& g) {
    if (name == "global-front") return global_front(c, g);
    if (name == "two-front") return two_front(c, g);
    if (name == "spreading") return spreading(c, g);
    if (name == "stability") return perturbation(c, g, true, false);
    if (name == "envelope") return perturbation(c, g, false, true);
    if (name == "origin-approach") return origin_approach(c, g);
    throw InvalidArgument("unknown scenario '" + name + "'");
}

}  // namespace pushfront::cli
