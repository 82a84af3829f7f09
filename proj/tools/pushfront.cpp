// pushfront: spectra, profiles, speed sweeps, simulations and verification
// scenarios for u_t = u_xx - u + g(u(t - h, x)).
//
// Exit codes: 0 success, 1 a verification criterion failed or a solver gave
// up, 2 invalid configuration or arguments.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "pushfront/io.hpp"
#include "pushfront/pushfront.hpp"
#include "scenarios.hpp"

namespace fs = std::filesystem;
using namespace pushfront;

namespace {

struct Common {
    std::optional<std::string> preset;
    std::optional<double> h;
    std::optional<std::string> config;
    std::optional<std::string> out_dir;
    bool dump_defaults = false;
};

void add_common(CLI::App* cmd, Common& o) {
    cmd->add_option("--preset", o.preset, "birth function preset (hadeler_rothe, kpp)");
    cmd->add_option("--h", o.h, "delay h >= 0");
    cmd->add_option("--config", o.config, "TOML or JSON run configuration");
    cmd->add_option("--out-dir", o.out_dir, "directory for CSV/JSON outputs");
    cmd->add_flag("--dump-defaults", o.dump_defaults, "print the effective configuration and exit");
}

RunConfig resolve(const Common& o, RunConfig base) {
    if (o.preset) base.model.preset = *o.preset;
    RunConfig c = o.config ? load_config(*o.config, base) : base;
    if (o.preset) {
        c.model.preset = *o.preset;
        c.model.coefficients.clear();
    }
    if (o.h) c.h = *o.h;
    if (o.out_dir) c.out_dir = *o.out_dir;
    validate_config(c);
    return c;
}

void write_outputs(const RunConfig& c, const std::string& stem, const json& report,
                   const std::vector<std::pair<std::string, Table>>& tables) {
    fs::create_directories(c.out_dir);
    write_text((fs::path(c.out_dir) / (stem + ".json")).string(), report.dump(2) + "\n");
    for (const auto& [name, table] : tables) write_text((fs::path(c.out_dir) / name).string(), to_csv(table));
}

int cmd_spectrum(const RunConfig& c) {
    const auto g = make_birth_function(c.birth_spec());
    const auto s = minimal_linear_speed(g, c.h);
    json rep = to_json(s);
    rep["kappa"] = g.kappa();
    rep["rates"] = json::array();
    for (double speed : c.spectral.speeds) {
        json row{{"c", speed}};
        if (speed > s.c_sharp) {
            const auto r = s.decay_rates(speed);
            row["lambda1"] = r.lambda1;
            row["lambda2"] = r.lambda2;
        }
        row["lambda3"] = s.lambda3(speed);
        rep["rates"].push_back(row);
    }
    write_outputs(c, "spectrum", rep, {});
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_profile(const RunConfig& c) {
    const auto g = make_birth_function(c.birth_spec());
    const auto spec = minimal_linear_speed(g, c.h);
    const auto opt = cli::profile_options(c);
    json rep;
    std::optional<WaveProfile> phi;
    if (c.profile.c > 0.0) {
        auto r = solve_profile(c.profile.c, c.h, g, opt);
        if (auto* nf = std::get_if<NoFront>(&r)) {
            rep = {{"c", c.profile.c},
                   {"front", false},
                   {"collapse", nf->collapse == NoFront::Collapse::ToZero ? "to_zero" : "to_kappa"},
                   {"drift_per_iteration", nf->drift_per_iteration},
                   {"iterations", nf->iterations}};
        } else {
            phi = std::get<WaveProfile>(std::move(r));
            rep = to_json(*phi);
            rep["front"] = true;
        }
    } else {
        const auto ms = minimal_speed(c.h, g, c.profile.tol_c, opt);
        const auto fc = classify_front(ms, spec, c.profile.tol_c);
        phi = ms.front;
        rep = to_json(*phi);
        rep["front"] = true;
        rep["c_star"] = ms.c_star;
        rep["c_lo"] = ms.c_lo;
        rep["c_hi"] = ms.c_hi;
        rep["c_sharp"] = spec.c_sharp;
        rep["kind"] = to_string(fc.kind);
        rep["fitted_rate"] = fc.fitted_rate;
        rep["matched_lambda"] = fc.matched_lambda;
    }
    std::vector<std::pair<std::string, Table>> tables;
    if (phi) tables.push_back({"profile.csv", profile_table(*phi)});
    write_outputs(c, "profile", rep, tables);
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const RunConfig& c) {
    const auto g = make_birth_function(c.birth_spec());
    const auto rows = c_star_sweep(c.profile.h_values, g, c.profile.tol_c, cli::profile_options(c));
    Table t{{"h", "c_sharp", "c_star", "pushed", "fitted_rate"}, {}};
    json rep = json::array();
    for (const auto& r : rows) {
        const double pushed = r.kind ? (*r.kind == FrontKind::Pushed ? 1.0 : 0.0) : std::nan("");
        t.rows.push_back({r.h, r.c_sharp, value_or_nan(r.c_star), pushed, r.fitted_rate});
        json row{{"h", r.h}, {"c_sharp", r.c_sharp}, {"c_star", optional_json(r.c_star)}, {"fitted_rate", r.fitted_rate}};
        row["kind"] = r.kind ? json(to_string(*r.kind)) : json(nullptr);
        if (!r.error.empty()) row["error"] = r.error;
        rep.push_back(row);
        std::printf("h=%-6g c_sharp=%.6f c_star=%s kind=%s%s\n", r.h, r.c_sharp,
                    r.c_star ? cli::fmt(*r.c_star).c_str() : "-", r.kind ? to_string(*r.kind) : "-",
                    r.error.empty() ? "" : ("  error: " + r.error).c_str());
    }
    write_outputs(c, "sweep", json{{"rows", rep}}, {{"sweep.csv", t}});
    return 0;
}

int cmd_simulate(const RunConfig& c) {
    const auto g = make_birth_function(c.birth_spec());
    const auto f = cli::minimal_front(c, g);
    const double lambda = cli::diagnostic_lambda(c, f);
    const auto sim = cli::simulate(c, g, f, lambda);
    const auto& grid = sim.datum.grid;
    const bool two = sim.datum.kind == DatumKind::CompactBump;
    auto rep = two ? two_front_report(grid, sim.snapshots, *f.phi, lambda)
                   : single_front_report(grid, sim.snapshots, *f.phi, lambda);
    rep.level_sets = sim.levels;
    try {
        rep.speeds = spreading_speed_estimate(sim.levels, c.diagnostics.discard);
    } catch (const InvalidArgument& e) {
        rep.notes.push_back(std::string("spreading speed: ") + e.what());
    }
    std::vector<std::pair<std::string, Table>> tables;
    Table final{{"x", "u"}, {}};
    for (std::size_t i = 0; i < grid.n; ++i) final.rows.push_back({grid[i], sim.snapshots.back().u[i]});
    tables.push_back({"final.csv", final});
    tables.push_back({"level_sets.csv", level_table(sim.levels)});
    tables.push_back({"point.csv", point_table(sim.points)});
    tables.push_back({"phases_left.csv", phase_table(rep.left)});
    if (two) tables.push_back({"phases_right.csv", phase_table(rep.right)});
    json out = to_json(rep);
    out["c_star"] = f.speed.c_star;
    write_outputs(c, "simulation", out, tables);
    std::printf("T=%g dt=%g  final phase %s  weighted distance %s\n", c.simulation.T, sim.datum.dt,
                rep.left.back().phase ? cli::fmt(*rep.left.back().phase).c_str() : "-",
                cli::fmt(rep.left.back().weighted_distance).c_str());
    if (rep.speeds) std::printf("level-set slopes %.6f %.6f\n", rep.speeds->c_left, rep.speeds->c_right);
    return 0;
}

int cmd_verify(const std::string& scenario, const RunConfig& c) {
    const auto g = make_birth_function(c.birth_spec());
    const auto res = cli::run_scenario(scenario, c, g);
    write_outputs(c, scenario, res.report, res.tables);
    for (const auto& k : res.criteria)
        std::printf("%s %s: %s: %s\n", k.pass ? "PASS" : "FAIL", scenario.c_str(), k.name.c_str(), k.detail.c_str());
    return res.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pushed and pulled fronts of u_t = u_xx - u + g(u(t - h, x))"};
    app.set_help_flag("--help", "print this help");  // -h would clash with --h
    app.require_subcommand(0, 1);
    bool dump = false;
    app.add_flag("--dump-defaults", dump, "print the default configuration (TOML) and exit");

    Common o_spec, o_prof, o_sweep, o_sim, o_ver;
    auto* spec = app.add_subcommand("spectrum", "c_#, double root and decay rates");
    add_common(spec, o_spec);
    auto* prof = app.add_subcommand("profile", "minimal front (or the front at profile.c) with classification");
    add_common(prof, o_prof);
    auto* sweep = app.add_subcommand("speed-sweep", "c_* and front kind over profile.h_values");
    add_common(sweep, o_sweep);
    auto* sim = app.add_subcommand("simulate", "Cauchy problem with level-set and phase diagnostics");
    add_common(sim, o_sim);
    auto* ver = app.add_subcommand("verify", "run a verification scenario and print PASS/FAIL per criterion");
    add_common(ver, o_ver);
    std::string scenario;
    ver->add_option("scenario", scenario, "stability | global-front | two-front | spreading | envelope | origin-approach")
        ->required()
        ->check(CLI::IsMember(cli::scenario_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (dump) {
            std::cout << to_toml(RunConfig{});
            return 0;
        }
        auto handle = [&](const Common& o, const RunConfig& base, auto&& body) -> int {
            if (o.dump_defaults) {
                RunConfig c = base;
                if (o.preset) c.model.preset = *o.preset;
                std::cout << to_toml(c);
                return 0;
            }
            return body(resolve(o, base));
        };
        if (*spec) return handle(o_spec, RunConfig{}, cmd_spectrum);
        if (*prof) return handle(o_prof, RunConfig{}, cmd_profile);
        if (*sweep) return handle(o_sweep, RunConfig{}, cmd_sweep);
        if (*sim) return handle(o_sim, RunConfig{}, cmd_simulate);
        if (*ver) {
            const auto base = cli::scenario_defaults(scenario, o_ver.preset.value_or("hadeler_rothe"));
            return handle(o_ver, base, [&](const RunConfig& c) { return cmd_verify(scenario, c); });
        }
        std::cout << app.help();
        return 0;
    } catch (const InvalidArgument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
