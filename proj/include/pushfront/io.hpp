#pragma once

// Run configuration (TOML subset or JSON), CSV tables and JSON reports.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "pushfront/diagnostics.hpp"
#include "pushfront/errors.hpp"
#include "pushfront/profile.hpp"
#include "pushfront/spectral.hpp"

namespace pushfront {

using json = nlohmann::json;

struct RunConfig {
    struct Model {
        std::string preset = "hadeler_rothe";
        std::vector<double> coefficients;  // overrides the preset when nonempty
    } model;
    double h = 0.0;
    struct Spectral {
        std::vector<double> speeds;  // extra speeds for decay-rate reports
    } spectral;
    struct Profile {
        double half_width = 0.0;   // 0: automatic
        double right_width = 0.0;  // 0: automatic
        double dz = 0.05;
        double tol = 1e-8;
        double tol_c = 1e-4;
        double max_iterations = 400000;
        double c = 0.0;  // 0: minimal front
        std::vector<double> h_values{0.0, 0.05, 0.1, 0.2};
    } profile;
    struct Simulation {
        double x_min = -150.0;
        double x_max = 180.0;
        double dx = 0.1;
        double dt = 0.0;  // 0: largest admissible step
        double T = 120.0;
        std::string datum = "compact_bump";
        double mu = 0.0;  // front_like rate; 0: lambda2 at the minimal speed
        double B = 140.0;
        double sigma = 0.25;
        double center = 0.0;
        double width = 10.0;
        double height = -1.0;
        double shift = 0.0;
        double epsilon = 0.0;
        double seed = 12345;
    } simulation;
    struct Diagnostics {
        double lambda = 0.0;  // 0: midpoint of (lambda1, lambda2)
        double snapshot_cadence = 1.0;
        double level_cadence = 0.5;
        double point_cadence = 0.1;
        double point_x = 0.0;
        double level = 0.5;  // fraction of kappa
        double discard = 0.3;
        double origin_t_lo = 10.0;  // after the heaviside step has formed a front
        double origin_t_hi = 40.0;
    } diagnostics;
    std::string out_dir = "out";

    BirthSpec birth_spec() const {
        if (!model.coefficients.empty()) return model.coefficients;
        return model.preset;
    }
};

namespace detail {

template <class T>
void take(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

inline void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
    if (!j.is_object()) throw InvalidArgument("config section '" + where + "' must be a table");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys) known = known || it.key() == k;
        if (!known) throw InvalidArgument("unknown config key '" + where + (where.empty() ? "" : ".") + it.key() + "'");
    }
}

}  // namespace detail

inline json to_json(const RunConfig& c) {
    const auto& s = c.simulation;
    const auto& d = c.diagnostics;
    const auto& p = c.profile;
    return json{
        {"h", c.h},
        {"out_dir", c.out_dir},
        {"model", {{"preset", c.model.preset}, {"coefficients", c.model.coefficients}}},
        {"spectral", {{"speeds", c.spectral.speeds}}},
        {"profile",
         {{"half_width", p.half_width}, {"right_width", p.right_width}, {"dz", p.dz}, {"tol", p.tol},
          {"tol_c", p.tol_c}, {"max_iterations", p.max_iterations}, {"c", p.c}, {"h_values", p.h_values}}},
        {"simulation",
         {{"x_min", s.x_min}, {"x_max", s.x_max}, {"dx", s.dx}, {"dt", s.dt}, {"T", s.T}, {"datum", s.datum},
          {"mu", s.mu}, {"B", s.B}, {"sigma", s.sigma}, {"center", s.center}, {"width", s.width},
          {"height", s.height}, {"shift", s.shift}, {"epsilon", s.epsilon}, {"seed", s.seed}}},
        {"diagnostics",
         {{"lambda", d.lambda}, {"snapshot_cadence", d.snapshot_cadence}, {"level_cadence", d.level_cadence},
          {"point_cadence", d.point_cadence}, {"point_x", d.point_x}, {"level", d.level}, {"discard", d.discard},
          {"origin_t_lo", d.origin_t_lo}, {"origin_t_hi", d.origin_t_hi}}},
    };
}

/// Missing keys keep the values of `base`; unknown keys are an error.
inline RunConfig config_from_json(const json& j, const RunConfig& base = {}) {
    using detail::take;
    if (!j.is_object() || j.empty()) throw InvalidArgument("empty config");
    detail::reject_unknown(j, {"h", "out_dir", "model", "spectral", "profile", "simulation", "diagnostics"}, "");
    RunConfig c = base;
    try {
        take(j, "h", c.h);
        take(j, "out_dir", c.out_dir);
        if (j.contains("model")) {
            const auto& m = j["model"];
            detail::reject_unknown(m, {"preset", "coefficients"}, "model");
            take(m, "preset", c.model.preset);
            take(m, "coefficients", c.model.coefficients);
        }
        if (j.contains("spectral")) {
            detail::reject_unknown(j["spectral"], {"speeds"}, "spectral");
            take(j["spectral"], "speeds", c.spectral.speeds);
        }
        if (j.contains("profile")) {
            const auto& m = j["profile"];
            auto& p = c.profile;
            detail::reject_unknown(m, {"half_width", "right_width", "dz", "tol", "tol_c", "max_iterations", "c", "h_values"},
                                   "profile");
            take(m, "half_width", p.half_width);
            take(m, "right_width", p.right_width);
            take(m, "dz", p.dz);
            take(m, "tol", p.tol);
            take(m, "tol_c", p.tol_c);
            take(m, "max_iterations", p.max_iterations);
            take(m, "c", p.c);
            take(m, "h_values", p.h_values);
        }
        if (j.contains("simulation")) {
            const auto& m = j["simulation"];
            auto& s = c.simulation;
            detail::reject_unknown(m, {"x_min", "x_max", "dx", "dt", "T", "datum", "mu", "B", "sigma", "center", "width",
                                       "height", "shift", "epsilon", "seed"},
                                   "simulation");
            take(m, "x_min", s.x_min);
            take(m, "x_max", s.x_max);
            take(m, "dx", s.dx);
            take(m, "dt", s.dt);
            take(m, "T", s.T);
            take(m, "datum", s.datum);
            take(m, "mu", s.mu);
            take(m, "B", s.B);
            take(m, "sigma", s.sigma);
            take(m, "center", s.center);
            take(m, "width", s.width);
            take(m, "height", s.height);
            take(m, "shift", s.shift);
            take(m, "epsilon", s.epsilon);
            take(m, "seed", s.seed);
        }
        if (j.contains("diagnostics")) {
            const auto& m = j["diagnostics"];
            auto& d = c.diagnostics;
            detail::reject_unknown(m, {"lambda", "snapshot_cadence", "level_cadence", "point_cadence", "point_x", "level",
                                       "discard", "origin_t_lo", "origin_t_hi"},
                                   "diagnostics");
            take(m, "lambda", d.lambda);
            take(m, "snapshot_cadence", d.snapshot_cadence);
            take(m, "level_cadence", d.level_cadence);
            take(m, "point_cadence", d.point_cadence);
            take(m, "point_x", d.point_x);
            take(m, "level", d.level);
            take(m, "discard", d.discard);
            take(m, "origin_t_lo", d.origin_t_lo);
            take(m, "origin_t_hi", d.origin_t_hi);
        }
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config type error: ") + e.what());
    }
    return c;
}

/// Checks that need no solve. Spectral-dependent checks (lambda range) happen
/// where the spectral data is computed.
inline void validate_config(const RunConfig& c) {
    if (!(c.h >= 0.0) || !std::isfinite(c.h)) throw InvalidArgument("h must be nonnegative");
    const auto& p = c.profile;
    if (!(p.dz > 0.0)) throw InvalidArgument("profile.dz must be positive");
    if (!(p.tol > 0.0)) throw InvalidArgument("profile.tol must be positive");
    if (!(p.tol_c > 0.0)) throw InvalidArgument("profile.tol_c must be positive");
    if (!(p.max_iterations >= 1.0)) throw InvalidArgument("profile.max_iterations must be at least 1");
    if (p.half_width < 0.0 || p.right_width < 0.0) throw InvalidArgument("profile widths must be nonnegative");
    if (!(p.c >= 0.0)) throw InvalidArgument("profile.c must be nonnegative");
    for (double h : p.h_values)
        if (!(h >= 0.0)) throw InvalidArgument("h must be nonnegative");
    const auto& s = c.simulation;
    if (!(s.x_max > s.x_min)) throw InvalidArgument("simulation.x_max must exceed x_min");
    if (!(s.dx > 0.0)) throw InvalidArgument("simulation.dx must be positive");
    if (!(s.dt >= 0.0)) throw InvalidArgument("simulation.dt must be nonnegative");
    if (!(s.T > 0.0)) throw InvalidArgument("simulation.T must be positive");
    parse_datum_kind(s.datum);
    if (s.dt > 0.0 && c.h > 0.0) lag_steps(c.h, s.dt);
    const auto& d = c.diagnostics;
    if (!(d.lambda >= 0.0)) throw InvalidArgument("diagnostics.lambda must be nonnegative");
    if (!(d.level > 0.0 && d.level < 1.0)) throw InvalidArgument("diagnostics.level must lie in (0, 1)");
    if (!(d.discard >= 0.0 && d.discard < 1.0)) throw InvalidArgument("diagnostics.discard must lie in [0, 1)");
    for (double cad : {d.snapshot_cadence, d.level_cadence, d.point_cadence})
        if (!(cad > 0.0)) throw InvalidArgument("observer cadences must be positive");
}

/// L_x >= c_# T + 30 with L_x the smaller half-extent of the domain.
inline void validate_domain(const RunConfig& c, double c_sharp) {
    const double lx = std::min(-c.simulation.x_min, c.simulation.x_max);
    if (lx < c_sharp * c.simulation.T + 30.0 - 1e-9)
        throw InvalidArgument("domain half-extent " + std::to_string(lx) + " below c_# T + 30 = " +
                              std::to_string(c_sharp * c.simulation.T + 30.0));
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

inline json toml_value(const std::string& raw, std::size_t lineno) {
    const std::string v = trim(raw);
    auto fail = [&] { return InvalidArgument("config line " + std::to_string(lineno) + ": cannot parse value '" + v + "'"); };
    if (v.empty()) throw fail();
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"') throw fail();
        return v.substr(1, v.size() - 2);
    }
    if (v == "true") return true;
    if (v == "false") return false;
    if (v.front() == '[') {
        if (v.back() != ']') throw fail();
        json arr = json::array();
        std::stringstream ss(v.substr(1, v.size() - 2));
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (trim(item).empty()) continue;
            arr.push_back(toml_value(item, lineno));
        }
        return arr;
    }
    std::size_t used = 0;
    double x;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw fail();
    }
    if (used != v.size()) throw fail();
    return x;
}

}  // namespace detail

/// The TOML subset used by the configs: [section] headers, key = value with
/// numbers, "strings", booleans and one-line arrays, # comments.
inline json parse_flat_toml(const std::string& text) {
    json root = json::object();
    json* table = &root;
    std::stringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::trim(detail::strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw InvalidArgument("config line " + std::to_string(lineno) + ": bad table header");
            const std::string name = detail::trim(line.substr(1, line.size() - 2));
            if (name.empty()) throw InvalidArgument("config line " + std::to_string(lineno) + ": empty table name");
            if (root.contains(name)) throw InvalidArgument("duplicate table [" + name + "]");
            root[name] = json::object();
            table = &root[name];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        if (key.empty()) throw InvalidArgument("config line " + std::to_string(lineno) + ": empty key");
        if (table->contains(key)) throw InvalidArgument("duplicate key '" + key + "'");
        (*table)[key] = detail::toml_value(line.substr(eq + 1), lineno);
    }
    return root;
}

/// Shortest of %.15g..%.17g that reads back exactly.
inline std::string format_number(double v) {
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    std::string s = buf;
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

inline std::string to_toml(const RunConfig& c) {
    const json j = to_json(c);
    std::ostringstream out;
    auto value = [](const json& v) -> std::string {
        if (v.is_string()) return "\"" + v.get<std::string>() + "\"";
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_array()) {
            std::string s = "[";
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i].get<double>());
            return s + "]";
        }
        return format_number(v.get<double>());
    };
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!it->is_object()) out << it.key() << " = " << value(*it) << "\n";
    for (const char* section : {"model", "spectral", "profile", "simulation", "diagnostics"}) {
        out << "\n[" << section << "]\n";
        for (auto it = j[section].begin(); it != j[section].end(); ++it) out << it.key() << " = " << value(*it) << "\n";
    }
    return out.str();
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// JSON when the first non-blank character is '{', the TOML subset otherwise.
inline RunConfig parse_config(const std::string& text, const RunConfig& base = {}) {
    const std::string t = detail::trim(text);
    if (t.empty()) throw InvalidArgument("empty config");
    if (t.front() == '{') {
        json j;
        try {
            j = json::parse(t);
        } catch (const json::parse_error& e) {
            throw InvalidArgument(std::string("config JSON: ") + e.what());
        }
        return config_from_json(j, base);
    }
    return config_from_json(parse_flat_toml(t), base);
}

inline RunConfig load_config(const std::string& path, const RunConfig& base = {}) {
    return parse_config(read_file(path), base);
}

/// Header plus rows of numbers; NaN marks a missing value.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline std::string to_csv(const Table& t) {
    std::string s;
    for (std::size_t i = 0; i < t.header.size(); ++i) s += (i ? "," : "") + t.header[i];
    s += "\n";
    for (const auto& r : t.rows) {
        if (r.size() != t.header.size()) throw InvalidArgument("CSV row width differs from the header");
        for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + (std::isnan(r[i]) ? std::string("nan") : format_number(r[i]));
        s += "\n";
    }
    return s;
}

inline Table parse_csv(const std::string& text) {
    Table t;
    std::stringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("CSV without header");
    {
        std::stringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) t.header.push_back(detail::trim(cell));
    }
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        std::vector<double> row;
        std::stringstream rs(line);
        std::string cell;
        while (std::getline(rs, cell, ',')) {
            cell = detail::trim(cell);
            if (cell == "nan") { row.push_back(std::nan("")); continue; }
            std::size_t used = 0;
            double v;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw InvalidArgument("CSV cell '" + cell + "' is not a number");
            }
            if (used != cell.size()) throw InvalidArgument("CSV cell '" + cell + "' is not a number");
            row.push_back(v);
        }
        if (row.size() != t.header.size()) throw InvalidArgument("CSV row width differs from the header");
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    f << text;
}

inline double value_or_nan(const std::optional<double>& v) { return v ? *v : std::nan(""); }

inline Table profile_table(const WaveProfile& p) {
    Table t{{"z", "phi"}, {}};
    for (std::size_t i = 0; i < p.values.size(); ++i) t.rows.push_back({p.grid[i], p.values[i]});
    return t;
}

inline Table phase_table(const std::vector<PhaseRecord>& recs) {
    Table t{{"t", "phase", "weighted_distance", "compact_distance"}, {}};
    for (const auto& r : recs) t.rows.push_back({r.t, value_or_nan(r.phase), r.weighted_distance, r.compact_distance});
    return t;
}

inline Table level_table(const std::vector<LevelRecord>& recs) {
    Table t{{"t", "left", "right"}, {}};
    for (const auto& r : recs) t.rows.push_back({r.t, value_or_nan(r.left), value_or_nan(r.right)});
    return t;
}

inline Table point_table(const std::vector<PointRecord>& recs) {
    Table t{{"t", "u"}, {}};
    for (const auto& r : recs) t.rows.push_back({r.t, r.u});
    return t;
}

inline json to_json(const SpectralSummary& s) {
    return json{{"h", s.h}, {"gp0", s.gp0}, {"gpk", s.gpk}, {"c_sharp", s.c_sharp}, {"lambda_double", s.lambda_double}};
}

inline json to_json(const WaveProfile& p) {
    return json{{"c", p.c},
                {"h", p.h},
                {"kappa", p.kappa},
                {"z_min", p.grid.x_min},
                {"dz", p.grid.dx},
                {"n", p.grid.n},
                {"normalized", p.normalized},
                {"residual", p.residual},
                {"iterations", p.iterations},
                {"tail_left", {{"rate", p.tail_left.rate}, {"amplitude", p.tail_left.amplitude}, {"residual", p.tail_left.residual}}},
                {"tail_right",
                 {{"rate", p.tail_right.rate}, {"amplitude", p.tail_right.amplitude}, {"residual", p.tail_right.residual}}}};
}

inline json to_json(const EnvelopeConstants& k) {
    return json{{"delta", k.delta},     {"gamma", k.gamma},     {"alpha", k.alpha},   {"beta", k.beta},
                {"q0_plus", k.q0_plus}, {"q0_minus", k.q0_minus}, {"C_shift", k.C_shift}, {"z0", k.z0},
                {"z1", k.z1},           {"z2", k.z2},           {"gamma1", k.gamma1}, {"delta1", k.delta1},
                {"c1a_margin", k.c1a_margin}};
}

inline json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

/// {phases, weighted_distances, level_sets, envelope: {violations}, fits}
inline json to_json(const ConvergenceReport& r) {
    json phases = json::array(), dists = json::array();
    for (std::size_t i = 0; i < r.left.size(); ++i) {
        json p{{"t", r.left[i].t}, {"left", optional_json(r.left[i].phase)}};
        json d{{"t", r.left[i].t}, {"left", r.left[i].weighted_distance}, {"compact", r.left[i].compact_distance}};
        if (i < r.right.size()) {
            p["right"] = optional_json(r.right[i].phase);
            d["right"] = r.right[i].weighted_distance;
        }
        phases.push_back(p);
        dists.push_back(d);
    }
    json levels = json::array();
    for (const auto& l : r.level_sets)
        levels.push_back({{"t", l.t}, {"left", optional_json(l.left)}, {"right", optional_json(l.right)}});
    json viol = json::array();
    for (const auto& v : r.violations) viol.push_back({{"t", v.t}, {"z", v.z}, {"margin", v.margin}});
    json fits = json::object();
    if (r.speeds)
        fits["spreading"] = {{"c_left", r.speeds->c_left},
                             {"c_right", r.speeds->c_right},
                             {"stderr_left", r.speeds->stderr_left},
                             {"stderr_right", r.speeds->stderr_right},
                             {"samples", r.speeds->samples}};
    if (r.origin)
        fits["origin"] = {{"q", r.origin->q}, {"nu", r.origin->nu}, {"residual", r.origin->residual}, {"samples", r.origin->samples}};
    return json{{"lambda", r.lambda},
                {"c", r.c},
                {"trivial_extinction", r.trivial_extinction},
                {"phases", phases},
                {"weighted_distances", dists},
                {"level_sets", {{"records", levels}}},
                {"envelope", {{"violations", viol}}},
                {"fits", fits},
                {"notes", r.notes}};
}

}  // namespace pushfront
