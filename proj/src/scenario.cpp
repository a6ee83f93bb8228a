#include "wavephase/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "wavephase/charroots.hpp"
#include "wavephase/domain.hpp"

namespace wavephase {

using nlohmann::json;

namespace {

double to_number(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("alpha0: '" + text + "' is not a number in " + what);
    }
    if (used != text.size()) throw ConfigError("alpha0: '" + text + "' is not a number in " + what);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

void check_keys(const json& j, std::initializer_list<const char*> known, const std::string& block) {
    if (!j.is_object()) throw ConfigError(block + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
            throw ConfigError(block + ": unknown key '" + key + "'");
    }
}

double number(const json& j, const char* key, const std::string& block) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(block + "." + key + ": expected a number");
    return v.get<double>();
}

template <class T>
void read_number(const json& j, const char* key, const std::string& block, T& out) {
    if (j.contains(key)) out = number(j, key, block);
}

void sort_points(Alpha0Descriptor& d) {
    if (d.points.size() < 2) throw ConfigError("alpha0 table: need at least two points");
    std::sort(d.points.begin(), d.points.end());
    for (std::size_t i = 1; i < d.points.size(); ++i)
        if (d.points[i].first == d.points[i - 1].first) throw ConfigError("alpha0 table: repeated abscissa");
}

}  // namespace

std::function<double(double)> Alpha0Descriptor::function(double h) const {
    switch (kind) {
        case Kind::constant:
            return [v = value](double) { return v; };
        case Kind::linear:
            return [a = slope, b = value](double s) { return a * s + b; };
        case Kind::sinusoidal:
            return [amp = amplitude, h](double s) { return amp * std::sin(std::numbers::pi * s / h); };
        case Kind::table:
            return [pts = points](double s) {
                if (s <= pts.front().first) return pts.front().second;
                if (s >= pts.back().first) return pts.back().second;
                auto it = std::upper_bound(pts.begin(), pts.end(), std::make_pair(s, -HUGE_VAL));
                const auto& [s1, v1] = *it;
                const auto& [s0, v0] = *(it - 1);
                return v0 + (v1 - v0) * (s - s0) / (s1 - s0);
            };
    }
    throw std::logic_error("Alpha0Descriptor: bad kind");
}

std::string Alpha0Descriptor::str() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case Kind::constant: os << "constant:" << value; break;
        case Kind::linear: os << "linear:" << slope << ":" << value; break;
        case Kind::sinusoidal: os << "sin:" << amplitude; break;
        case Kind::table:
            os << "table:";
            for (std::size_t i = 0; i < points.size(); ++i)
                os << (i ? "," : "") << points[i].first << "=" << points[i].second;
            break;
    }
    return os.str();
}

Alpha0Descriptor parse_alpha0(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.empty()) throw ConfigError("alpha0: empty descriptor");
    Alpha0Descriptor d;
    const std::string& k = parts[0];
    if (k == "constant" && parts.size() == 2) {
        d.kind = Alpha0Descriptor::Kind::constant;
        d.value = to_number(parts[1], text);
    } else if (k == "linear" && parts.size() == 3) {
        d.kind = Alpha0Descriptor::Kind::linear;
        d.slope = to_number(parts[1], text);
        d.value = to_number(parts[2], text);
    } else if ((k == "sin" || k == "sinusoidal") && parts.size() == 2) {
        d.kind = Alpha0Descriptor::Kind::sinusoidal;
        d.amplitude = to_number(parts[1], text);
    } else if (k == "table" && parts.size() == 2) {
        d.kind = Alpha0Descriptor::Kind::table;
        for (const auto& item : split(parts[1], ',')) {
            const auto sv = split(item, '=');
            if (sv.size() != 2) throw ConfigError("alpha0: bad table entry '" + item + "'");
            d.points.emplace_back(to_number(sv[0], text), to_number(sv[1], text));
        }
        sort_points(d);
    } else {
        throw ConfigError("alpha0: cannot parse '" + text + "' (use constant:V, linear:A:B, sin:AMP or table:S=V,...)");
    }
    return d;
}

Alpha0Descriptor parse_alpha0(const json& j) {
    if (j.is_string()) return parse_alpha0(j.get<std::string>());
    check_keys(j, {"kind", "value", "slope", "intercept", "amplitude", "points"}, "phase.alpha0");
    if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("phase.alpha0: missing 'kind'");
    const auto kind = j["kind"].get<std::string>();
    Alpha0Descriptor d;
    if (kind == "constant") {
        d.kind = Alpha0Descriptor::Kind::constant;
        d.value = number(j, "value", "phase.alpha0");
    } else if (kind == "linear") {
        d.kind = Alpha0Descriptor::Kind::linear;
        d.slope = number(j, "slope", "phase.alpha0");
        d.value = j.contains("intercept") ? number(j, "intercept", "phase.alpha0") : 0.0;
    } else if (kind == "sinusoidal") {
        d.kind = Alpha0Descriptor::Kind::sinusoidal;
        d.amplitude = number(j, "amplitude", "phase.alpha0");
    } else if (kind == "table") {
        d.kind = Alpha0Descriptor::Kind::table;
        if (!j.contains("points") || !j["points"].is_array()) throw ConfigError("phase.alpha0: table needs 'points'");
        for (const auto& p : j["points"]) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                throw ConfigError("phase.alpha0: points must be [s, value] pairs");
            d.points.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
        sort_points(d);
    } else {
        throw ConfigError("phase.alpha0: unknown kind '" + kind + "'");
    }
    return d;
}

ScenarioConfig parse_scenario(const json& j) {
    check_keys(j, {"model", "wave", "phase", "grid", "run", "verify"}, "scenario");
    ScenarioConfig cfg;
    try {
        if (j.contains("model")) {
            const auto& m = j["model"];
            check_keys(m, {"name", "params"}, "model");
            if (m.contains("name")) {
                if (!m["name"].is_string()) throw ConfigError("model.name: expected a string");
                cfg.model.name = m["name"].get<std::string>();
            }
            if (m.contains("params")) {
                if (!m["params"].is_object()) throw ConfigError("model.params: expected an object");
                for (const auto& [k, v] : m["params"].items()) {
                    if (!v.is_number()) throw ConfigError("model.params." + k + ": expected a number");
                    cfg.model.params[k] = v.get<double>();
                }
            }
        }
        if (j.contains("wave")) {
            const auto& w = j["wave"];
            check_keys(w, {"c", "c_star_plus", "c_sharp_plus"}, "wave");
            if (w.contains("c")) cfg.wave.c = number(w, "c", "wave");
            if (w.contains("c_star_plus")) cfg.wave.c_star_plus = number(w, "c_star_plus", "wave");
            if (w.contains("c_sharp_plus")) cfg.wave.c_sharp_plus = number(w, "c_sharp_plus", "wave");
            const int set = cfg.wave.c.has_value() + cfg.wave.c_star_plus.has_value() + cfg.wave.c_sharp_plus.has_value();
            if (set > 1) throw ConfigError("wave: give only one of c, c_star_plus, c_sharp_plus");
        }
        if (j.contains("phase")) {
            const auto& p = j["phase"];
            check_keys(p, {"alpha0", "form"}, "phase");
            if (p.contains("alpha0")) cfg.phase.alpha0 = parse_alpha0(p["alpha0"]);
            if (p.contains("form")) {
                const auto f = p["form"].is_string() ? p["form"].get<std::string>() : std::string();
                if (f == "amplitude") cfg.phase.amplitude_form = true;
                else if (f == "phase") cfg.phase.amplitude_form = false;
                else throw ConfigError("phase.form: expected \"phase\" or \"amplitude\"");
            }
        }
        if (j.contains("grid")) {
            const auto& g = j["grid"];
            check_keys(g, {"x_min", "x_max", "dx", "cfl", "dxi"}, "grid");
            read_number(g, "x_min", "grid", cfg.grid.x_min);
            read_number(g, "x_max", "grid", cfg.grid.x_max);
            read_number(g, "dx", "grid", cfg.grid.dx);
            read_number(g, "cfl", "grid", cfg.grid.cfl);
            read_number(g, "dxi", "grid", cfg.grid.dxi);
        }
        if (j.contains("run")) {
            const auto& r = j["run"];
            check_keys(r, {"T", "output_dir", "save_every"}, "run");
            read_number(r, "T", "run", cfg.run.T);
            read_number(r, "save_every", "run", cfg.run.save_every);
            if (r.contains("output_dir")) {
                if (!r["output_dir"].is_string()) throw ConfigError("run.output_dir: expected a string");
                cfg.run.output_dir = r["output_dir"].get<std::string>();
            }
        }
        if (j.contains("verify")) {
            const auto& v = j["verify"];
            check_keys(v, {"lambda_weight", "x_cut", "a_star_tol", "alpha_tol", "gamma_max", "band", "floor_dx"},
                       "verify");
            if (v.contains("lambda_weight")) cfg.verify.lambda_weight = number(v, "lambda_weight", "verify");
            read_number(v, "x_cut", "verify", cfg.verify.x_cut);
            read_number(v, "a_star_tol", "verify", cfg.verify.a_star_tol);
            read_number(v, "alpha_tol", "verify", cfg.verify.alpha_tol);
            read_number(v, "gamma_max", "verify", cfg.verify.gamma_max);
            read_number(v, "band", "verify", cfg.verify.band);
            if (v.contains("floor_dx")) cfg.verify.floor_dx = number(v, "floor_dx", "verify");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    if (!(cfg.grid.dx > 0.0) || !(cfg.grid.dxi > 0.0) || !(cfg.grid.x_max > cfg.grid.x_min))
        throw ConfigError("grid: need dx > 0, dxi > 0 and x_max > x_min");
    if (!(cfg.run.T > 0.0) || !(cfg.run.save_every > 0.0)) throw ConfigError("run: need T > 0 and save_every > 0");
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    return parse_scenario(j);
}

json to_json(const ScenarioConfig& cfg) {
    json j;
    j["model"]["name"] = cfg.model.name;
    j["model"]["params"] = json::object();
    for (const auto& [k, v] : cfg.model.params) j["model"]["params"][k] = v;
    j["wave"] = json::object();
    if (cfg.wave.c) j["wave"]["c"] = *cfg.wave.c;
    if (cfg.wave.c_star_plus) j["wave"]["c_star_plus"] = *cfg.wave.c_star_plus;
    if (cfg.wave.c_sharp_plus) j["wave"]["c_sharp_plus"] = *cfg.wave.c_sharp_plus;
    j["phase"]["alpha0"] = cfg.phase.alpha0.str();
    j["phase"]["form"] = cfg.phase.amplitude_form ? "amplitude" : "phase";
    j["grid"] = {{"x_min", cfg.grid.x_min}, {"x_max", cfg.grid.x_max}, {"dx", cfg.grid.dx},
                 {"cfl", cfg.grid.cfl},     {"dxi", cfg.grid.dxi}};
    j["run"] = {{"T", cfg.run.T}, {"output_dir", cfg.run.output_dir}, {"save_every", cfg.run.save_every}};
    j["verify"] = {{"x_cut", cfg.verify.x_cut},         {"a_star_tol", cfg.verify.a_star_tol},
                   {"alpha_tol", cfg.verify.alpha_tol}, {"gamma_max", cfg.verify.gamma_max},
                   {"band", cfg.verify.band}};
    if (cfg.verify.lambda_weight) j["verify"]["lambda_weight"] = *cfg.verify.lambda_weight;
    if (cfg.verify.floor_dx) j["verify"]["floor_dx"] = *cfg.verify.floor_dx;
    return j;
}

double resolve_speed(const ScenarioConfig& cfg) {
    if (cfg.wave.c) return *cfg.wave.c;
    ParamMap params = cfg.model.params;
    params.erase("c");
    const ModelSpec base = make_model(cfg.model.name, params);
    if (cfg.wave.c_sharp_plus) return c_sharp(base.h) + *cfg.wave.c_sharp_plus;
    const double offset = cfg.wave.c_star_plus.value_or(0.5);
    return minimal_speed(base) + offset;
}

ModelSpec resolve_model(const ScenarioConfig& cfg, double c) {
    ParamMap params = cfg.model.params;
    if (cfg.model.name == "kpp_fisher") params["c"] = c;
    return make_model(cfg.model.name, params);
}

}  // namespace wavephase
