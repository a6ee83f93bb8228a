#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wavephase/core/model.hpp"

namespace wavephase {

/// Malformed or unknown configuration input.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Initial phase (or amplitude) function on [-h, 0].
///
/// String shorthands:
///   constant:V       V
///   linear:A:B       A s + B
///   sin:AMP          AMP sin(pi s / h)
///   table:S=V,...    piecewise linear through the points
struct Alpha0Descriptor {
    enum class Kind { constant, linear, sinusoidal, table };
    Kind kind = Kind::constant;
    double value = 0.0;
    double slope = 0.0;
    double amplitude = 0.0;
    std::vector<std::pair<double, double>> points;

    std::function<double(double)> function(double h) const;
    std::string str() const;
};

Alpha0Descriptor parse_alpha0(const std::string& text);
Alpha0Descriptor parse_alpha0(const nlohmann::json& j);

struct ScenarioConfig {
    struct Model {
        std::string name = "nicholson";
        ParamMap params;
    } model;
    struct Wave {
        std::optional<double> c;
        std::optional<double> c_star_plus;   ///< c = minimal speed + offset
        std::optional<double> c_sharp_plus;  ///< c = c_sharp(h) + offset
    } wave;
    struct Phase {
        Alpha0Descriptor alpha0;
        bool amplitude_form = false;  ///< descriptor gives A0 instead of alpha0
    } phase;
    struct Grid {
        double x_min = -60.0;
        double x_max = 60.0;
        double dx = 0.05;
        double cfl = 0.25;
        double dxi = 0.01;
    } grid;
    struct Run {
        double T = 30.0;
        std::string output_dir = "out";
        double save_every = 0.05;
    } run;
    struct Verify {
        std::optional<double> lambda_weight;  ///< default: midpoint of (lambda1, min(2 lambda1, lambda2))
        double x_cut = -30.0;
        double a_star_tol = 0.02;
        double alpha_tol = 0.02;
        double gamma_max = -0.01;
        double band = 1e-4;
        std::optional<double> floor_dx;  ///< coarser dx for the discretization floor estimate
    } verify;
};

/// Throws ConfigError on unknown keys or wrong types.
ScenarioConfig parse_scenario(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::string& path);
nlohmann::json to_json(const ScenarioConfig& cfg);

/// Speed selected by the wave block.
double resolve_speed(const ScenarioConfig& cfg);

/// Model with L2, M1 finalized for the resolved speed (KPP-Fisher depends on c).
ModelSpec resolve_model(const ScenarioConfig& cfg, double c);

}  // namespace wavephase
