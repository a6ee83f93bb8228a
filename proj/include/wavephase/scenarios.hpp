#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wavephase/charroots.hpp"
#include "wavephase/dde.hpp"
#include "wavephase/pde.hpp"
#include "wavephase/phase.hpp"
#include "wavephase/profile.hpp"
#include "wavephase/scenario.hpp"

namespace wavephase {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string name;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, std::string>> summary;
    double seconds = 0.0;

    bool passed() const;
    void add(std::string name, bool pass, std::string detail);
    void note(std::string key, std::string value);
    /// "PASS name: detail" lines followed by the summary.
    std::string text() const;
};

/// Everything a scenario run produces.
struct ScenarioRun {
    ScenarioConfig config;
    ModelSpec model;
    double c = 0.0;
    RootSet roots;
    std::shared_ptr<const WaveProfile> profile;
    std::optional<PhaseInitial> initial;  ///< absent when h == 0
    std::optional<PhasePrediction> prediction;
    double lambda_weight = 0.0;
    std::pair<double, double> fit_window;
    SimTrace sim;
    PhaseTrace trace;
    /// Weighted distance of the initial segment from phi(x + alpha0(0)).
    double initial_error = 0.0;
};

ModelSpec scenario_model(const ScenarioConfig& cfg, double c);
std::function<double(double)> scenario_alpha0(const ScenarioConfig& cfg, double lambda1);

/// Profile, simulation and phase tracking for one configuration. The weighted
/// error at time t is taken against phi shifted by the fitted alpha(t).
ScenarioRun run_scenario(const ScenarioConfig& cfg);

/// Nicholson p = 2, h = 1, c = c* + 0.5, alpha0 = 0.2 sin(pi s / h).
ScenarioConfig corollary1_config();
/// KPP-Fisher h = 0.5, c = c_sharp(0.5) + 0.3, alpha0 = 0.2 sin(pi s / h).
ScenarioConfig corollary2_config();

struct Fig1Left {
    Report report;
    PhaseSeries series;
    double A_inf = 0.0;
};

/// q = 19, h = 1, A0(s) = -s.
Fig1Left run_fig1_left(double T = 10.0, double dt = 1.0 / 256.0);

struct Fig1Right {
    Report report;
    std::vector<std::pair<double, double>> curve;
};

/// c_sharp on 51 samples of [0, 5] and the 20 x 20 in_domain comparison.
Fig1Right run_fig1_right();

struct EndToEnd {
    Report report;
    ScenarioRun run;
};

EndToEnd run_corollary1(const ScenarioConfig& cfg = corollary1_config());
EndToEnd run_corollary2(const ScenarioConfig& cfg = corollary2_config());

/// Synthetic leading-mode phase a* + ln(1 + 2 Re(A1 e^{z1 t}) / A_inf) / lambda1
/// sampled every h / per_window on [0, T].
std::pair<std::vector<double>, std::vector<double>> leading_mode_phase(const PhasePrediction& pred, double lambda1,
                                                                       double h, double T, int per_window = 200);

}  // namespace wavephase
