#pragma once

#include <utility>
#include <vector>

#include "wavephase/core/grid.hpp"
#include "wavephase/profile.hpp"

namespace wavephase {

struct PhaseTrace {
    std::vector<double> times;
    std::vector<double> alpha_meas;
    double a_star_pred = 0.0;
    std::vector<double> weighted_errors;
    double gamma_fit = 0.0;
    std::vector<int> crossings_per_window;
};

/// Window where phi rises from 0.1 u_plus to 0.9 u_plus.
std::pair<double, double> default_fit_window(const WaveProfile& profile);

/// argmin_a sum over window nodes of (v(x) - phi(x + a))^2: golden section on
/// [-5, 5], then Gauss-Newton polish.
double fit_phase(const GridFunction& frame, const WaveProfile& profile, std::pair<double, double> window);

/// max over nodes x >= x_cut of e^{-lambda_w x} |v(x - a) - phi(x)|, with v
/// interpolated cubically. Nodes whose shifted point leaves the grid are skipped.
double weighted_error(const GridFunction& frame, const WaveProfile& profile, double a, double lambda_w,
                      double x_cut);

struct DecayFit {
    double gamma;
    double log_K;      ///< intercept of log(error)
    bool plateau;      ///< |gamma| < 1e-3
    std::size_t samples;
};

/// Least-squares slope of log(error) against t on [t_start, end].
DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& errors, double t_start);

/// Sign changes of alpha - level in the windows [t0 + k h, t0 + (k + 1) h).
/// Samples within 1e-4 of the level do not change the sign state. Needs at
/// least 20 samples per window.
std::vector<int> crossing_count(const std::vector<double>& times, const std::vector<double>& alpha,
                                double level, double h, double t0 = 0.0, double band = 1e-4);

}  // namespace wavephase
