#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "wavephase/core/grid.hpp"
#include "wavephase/core/history.hpp"
#include "wavephase/core/model.hpp"
#include "wavephase/profile.hpp"

namespace wavephase {

/// K e^{lambda_star x} cos(x) for x <= support_max, zero to the right.
struct Perturbation {
    double K = 0.0;
    double lambda_star = 0.0;
    double support_max = 0.0;

    double operator()(double x) const;
};

struct SimConfig {
    ModelSpec model;
    double c = 0.0;
    GridSpec grid;
    std::shared_ptr<const WaveProfile> profile;
    std::function<double(double)> alpha0;  ///< on [-h, 0]
    std::optional<Perturbation> perturbation;
    double lambda1 = 0.0;        ///< tail exponent for the left boundary rule
    double lambda_weight = 0.0;  ///< exponent of the weighted norm
    double cfl_safety = 0.25;
    double save_every = 0.1;     ///< time between archived frames
};

struct SimTrace {
    std::vector<double> times;
    std::vector<GridFunction> frames;  ///< decimated archive, always ends at T
    std::optional<HistoryField> window;  ///< trailing [T - h, T]
};

/// Snapshots v0(s, x) = phi(x + alpha0(s)) + perturbation(x) for s = -h, -h + dt, ..., 0.
/// Throws RangeError when the profile does not reach far enough to the right.
HistoryField build_initial(const SimConfig& config);

/// Called after every archived frame; a false return stops the run early.
using FrameObserver = std::function<bool(double t, const GridFunction& frame)>;

/// Explicit Euler in time, centered second-order differences in space:
///   v += dt [D2 v - c D1 v + f(v, H(t - h, x - ch))]
/// where H is exact in time (dt | h) and cubic in space. Left of the grid the
/// delayed value continues the boundary node exponentially with rate lambda1.
/// Throws SimulationError on the first non-finite value.
SimTrace simulate(const SimConfig& config, HistoryField init, double T,
                  const FrameObserver& observer = {});

/// Left: v(x_min) = e^{-lambda1 dx} v(x_min + dx); right: copy the neighbour.
void boundary_policy(std::vector<double>& frame, double lambda1, double dx);

}  // namespace wavephase
