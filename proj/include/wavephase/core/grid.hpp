#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wavephase {

/// Uniform space-time grid in moving-frame coordinates.
struct GridSpec {
    double x_min = -60.0;
    double x_max = 60.0;
    double dx = 0.05;
    double dt = 6.25e-4;
    double T = 30.0;

    std::size_t node_count() const;
    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx; }

    /// Number of time steps per delay, h = N dt. Zero for h = 0.
    std::size_t delay_steps(double h) const;

    /// Throws std::invalid_argument unless x_max > x_min, the span is a whole
    /// number of cells, dt | h with N >= 1 (h > 0) and dt <= cfl_safety dx^2.
    void validate(double h, double cfl_safety = 0.25) const;
};

/// Largest dt = h/N (N integer) not exceeding cfl_safety * dx^2. For h = 0
/// returns cfl_safety * dx^2.
double cfl_time_step(double dx, double h, double cfl_safety = 0.25);

/// Values on the nodes of a GridSpec.
struct GridFunction {
    GridSpec grid;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(GridSpec g, std::vector<double> v);

    /// Cubic (4-point Lagrange) interpolation; exact at nodes.
    double eval(double x) const;
};

/// 4-point Lagrange interpolation at fractional index pos in [0, n-1]. The
/// stencil is shifted inward near the ends, so cubics are reproduced
/// everywhere. Integer positions return the stored value untouched.
double lagrange4(std::span<const double> values, double pos);

/// Cubic Hermite interpolation on [0, 1] scaled by the cell width.
inline double hermite(double y0, double d0, double y1, double d1, double theta, double width) {
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + theta) * width * d0 +
           (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * width * d1;
}

inline double hermite_derivative(double y0, double d0, double y1, double d1, double theta,
                                 double width) {
    const double t2 = theta * theta;
    return ((6 * t2 - 6 * theta) * y0 + (6 * theta - 6 * t2) * y1) / width +
           (3 * t2 - 4 * theta + 1) * d0 + (3 * t2 - 2 * theta) * d1;
}

/// Composite Simpson rule over uniformly spaced samples (odd count >= 3).
double simpson(std::span<const double> samples, double spacing);

}  // namespace wavephase
