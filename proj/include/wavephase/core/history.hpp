#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wavephase/core/grid.hpp"

namespace wavephase {

/// Time-stamped spatial snapshots covering [t_now - h, t_now] with uniform
/// spacing dt. Single writer (the stepper); readers may query between pushes.
///
/// Snapshots live in a ring of N + 1 frames where h = N dt, so the frame at
/// t - h is always an exact knot and only the spatial argument needs
/// interpolation.
class HistoryField {
public:
    HistoryField(GridSpec grid, double h);

    const GridSpec& grid() const { return grid_; }
    double delay() const { return h_; }
    std::size_t delay_steps() const { return steps_; }

    /// Append the snapshot at time t; t must equal t_now() + dt unless empty.
    void push(double t, std::vector<double> frame);

    bool empty() const { return count_ == 0; }
    /// True once the whole window [t_now - h, t_now] is stored.
    bool complete() const { return count_ == capacity(); }
    std::size_t size() const { return count_; }
    std::size_t capacity() const { return steps_ + 1; }

    double t_now() const;
    double t_oldest() const;

    /// Frame stored at time t (must be a knot within the window).
    std::span<const double> frame_at(double t) const;
    /// Frame at t_now - h.
    std::span<const double> delayed_frame() const;
    std::span<const double> current_frame() const;

    /// Value at (t, x): exact in t (knot), cubic in x.
    double eval(double t, double x) const;

    /// Stored snapshots from oldest to newest.
    std::vector<std::pair<double, std::vector<double>>> snapshots() const;

private:
    std::size_t slot(std::size_t age_from_oldest) const;

    GridSpec grid_;
    double h_;
    std::size_t steps_;
    std::vector<std::vector<double>> ring_;
    std::vector<double> times_;
    std::size_t head_ = 0;  // slot of the oldest frame
    std::size_t count_ = 0;
};

}  // namespace wavephase
