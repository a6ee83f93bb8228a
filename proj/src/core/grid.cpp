#include "wavephase/core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wavephase {

namespace {

bool is_whole(double ratio) { return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio); }

}  // namespace

std::size_t GridSpec::node_count() const {
    return static_cast<std::size_t>(std::llround((x_max - x_min) / dx)) + 1;
}

std::size_t GridSpec::delay_steps(double h) const {
    if (h == 0.0) return 0;
    return static_cast<std::size_t>(std::llround(h / dt));
}

void GridSpec::validate(double h, double cfl_safety) const {
    if (!(x_max > x_min)) throw std::invalid_argument("grid: x_max must exceed x_min");
    if (!(dx > 0.0) || !(dt > 0.0) || !(T > 0.0))
        throw std::invalid_argument("grid: dx, dt and T must be positive");
    if (!is_whole((x_max - x_min) / dx))
        throw std::invalid_argument("grid: (x_max - x_min) must be a whole number of cells");
    if (cfl_safety > 0.25) throw std::invalid_argument("grid: cfl_safety must not exceed 0.25");
    if (h > 0.0) {
        const double n = h / dt;
        if (!is_whole(n) || std::llround(n) < 1)
            throw std::invalid_argument("grid: dt must divide h exactly (h = N dt, N >= 1)");
    }
    if (dt > cfl_safety * dx * dx * (1.0 + 1e-12))
        throw std::invalid_argument("grid: CFL violated, dt = " + std::to_string(dt) +
                                    " > " + std::to_string(cfl_safety) + " dx^2");
}

double cfl_time_step(double dx, double h, double cfl_safety) {
    const double limit = cfl_safety * dx * dx;
    if (h == 0.0) return limit;
    const double n = std::ceil(h / limit - 1e-9);
    return h / n;
}

GridFunction::GridFunction(GridSpec g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.node_count())
        throw std::invalid_argument("GridFunction: value count does not match the grid");
    for (double x : values)
        if (!std::isfinite(x)) throw std::invalid_argument("GridFunction: non-finite value");
}

double GridFunction::eval(double x) const { return lagrange4(values, (x - grid.x_min) / grid.dx); }

double lagrange4(std::span<const double> v, double pos) {
    const auto n = static_cast<long>(v.size());
    if (n < 4) throw std::invalid_argument("lagrange4: need at least 4 samples");
    if (pos < -1e-12 || pos > static_cast<double>(n - 1) + 1e-12)
        throw std::out_of_range("lagrange4: position outside the sampled range");
    const double fl = std::floor(pos);
    if (fl == pos) return v[static_cast<std::size_t>(fl)];

    const long base = std::clamp(static_cast<long>(fl) - 1, 0L, n - 4);
    const double t = pos - static_cast<double>(base);  // nodes at 0, 1, 2, 3
    const double w0 = -(t - 1) * (t - 2) * (t - 3) / 6.0;
    const double w1 = t * (t - 2) * (t - 3) / 2.0;
    const double w2 = -t * (t - 1) * (t - 3) / 2.0;
    const double w3 = t * (t - 1) * (t - 2) / 6.0;
    const auto b = static_cast<std::size_t>(base);
    return w0 * v[b] + w1 * v[b + 1] + w2 * v[b + 2] + w3 * v[b + 3];
}

double simpson(std::span<const double> s, double spacing) {
    if (s.size() < 3 || s.size() % 2 == 0)
        throw std::invalid_argument("simpson: need an odd number (>= 3) of samples");
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) (i % 2 ? odd : even) += s[i];
    return spacing / 3.0 * (s.front() + 4.0 * odd + 2.0 * even + s.back());
}

}  // namespace wavephase
