#include "wavephase/pde.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wavephase/core/error.hpp"

namespace wavephase {

double Perturbation::operator()(double x) const {
    if (x > support_max) return 0.0;
    return K * std::exp(lambda_star * x) * std::cos(x);
}

HistoryField build_initial(const SimConfig& cfg) {
    if (!cfg.profile) throw std::invalid_argument("build_initial: no profile");
    if (!cfg.alpha0) throw std::invalid_argument("build_initial: no alpha0");
    const double h = cfg.model.h;
    const GridSpec& g = cfg.grid;
    HistoryField H(g, h);
    const std::size_t N = H.delay_steps();
    const std::size_t n = g.node_count();
    for (std::size_t k = 0; k <= N; ++k) {
        const double s = k == N ? 0.0 : -h + static_cast<double>(k) * g.dt;
        const double a = cfg.alpha0(s);
        std::vector<double> frame(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = g.x(i);
            try {
                frame[i] = cfg.profile->eval(x + a);
            } catch (const RangeError&) {
                throw RangeError("build_initial: profile ends at xi = " + std::to_string(cfg.profile->xi_max()) +
                                 " but x + alpha0(s) = " + std::to_string(x + a) + " is needed");
            }
            if (cfg.perturbation) frame[i] += (*cfg.perturbation)(x);
        }
        H.push(s, std::move(frame));
    }
    return H;
}

void boundary_policy(std::vector<double>& v, double lambda1, double dx) {
    const std::size_t n = v.size();
    v[0] = std::exp(-lambda1 * dx) * v[1];
    v[n - 1] = v[n - 2];
}

SimTrace simulate(const SimConfig& cfg, HistoryField init, double T, const FrameObserver& observer) {
    const GridSpec& g = cfg.grid;
    const double h = cfg.model.h;
    g.validate(h, cfg.cfl_safety);
    if (!(T >= 0.0)) throw std::invalid_argument("simulate: T must be >= 0");
    if (!(cfg.lambda1 > 0.0)) throw std::invalid_argument("simulate: lambda1 must be positive");
    if (!init.complete()) throw std::invalid_argument("simulate: initial history does not cover [-h, 0]");
    if (init.grid().node_count() != g.node_count() || std::abs(init.delay() - h) > 1e-12)
        throw std::invalid_argument("simulate: initial history does not match the grid");

    const std::size_t n = g.node_count();
    const double dx = g.dx;
    const double dt = g.dt;
    const double c = cfg.c;
    const double shift = c * h / dx;  // delayed argument sits shift cells to the left
    const double tail = std::exp(cfg.lambda1 * dx);
    const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.save_every / dt)));
    const double idx2 = 1.0 / (dx * dx);
    const double idx1 = 1.0 / (2.0 * dx);

    SimTrace trace;
    bool keep_going = true;
    auto archive = [&](double t, std::span<const double> v) {
        trace.times.push_back(t);
        trace.frames.emplace_back(g, std::vector<double>(v.begin(), v.end()));
        if (observer) keep_going = observer(t, trace.frames.back());
    };

    HistoryField H = std::move(init);
    archive(0.0, H.current_frame());

    std::vector<double> delayed(n);
    for (std::size_t step = 0; step < steps && keep_going; ++step) {
        const double t = static_cast<double>(step) * dt;
        const auto cur = H.current_frame();
        const auto old = H.delayed_frame();

        for (std::size_t i = 0; i < n; ++i) {
            const double pos = static_cast<double>(i) - shift;
            delayed[i] = pos >= 0.0 ? lagrange4(old, pos) : old[0] * std::pow(tail, pos);
        }

        std::vector<double> next(n);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double lap = (cur[i + 1] - 2.0 * cur[i] + cur[i - 1]) * idx2;
            const double adv = (cur[i + 1] - cur[i - 1]) * idx1;
            next[i] = cur[i] + dt * (lap - c * adv + cfg.model.f(cur[i], delayed[i]));
            if (!std::isfinite(next[i]))
                throw SimulationError("simulate: non-finite value at t = " + std::to_string(t + dt) +
                                          ", node " + std::to_string(i),
                                      t + dt, i);
        }
        boundary_policy(next, cfg.lambda1, dx);

        const double t_next = static_cast<double>(step + 1) * dt;
        H.push(t_next, std::move(next));
        if ((step + 1) % stride == 0 || step + 1 == steps) archive(t_next, H.current_frame());
    }
    trace.window = std::move(H);
    return trace;
}

}  // namespace wavephase
