#include "wavephase/phase.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wavephase/core/error.hpp"

namespace wavephase {

std::pair<double, double> default_fit_window(const WaveProfile& p) {
    double lo = p.xi_min, hi = p.xi_max();
    bool have_lo = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!have_lo && p.phi[i] >= 0.1 * p.u_plus) {
            lo = p.xi(i);
            have_lo = true;
        }
        if (p.phi[i] >= 0.9 * p.u_plus) {
            hi = p.xi(i);
            break;
        }
    }
    if (!have_lo || !(hi > lo)) throw NumericalError("default_fit_window: profile has no front");
    return {lo, hi};
}

double fit_phase(const GridFunction& frame, const WaveProfile& profile, std::pair<double, double> window) {
    const auto& g = frame.grid;
    std::vector<double> xs, vs;
    for (std::size_t i = 0; i < frame.values.size(); ++i) {
        const double x = g.x(i);
        if (x >= window.first && x <= window.second) {
            xs.push_back(x);
            vs.push_back(frame.values[i]);
        }
    }
    if (xs.size() < 3) throw std::invalid_argument("fit_phase: window holds fewer than 3 nodes");
    if (xs.back() + 5.0 > profile.xi_max())
        throw std::invalid_argument("fit_phase: profile too short for the window");

    auto sse = [&](double a) {
        double s = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double r = vs[i] - profile.eval(xs[i] + a);
            s += r * r;
        }
        return s;
    };

    constexpr double kLo = -5.0, kHi = 5.0;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = kLo, b = kHi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = sse(x1), f2 = sse(x2);
    while (b - a > 1e-7) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = sse(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = sse(x2);
        }
    }
    double shift = 0.5 * (a + b);
    if (shift < kLo + 1e-3 || shift > kHi - 1e-3)
        throw NumericalError("fit_phase: front outside the window (fit hit the search bound)");

    for (int it = 0; it < 8; ++it) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double d = profile.eval_derivative(xs[i] + shift);
            num += (profile.eval(xs[i] + shift) - vs[i]) * d;
            den += d * d;
        }
        if (den == 0.0) break;
        const double step = num / den;
        const double trial = shift - step;
        if (sse(trial) > sse(shift)) break;
        shift = trial;
        if (std::abs(step) < 1e-13) break;
    }
    return shift;
}

double weighted_error(const GridFunction& frame, const WaveProfile& profile, double a, double lambda_w,
                      double x_cut) {
    const auto& g = frame.grid;
    double worst = 0.0;
    for (std::size_t i = 0; i < frame.values.size(); ++i) {
        const double x = g.x(i);
        if (x < x_cut) continue;
        const double xs = x - a;
        if (xs < g.x_min || xs > g.x_max) continue;
        const double diff = std::abs(frame.eval(xs) - profile.eval(x));
        worst = std::max(worst, std::exp(-lambda_w * x) * diff);
    }
    return worst;
}

DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& errors, double t_start) {
    if (times.size() != errors.size()) throw std::invalid_argument("decay_fit: size mismatch");
    std::vector<double> ts, ls;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_start) continue;
        if (!(errors[i] > 0.0)) throw std::invalid_argument("decay_fit: errors must be positive");
        ts.push_back(times[i]);
        ls.push_back(std::log(errors[i]));
    }
    if (ts.size() < 10) throw std::invalid_argument("decay_fit: fewer than 10 samples");
    double mt = 0.0, ml = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        mt += ts[i];
        ml += ls[i];
    }
    mt /= static_cast<double>(ts.size());
    ml /= static_cast<double>(ts.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sxy += (ts[i] - mt) * (ls[i] - ml);
        sxx += (ts[i] - mt) * (ts[i] - mt);
    }
    const double gamma = sxy / sxx;
    return {gamma, ml - gamma * mt, std::abs(gamma) < 1e-3, ts.size()};
}

std::vector<int> crossing_count(const std::vector<double>& times, const std::vector<double>& alpha,
                                double level, double h, double t0, double band) {
    if (times.size() != alpha.size()) throw std::invalid_argument("crossing_count: size mismatch");
    if (!(h > 0.0)) throw std::invalid_argument("crossing_count: h must be positive");
    if (times.empty() || times.back() < t0 + h) return {};

    const auto windows = static_cast<std::size_t>(std::floor((times.back() - t0) / h + 1e-9));
    std::vector<int> counts(windows, 0);
    std::vector<int> samples(windows, 0);
    int state = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t0) continue;
        const auto w = static_cast<std::size_t>(std::floor((times[i] - t0) / h + 1e-9));
        if (w >= windows) break;
        ++samples[w];
        const double d = alpha[i] - level;
        const int s = d > band ? 1 : (d < -band ? -1 : 0);
        if (s == 0) continue;
        if (state != 0 && s != state) ++counts[w];
        state = s;
    }
    for (int n : samples)
        if (n < 20) throw std::invalid_argument("crossing_count: fewer than 20 samples in a window");
    return counts;
}

}  // namespace wavephase
