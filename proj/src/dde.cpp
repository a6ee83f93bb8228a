#include "wavephase/dde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "wavephase/charroots.hpp"
#include "wavephase/core/error.hpp"
#include "wavephase/core/grid.hpp"

namespace wavephase {

namespace {

std::size_t whole_steps(double span, double dt, const char* what) {
    const double n = span / dt;
    const double r = std::round(n);
    if (std::abs(n - r) > 1e-9 * std::max(1.0, n))
        throw std::invalid_argument(std::string("solve_phase: dt must divide ") + what);
    return static_cast<std::size_t>(r);
}

}  // namespace

PhaseInitial PhaseInitial::from_amplitude(double h, ScalarFunction A0, std::size_t intervals) {
    if (!(h > 0.0)) throw std::invalid_argument("PhaseInitial: h must be positive");
    if (!A0) throw std::invalid_argument("PhaseInitial: A0 is empty");
    PhaseInitial p;
    p.form_ = Form::amplitude;
    p.h_ = h;
    p.intervals_ = intervals;
    p.A0_ = std::move(A0);
    p.sample();
    return p;
}

PhaseInitial PhaseInitial::from_phase(double h, double lambda1, ScalarFunction alpha0,
                                      std::size_t intervals) {
    if (!(h > 0.0)) throw std::invalid_argument("PhaseInitial: h must be positive");
    if (!(lambda1 > 0.0)) throw std::invalid_argument("PhaseInitial: lambda1 must be positive");
    if (!alpha0) throw std::invalid_argument("PhaseInitial: alpha0 is empty");
    PhaseInitial p;
    p.form_ = Form::phase;
    p.h_ = h;
    p.lambda1_ = lambda1;
    p.intervals_ = intervals;
    p.alpha0_ = std::move(alpha0);
    p.A0_ = [l = lambda1, a = p.alpha0_](double s) { return std::exp(l * a(s)); };
    p.sample();
    return p;
}

void PhaseInitial::sample() {
    if (intervals_ < 2 || intervals_ % 2 != 0)
        throw std::invalid_argument("PhaseInitial: interval count must be even and >= 2");
    const double ds = spacing();
    A_samples_.resize(intervals_ + 1);
    if (form_ == Form::phase) alpha_samples_.resize(intervals_ + 1);
    for (std::size_t j = 0; j <= intervals_; ++j) {
        const double s = j == intervals_ ? 0.0 : -h_ + static_cast<double>(j) * ds;
        if (form_ == Form::phase) {
            alpha_samples_[j] = alpha0_(s);
            A_samples_[j] = std::exp(lambda1_ * alpha_samples_[j]);
        } else {
            A_samples_[j] = A0_(s);
        }
        if (!std::isfinite(A_samples_[j])) throw std::invalid_argument("PhaseInitial: non-finite sample");
    }
    integral_ = simpson(A_samples_, ds);
}

double PhaseInitial::A0(double s) const { return A0_(s); }

double PhaseInitial::alpha0(double s) const {
    if (form_ != Form::phase) throw std::logic_error("PhaseInitial: no phase form available");
    return alpha0_(s);
}

std::size_t PhaseSeries::origin() const { return static_cast<std::size_t>(std::llround(h / dt)); }

double PhaseSeries::at(double time) const {
    const double k = (time + h) / dt;
    const long idx = std::lround(k);
    if (idx < 0 || idx >= static_cast<long>(A.size()) || std::abs(k - static_cast<double>(idx)) > 1e-6)
        throw RangeError("PhaseSeries: time " + std::to_string(time) + " is not a knot");
    return A[static_cast<std::size_t>(idx)];
}

PhaseSeries solve_phase(double q, double h, const PhaseInitial& init, double T, double dt) {
    if (!(q >= 0.0)) throw std::invalid_argument("solve_phase: q must be >= 0");
    if (!(h > 0.0)) throw std::invalid_argument("solve_phase: h must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("solve_phase: dt must be positive");
    if (!(T >= 0.0)) throw std::invalid_argument("solve_phase: T must be >= 0");
    if (std::abs(init.h() - h) > 1e-12 * h) throw std::invalid_argument("solve_phase: init has a different h");

    const std::size_t N = whole_steps(h, dt, "h");
    if (N < 1) throw std::invalid_argument("solve_phase: dt must not exceed h");
    const std::size_t M = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));

    PhaseSeries out;
    out.h = h;
    out.dt = dt;
    out.t.resize(N + 1 + M);
    out.A.resize(N + 1 + M);
    std::vector<double> D(N + 1 + M, 0.0);  // A' on t >= 0 (right derivative at 0)

    for (std::size_t k = 0; k <= N; ++k) {
        out.t[k] = k == N ? 0.0 : -h + static_cast<double>(k) * dt;
        out.A[k] = init.A0(out.t[k]);
    }
    auto& A = out.A;
    D[N] = q * (A[0] - A[N]);

    const double half = 0.5 * dt;
    for (std::size_t k = N; k < N + M; ++k) {
        const std::size_t j = k - N;  // knot of t_k - h
        const double d1 = A[j];
        const double d3 = A[j + 1];
        double d2;
        if (j + 1 <= N) {
            d2 = init.A0(out.t[j] + half);
        } else {
            d2 = hermite(A[j], D[j], A[j + 1], D[j + 1], 0.5, dt);
        }
        const double y = A[k];
        const double k1 = q * (d1 - y);
        const double k2 = q * (d2 - (y + half * k1));
        const double k3 = q * (d2 - (y + half * k2));
        const double k4 = q * (d3 - (y + dt * k3));
        A[k + 1] = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.t[k + 1] = static_cast<double>(k + 1 - N) * dt;
        D[k + 1] = q * (A[j + 1] - A[k + 1]);
    }
    return out;
}

double a_infinity(double q, double h, const PhaseInitial& init) {
    if (!(q >= 0.0) || !(h > 0.0)) throw std::invalid_argument("a_infinity: need q >= 0, h > 0");
    return (init.A0_at_zero() + q * init.integral()) / (1.0 + q * h);
}

double asymptotic_shift(double lambda1, double A_inf) {
    if (!(A_inf > 0.0)) throw std::invalid_argument("asymptotic_shift: A_inf must be positive");
    if (!(lambda1 > 0.0)) throw std::invalid_argument("asymptotic_shift: lambda1 must be positive");
    return std::log(A_inf) / lambda1;
}

double traveled_distance(double lambda1, double q, double h, const PhaseInitial& init) {
    const double a0 = init.A0_at_zero();
    if (!(a0 > 0.0)) throw std::invalid_argument("traveled_distance: A0(0) must be positive");
    if (!(lambda1 > 0.0)) throw std::invalid_argument("traveled_distance: lambda1 must be positive");
    return std::log((1.0 + q * init.integral() / a0) / (1.0 + q * h)) / lambda1;
}

std::complex<double> leading_coefficient(double q, double h, const PhaseInitial& init,
                                         std::complex<double> z1) {
    const auto denom = 1.0 + h * (z1 + q);
    if (std::abs(denom) < 1e-300) throw NumericalError("leading_coefficient: z1 is a multiple zero");

    const auto& a = init.A_samples();
    const double ds = init.spacing();
    std::vector<double> re(a.size()), im(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double s = j + 1 == a.size() ? 0.0 : -h + static_cast<double>(j) * ds;
        const auto w = std::exp(-z1 * s) * a[j];
        re[j] = w.real();
        im[j] = w.imag();
    }
    const std::complex<double> integral(simpson(re, ds), simpson(im, ds));
    return (init.A0_at_zero() + q * std::exp(-z1 * h) * integral) / denom;
}

PhasePrediction predict_phase(double q, double h, double lambda1, const PhaseInitial& init) {
    PhasePrediction p;
    p.A_inf = a_infinity(q, h, init);
    p.a_star = asymptotic_shift(lambda1, p.A_inf);
    if (init.A0_at_zero() > 0.0) p.delta_a = traveled_distance(lambda1, q, h, init);
    p.A1 = 0.0;
    p.d_rate = -std::numeric_limits<double>::infinity();
    if (q > 0.0) {
        const auto z1 = quasi_roots(q, h, 1).front().z;
        p.z1 = z1;
        p.d_rate = z1.real();
        p.A1 = leading_coefficient(q, h, init, z1);
    }
    return p;
}

EnvelopeFit check_exponential_bound(const PhaseSeries& series, double A_inf, double d_rate) {
    const double floor = 1e-13 * std::max(1.0, std::abs(A_inf));
    const std::size_t k0 = series.origin();

    EnvelopeFit fit{0.0, -std::numeric_limits<double>::infinity(), true};
    for (std::size_t k = k0; k < series.A.size(); ++k) {
        const double diff = std::abs(series.A[k] - A_inf);
        if (diff <= floor) continue;
        fit.C = std::max(fit.C, diff * std::exp(-d_rate * series.t[k]));
    }

    // per-window maxima from t = h on
    std::vector<double> ts, logs;
    const std::size_t per = k0;
    for (std::size_t start = 2 * k0; start + per <= series.A.size(); start += per) {
        double best = 0.0;
        double tbest = 0.0;
        for (std::size_t k = start; k < start + per; ++k) {
            const double diff = std::abs(series.A[k] - A_inf);
            if (diff > best) {
                best = diff;
                tbest = series.t[k];
            }
        }
        if (best > floor) {
            ts.push_back(tbest);
            logs.push_back(std::log(best));
        }
    }
    if (ts.size() >= 2) {
        double mt = 0.0, ml = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            mt += ts[i];
            ml += logs[i];
        }
        mt /= static_cast<double>(ts.size());
        ml /= static_cast<double>(ts.size());
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            sxy += (ts[i] - mt) * (logs[i] - ml);
            sxx += (ts[i] - mt) * (ts[i] - mt);
        }
        fit.slope = sxy / sxx;
        fit.ok = fit.slope <= d_rate + 0.05;
    }
    return fit;
}

}  // namespace wavephase
