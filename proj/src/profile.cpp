#include "wavephase/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wavephase/charroots.hpp"
#include "wavephase/core/error.hpp"
#include "wavephase/core/grid.hpp"

namespace wavephase {

namespace {

// The integrator's own tail error shows up as a lambda2 coefficient of about
// 2e-11 (dxi / 0.01)^4 whatever xi_min is; only the excess means a shallow seed.
double seed_tolerance(double dxi) { return 1e-10 * std::max(1.0, std::pow(dxi / 0.01, 4)); }
constexpr double kExtraRun = 20.0;  // integrate this far past xi_max to classify orbits

struct Orbit {
    std::vector<double> y, p;
    std::size_t last = 0;
    int outcome = 0;  // +1 escaped above, -1 escaped below
};

class Shooter {
public:
    Shooter(const ModelSpec& m, double c, double l1, double l2, double xi_min, double dxi,
            std::size_t n, std::size_t n_end)
        : m_(m), c_(c), l1_(l1), l2_(l2), xi_min_(xi_min), dxi_(dxi), n_(n), n_end_(n_end) {
        const double up = *m.u_plus;
        const double m1 = m.M1.is_finite() ? m.M1.value() : up;
        up_thr_ = 2.0 * std::max(m1, up) + 1.0;
        down_thr_ = -1e-3 * up;
        u_plus_ = up;
    }

    double s = 0.0;

    double seed(double xi) const {
        return std::exp(l1_ * xi) + s * std::exp(l1_ * xi_min_) * std::exp(l2_ * (xi - xi_min_));
    }
    double seed_d(double xi) const {
        return l1_ * std::exp(l1_ * xi) + l2_ * s * std::exp(l1_ * xi_min_) * std::exp(l2_ * (xi - xi_min_));
    }

    Orbit run(const Orbit* base, std::size_t r, double y_r, double p_r) const {
        Orbit o;
        o.y.assign(n_end_ + 1, 0.0);
        o.p.assign(n_end_ + 1, 0.0);
        if (base) {
            std::copy(base->y.begin(), base->y.begin() + static_cast<long>(r), o.y.begin());
            std::copy(base->p.begin(), base->p.begin() + static_cast<long>(r), o.p.begin());
        }
        o.y[r] = y_r;
        o.p[r] = p_r;

        const double hs = 0.5 * dxi_;
        for (std::size_t i = r; i < n_end_; ++i) {
            const double y = o.y[i];
            const double p = o.p[i];
            double d0, dh, d1;
            if (n_ == 0) {
                d0 = dh = d1 = 0.0;  // replaced by the stage value below
            } else {
                d0 = delayed(o, i, 0);
                dh = delayed(o, i, 1);
                d1 = delayed(o, i, 2);
            }
            auto acc = [&](double yy, double pp, double dd) { return c_ * pp - m_.f(yy, n_ == 0 ? yy : dd); };
            const double k1y = p;
            const double k1p = acc(y, p, d0);
            const double k2y = p + hs * k1p;
            const double k2p = acc(y + hs * k1y, p + hs * k1p, dh);
            const double k3y = p + hs * k2p;
            const double k3p = acc(y + hs * k2y, p + hs * k2p, dh);
            const double k4y = p + dxi_ * k3p;
            const double k4p = acc(y + dxi_ * k3y, p + dxi_ * k3p, d1);
            const double yn = y + dxi_ / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
            const double pn = p + dxi_ / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
            o.y[i + 1] = yn;
            o.p[i + 1] = pn;
            if (!std::isfinite(yn) || yn > up_thr_) {
                o.last = i + 1;
                o.outcome = +1;
                return o;
            }
            if (yn < down_thr_) {
                o.last = i + 1;
                o.outcome = -1;
                return o;
            }
        }
        o.last = n_end_;
        o.outcome = o.y[n_end_] > u_plus_ ? +1 : -1;
        return o;
    }

    Orbit from_seed() const { return run(nullptr, 0, seed(xi_min_), seed_d(xi_min_)); }

private:
    // phi at xi_i + (half / 2) dxi - ch
    double delayed(const Orbit& o, std::size_t i, int half) const {
        const long j = static_cast<long>(i) - static_cast<long>(n_);
        const double pos = static_cast<double>(j) + 0.5 * half;
        if (pos < 0.0) return seed(xi_min_ + pos * dxi_);
        const auto ju = static_cast<std::size_t>(j);
        if (half == 0) return o.y[ju];
        if (half == 2) return o.y[ju + 1];
        return hermite(o.y[ju], o.p[ju], o.y[ju + 1], o.p[ju + 1], 0.5, dxi_);
    }

    const ModelSpec& m_;
    double c_, l1_, l2_, xi_min_, dxi_;
    std::size_t n_, n_end_;
    double up_thr_, down_thr_, u_plus_;
};

// Relative test: in the tail phi is tiny and an absolute tolerance would let
// the orbits drift apart long before anything is detected.
std::size_t first_divergence(const Orbit& a, const Orbit& b, double rel) {
    const std::size_t lim = std::min(a.last, b.last);
    for (std::size_t i = 0; i <= lim; ++i)
        if (std::abs(a.y[i] - b.y[i]) > rel * std::max(std::abs(a.y[i]), std::abs(b.y[i]))) return i;
    return lim;
}

}  // namespace

double WaveProfile::seed(double x) const {
    return std::exp(lambda1 * x) + seed_s * std::exp(lambda1 * xi_min) * std::exp(lambda2 * (x - xi_min));
}

double WaveProfile::seed_derivative(double x) const {
    return lambda1 * std::exp(lambda1 * x) +
           lambda2 * seed_s * std::exp(lambda1 * xi_min) * std::exp(lambda2 * (x - xi_min));
}

double WaveProfile::eval(double x) const {
    if (x < xi_min) return seed(x);
    const double pos = (x - xi_min) / dxi;
    const double last = static_cast<double>(phi.size() - 1);
    if (pos > last + 1e-9) throw RangeError("WaveProfile: xi = " + std::to_string(x) + " beyond xi_max");
    const std::size_t i = std::min(static_cast<std::size_t>(pos), phi.size() - 2);
    const double theta = std::min(pos - static_cast<double>(i), 1.0);
    return hermite(phi[i], dphi[i], phi[i + 1], dphi[i + 1], theta, dxi);
}

double WaveProfile::eval_derivative(double x) const {
    if (x < xi_min) return seed_derivative(x);
    const double pos = (x - xi_min) / dxi;
    const double last = static_cast<double>(phi.size() - 1);
    if (pos > last + 1e-9) throw RangeError("WaveProfile: xi = " + std::to_string(x) + " beyond xi_max");
    const std::size_t i = std::min(static_cast<std::size_t>(pos), phi.size() - 2);
    const double theta = std::min(pos - static_cast<double>(i), 1.0);
    return hermite_derivative(phi[i], dphi[i], phi[i + 1], dphi[i + 1], theta, dxi);
}

double default_xi_min(double lambda1, double lambda2) {
    return -std::log(1e11) / std::min(lambda2 - lambda1, lambda1) - 10.0;
}

WaveProfile compute_profile(const ModelSpec& model, double c, double xi_min, double xi_max, double dxi) {
    if (!model.u_plus) throw std::invalid_argument("compute_profile: model has no positive equilibrium");
    if (!(xi_max > xi_min)) throw std::invalid_argument("compute_profile: xi_max must exceed xi_min");
    if (!(dxi > 0.0)) throw std::invalid_argument("compute_profile: dxi must be positive");

    const auto roots = real_roots(model, c);
    const double tau = c * model.h;
    std::size_t n = 0;
    if (tau > 0.0) {
        n = static_cast<std::size_t>(std::ceil(tau / dxi - 1e-9));
        dxi = tau / static_cast<double>(n);
    }
    const auto n_grid = static_cast<std::size_t>(std::ceil((xi_max - xi_min) / dxi - 1e-9));
    const auto n_end = n_grid + static_cast<std::size_t>(std::ceil(kExtraRun / dxi));
    const double u_plus = *model.u_plus;
    const double agree = 1e-9;

    Shooter sh(model, c, roots.lambda1, roots.lambda2, xi_min, dxi, n, n_end);

    // lambda2-mode coefficient of the seed
    double s_lo = -1.0, s_hi = 1.0;
    sh.s = s_lo;
    Orbit lo = sh.from_seed();
    sh.s = s_hi;
    Orbit hi = sh.from_seed();
    if (lo.outcome != -1 || hi.outcome != +1)
        throw ProfileError("compute_profile: cannot bracket the tail coefficient");
    for (int it = 0; it < 1200; ++it) {
        const double mid = 0.5 * (s_lo + s_hi);
        if (mid == s_lo || mid == s_hi) break;
        sh.s = mid;
        Orbit o = sh.from_seed();
        if (o.outcome > 0) {
            s_hi = mid;
            hi = std::move(o);
        } else {
            s_lo = mid;
            lo = std::move(o);
        }
    }
    const double s_star = 0.5 * (s_lo + s_hi);
    sh.s = s_star;
    if (std::abs(s_star) > seed_tolerance(dxi)) {
        const double deeper =
            xi_min - std::log(std::abs(s_star) / 1e-11) / std::min(roots.lambda2 - roots.lambda1, roots.lambda1);
        std::ostringstream os;
        os << "seed too shallow: lambda2 coefficient " << s_star << " at xi_min = " << xi_min
           << "; try xi_min <= " << deeper;
        throw ProfileError(os.str(), deeper);
    }
    // Restarting from the agreed part pins the orbit down as far as xi_max.
    std::size_t restart = 0;
    for (int stage = 0; stage < 1000; ++stage) {
        const std::size_t div = first_divergence(lo, hi, agree);
        if (div > n_grid) break;
        std::size_t r = restart + (div - restart) * 2 / 3;
        if (r <= restart) {
            if (stage > 0) throw ProfileError("compute_profile: shooting stalled at xi = " +
                                              std::to_string(xi_min + static_cast<double>(div) * dxi));
            r = restart + 1;
        }
        restart = r;
        const Orbit base = lo;
        const double y_r = base.y[r];
        const double p_r = base.p[r];

        double delta = 1e-11 * (std::abs(p_r) + std::abs(y_r)) + 1e-300;
        Orbit olo, ohi;
        bool bracketed = false;
        for (int g = 0; g < 30 && !bracketed; ++g, delta *= 10.0) {
            olo = sh.run(&base, r, y_r, p_r - delta);
            ohi = sh.run(&base, r, y_r, p_r + delta);
            bracketed = olo.outcome == -1 && ohi.outcome == +1;
        }
        if (!bracketed) throw ProfileError("compute_profile: cannot bracket the restart kick");
        double e_lo = -delta / 10.0, e_hi = delta / 10.0;
        for (int it = 0; it < 400; ++it) {
            const double mid = 0.5 * (e_lo + e_hi);
            if (mid == e_lo || mid == e_hi) break;
            Orbit o = sh.run(&base, r, y_r, p_r + mid);
            if (o.outcome > 0) {
                e_hi = mid;
                ohi = std::move(o);
            } else {
                e_lo = mid;
                olo = std::move(o);
            }
        }
        lo = std::move(olo);
        hi = std::move(ohi);
        if (stage == 999) throw ProfileError("compute_profile: too many restarts");
    }

    WaveProfile prof;
    prof.xi_min = xi_min;
    prof.dxi = dxi;
    prof.phi.assign(lo.y.begin(), lo.y.begin() + static_cast<long>(n_grid) + 1);
    prof.dphi.assign(lo.p.begin(), lo.p.begin() + static_cast<long>(n_grid) + 1);
    prof.c = c;
    prof.h = model.h;
    prof.lambda1 = roots.lambda1;
    prof.lambda2 = roots.lambda2;
    prof.seed_s = s_star;
    prof.xi0 = xi_min;
    prof.u_plus = u_plus;
    prof.delay_steps = n;

    for (std::size_t i = 0; i < prof.phi.size(); ++i)
        if (!(prof.phi[i] > 0.0))
            throw ProfileError("compute_profile: profile not positive at xi = " + std::to_string(prof.xi(i)));
    const std::size_t q0 = prof.phi.size() * 3 / 4;
    prof.right_plateau_ok =
        *std::min_element(prof.phi.begin() + static_cast<long>(q0), prof.phi.end()) > 0.1 * u_plus;

    prof.residual_max = profile_residual(prof, model);
    prof.tail_sigma_est = tail_remainder(prof).sigma_est;
    return prof;
}

std::vector<double> profile_residuals(const WaveProfile& p, const ModelSpec& model) {
    const std::size_t N = p.phi.size();
    std::vector<double> out(N, 0.0);
    if (N < 5) return out;
    const double d = p.dxi;
    const double tau = p.c * model.h;
    const auto& v = p.phi;
    for (std::size_t i = 2; i + 2 < N; ++i) {
        const double d1 = (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * d);
        const double d2 = (-v[i + 2] + 16.0 * v[i + 1] - 30.0 * v[i] + 16.0 * v[i - 1] - v[i - 2]) / (12.0 * d * d);
        double delayed;
        if (tau == 0.0) {
            delayed = v[i];
        } else if (i >= p.delay_steps && p.delay_steps > 0) {
            delayed = v[i - p.delay_steps];
        } else {
            delayed = p.eval(p.xi(i) - tau);
        }
        out[i] = std::abs(d2 - p.c * d1 + model.f(v[i], delayed));
    }
    return out;
}

double profile_residual(const WaveProfile& p, const ModelSpec& model) {
    const auto r = profile_residuals(p, model);
    return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

TailFit tail_remainder(const WaveProfile& p) {
    const std::size_t third = p.phi.size() / 3;
    std::vector<double> xs, ls;
    for (std::size_t i = 0; i < third; ++i) {
        const double x = p.xi(i);
        const double e = std::exp(p.lambda1 * x);
        const double B = p.phi[i] - e;
        // the integrator's own drift of the e^{lambda1 xi} mode sits near 1e-9
        if (std::abs(B) > 1e-8 * e) {
            xs.push_back(x);
            ls.push_back(std::log(std::abs(B)));
        }
    }
    const double gap = p.lambda2 - p.lambda1;
    if (xs.size() < 5) return {gap, true};
    double mx = 0.0, ml = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        ml += ls[i];
    }
    mx /= static_cast<double>(xs.size());
    ml /= static_cast<double>(xs.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ls[i] - ml);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx;
    return {slope - p.lambda1, slope >= p.lambda1 + 0.1 * gap};
}

}  // namespace wavephase
