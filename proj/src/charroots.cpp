#include "wavephase/charroots.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "wavephase/core/error.hpp"

namespace wavephase {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCriticalGap = 1e-6;

// argmin of chi0 over lambda >= 0; chi0 is convex there because f2(0,0) >= 0.
double chi0_argmin(const ModelSpec& m, double c) {
    if (chi0_derivative(m, c, 0.0) >= 0.0) return 0.0;
    double lo = 0.0;
    double hi = 0.5 * (c + m.f2_00 * c * m.h) + 1.0;
    while (chi0_derivative(m, c, hi) <= 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (chi0_derivative(m, c, mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Bisection for a sign change of chi0 on [lo, hi], then Newton polish kept
// only while it improves the residual and stays inside the bracket.
double bracketed_root(const ModelSpec& m, double c, double lo, double hi) {
    double flo = chi0(m, c, lo);
    for (int it = 0; it < 300 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = chi0(m, c, mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    double r = std::abs(chi0(m, c, x));
    for (int it = 0; it < 8; ++it) {
        const double d = chi0_derivative(m, c, x);
        if (d == 0.0) break;
        const double next = x - chi0(m, c, x) / d;
        const double rn = std::abs(chi0(m, c, next));
        if (!(rn < r) || next < lo || next > hi) break;
        x = next;
        r = rn;
    }
    return x;
}

double arg_step(std::complex<double> from, std::complex<double> to) { return std::arg(to / from); }

// Accumulated change of arg chi along the segment [z0, z1], refined until each
// sub-step turns by less than 0.25 rad.
double edge_arg(double q, double h, std::complex<double> z0, std::complex<double> f0,
                std::complex<double> z1, std::complex<double> f1, int depth) {
    const auto zm = 0.5 * (z0 + z1);
    const auto fm = chi_quasi(q, h, zm);
    if (fm == 0.0 || f0 == 0.0 || f1 == 0.0) throw NumericalError("winding_count: zero on the contour");
    const double a = arg_step(f0, fm);
    const double b = arg_step(fm, f1);
    if (std::abs(a) < 0.25 && std::abs(b) < 0.25 && depth >= 2) return a + b;
    if (depth > 60) throw NumericalError("winding_count: contour passes through a zero");
    return edge_arg(q, h, z0, f0, zm, fm, depth + 1) + edge_arg(q, h, zm, fm, z1, f1, depth + 1);
}

bool inside(const Rect& r, std::complex<double> z) {
    return z.real() >= r.re_lo && z.real() <= r.re_hi && z.imag() > r.im_lo && z.imag() < r.im_hi;
}

struct NewtonResult {
    std::complex<double> z;
    bool converged;
};

NewtonResult newton(double q, double h, std::complex<double> z, const Rect& stay_in) {
    for (int it = 0; it < 100; ++it) {
        const auto e = std::exp(-z * h);
        const auto f = z + q - q * e;
        const auto d = 1.0 + q * h * e;
        const auto step = f / d;
        z -= step;
        if (!inside(stay_in, z) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
            return {z, false};
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
            // two extra sweeps to settle at the rounding floor
            for (int k = 0; k < 2; ++k) {
                const auto ee = std::exp(-z * h);
                z -= (z + q - q * ee) / (1.0 + q * h * ee);
            }
            return {z, inside(stay_in, z)};
        }
    }
    return {z, false};
}

std::string describe(const Rect& r) {
    std::ostringstream os;
    os.precision(12);
    os << "[" << r.re_lo << ", " << r.re_hi << "] x [" << r.im_lo << ", " << r.im_hi << "]";
    return os.str();
}

// Shrink the rectangle by quadrisection, keeping the quadrant that holds the
// zero, until Newton converges inside it.
std::complex<double> localize(double q, double h, Rect r) {
    for (int level = 0; level < 60; ++level) {
        const auto res = newton(q, h, {0.5 * (r.re_lo + r.re_hi), 0.5 * (r.im_lo + r.im_hi)}, r);
        if (res.converged) return res.z;

        const double rm = 0.5 * (r.re_lo + r.re_hi);
        const double im = 0.5 * (r.im_lo + r.im_hi);
        const Rect quads[4] = {{r.re_lo, rm, r.im_lo, im},
                               {rm, r.re_hi, r.im_lo, im},
                               {r.re_lo, rm, im, r.im_hi},
                               {rm, r.re_hi, im, r.im_hi}};
        bool found = false;
        for (const auto& sub : quads) {
            const int w = winding_count(q, h, sub);
            if (w == 1) {
                r = sub;
                found = true;
                break;
            }
        }
        if (!found) throw LocalizationError("quasi_roots: quadrisection lost the zero in " + describe(r),
                                            r.re_lo, r.re_hi, r.im_lo, r.im_hi, 0);
    }
    throw LocalizationError("quasi_roots: quadrisection did not converge in " + describe(r), r.re_lo,
                            r.re_hi, r.im_lo, r.im_hi, 1);
}

}  // namespace

double chi0(const ModelSpec& m, double c, double z) {
    return z * z - c * z + m.f1_00 + m.f2_00 * std::exp(-z * c * m.h);
}

double chi0_derivative(const ModelSpec& m, double c, double z) {
    return 2.0 * z - c - m.f2_00 * c * m.h * std::exp(-z * c * m.h);
}

RealRoots real_roots(const ModelSpec& m, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("real_roots: c must be positive");
    if (!(m.f1_00 + m.f2_00 > 0.0))
        throw std::invalid_argument("real_roots: zero must be unstable (f1 + f2 > 0 at the origin)");

    const double lm = chi0_argmin(m, c);
    const double vm = chi0(m, c, lm);
    if (vm > 0.0) {
        std::ostringstream os;
        os << "subcritical speed: chi0 has no positive zero for c = " << c;
        throw SubcriticalSpeed(os.str());
    }

    double up = c + std::abs(m.f1_00) + m.f2_00;
    while (chi0(m, c, up) <= 0.0) up *= 2.0;

    const double l1 = vm == 0.0 ? lm : bracketed_root(m, c, 0.0, lm);
    const double l2 = vm == 0.0 ? lm : bracketed_root(m, c, lm, up);
    if (l2 - l1 < kCriticalGap) {
        std::ostringstream os;
        os << "critical speed: zeros of chi0 coincide (gap " << l2 - l1 << ") at c = " << c;
        throw CriticalSpeed(os.str());
    }
    return {l1, l2};
}

double minimal_speed(const ModelSpec& m) {
    if (!(m.f1_00 + m.f2_00 > 0.0))
        throw std::invalid_argument("minimal_speed: zero must be unstable (f1 + f2 > 0 at the origin)");
    auto min_chi = [&](double c) { return chi0(m, c, chi0_argmin(m, c)); };

    double lo = 0.0;
    double hi = 1.0;
    int grow = 0;
    while (min_chi(hi) >= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++grow > 60) throw NumericalError("minimal_speed: no admissible speed found");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (min_chi(mid) >= 0.0 ? lo : hi) = mid;
    }
    const double c = 0.5 * (lo + hi);
    const double lambda = chi0_argmin(m, c);
    if (std::abs(chi0(m, c, lambda)) > 1e-10 || std::abs(chi0_derivative(m, c, lambda)) > 1e-10)
        throw NumericalError("minimal_speed: nested bisection did not converge");
    return c;
}

double phase_q(const ModelSpec& m, double c, double lambda1) {
    if (!(lambda1 > 0.0)) throw std::invalid_argument("phase_q: lambda1 must be positive");
    if (m.f2_00 == 0.0) return 0.0;
    // Substituting A(t) e^{lambda1 x} into the linearization and using
    // chi0(lambda1) = 0 leaves A' = f2 e^{-lambda1 ch} (A(t - h) - A(t)).
    // There is no 1/lambda1 here; with it the predicted shift misses the
    // simulated tail amplitude by a wide margin.
    return m.f2_00 * std::exp(-lambda1 * c * m.h);
}

std::complex<double> chi_quasi(double q, double h, std::complex<double> z) {
    return z + q - q * std::exp(-z * h);
}

int winding_count(double q, double h, const Rect& r) {
    const std::complex<double> corners[5] = {
        {r.re_lo, r.im_lo}, {r.re_hi, r.im_lo}, {r.re_hi, r.im_hi}, {r.re_lo, r.im_hi}, {r.re_lo, r.im_lo}};
    constexpr int pieces = 32;
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        for (int s = 0; s < pieces; ++s) {
            const auto a = corners[e] + (corners[e + 1] - corners[e]) * (double(s) / pieces);
            const auto b = corners[e] + (corners[e + 1] - corners[e]) * (double(s + 1) / pieces);
            total += edge_arg(q, h, a, chi_quasi(q, h, a), b, chi_quasi(q, h, b), 0);
        }
    }
    const double w = total / (2.0 * kPi);
    const double rounded = std::round(w);
    if (std::abs(w - rounded) > 1e-3) throw NumericalError("winding_count: non-integer winding");
    return static_cast<int>(rounded);
}

Rect strip_rectangle(double q, double h, int k) {
    if (!(q > 0.0) || !(h > 0.0) || k < 1) throw std::invalid_argument("strip_rectangle: need q, h > 0, k >= 1");
    const double im_lo = (kPi + 2.0 * kPi * (k - 1)) / h;
    const double im_hi = (2.0 * kPi + 2.0 * kPi * (k - 1)) / h;

    // Any zero satisfies q e^{-x h} = |z + q| <= |x| + Im z + q, which bounds
    // Re z from below by the negative root of G below.
    auto G = [&](double x) { return q * std::exp(-x * h) - (-x + im_hi + q); };
    double lo = -1.0 / h;
    while (G(lo) <= 0.0) lo *= 2.0;
    double hi = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, -lo); ++it) {
        const double mid = 0.5 * (lo + hi);
        (G(mid) > 0.0 ? lo : hi) = mid;
    }
    // Zeros with Re z >= 0 reduce to z = 0, so the right edge may sit at 1/h.
    return {lo - 1.0 / h, 1.0 / h, im_lo, im_hi};
}

std::vector<QuasiRoot> quasi_roots(double q, double h, int K) {
    if (!(q > 0.0)) throw std::invalid_argument("quasi_roots: q must be positive");
    if (!(h > 0.0)) throw std::invalid_argument("quasi_roots: h must be positive");
    if (K < 1) throw std::invalid_argument("quasi_roots: K must be >= 1");

    std::vector<QuasiRoot> roots;
    roots.reserve(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) {
        const Rect rect = strip_rectangle(q, h, k);
        const int w = winding_count(q, h, rect);
        if (w != 1)
            throw LocalizationError("quasi_roots: winding count " + std::to_string(w) + " on strip " +
                                        std::to_string(k) + " rectangle " + describe(rect),
                                    rect.re_lo, rect.re_hi, rect.im_lo, rect.im_hi, w);

        const std::complex<double> guess(-1.0 / h, 0.5 * (rect.im_lo + rect.im_hi));
        auto res = newton(q, h, guess, rect);
        const std::complex<double> z = res.converged ? res.z : localize(q, h, rect);
        if (!(z.real() < 0.0) || !(z.imag() > rect.im_lo) || !(z.imag() < rect.im_hi))
            throw LocalizationError("quasi_roots: zero left its strip in " + describe(rect), rect.re_lo,
                                    rect.re_hi, rect.im_lo, rect.im_hi, w);
        roots.push_back({k, z, std::abs(chi_quasi(q, h, z)) / std::max(1.0, q), w});
    }
    return roots;
}

double decay_rate(double q, double h) { return quasi_roots(q, h, 1).front().z.real(); }

RootSet compute_root_set(const ModelSpec& m, double c, int K) {
    const auto rr = real_roots(m, c);
    RootSet rs;
    rs.lambda1 = rr.lambda1;
    rs.lambda2 = rr.lambda2;
    rs.sigma_gap = rr.lambda2 - rr.lambda1;
    rs.q = phase_q(m, c, rr.lambda1);
    rs.d_rate = -std::numeric_limits<double>::infinity();
    if (rs.q > 0.0 && m.h > 0.0 && K > 0) {
        rs.complex_roots = quasi_roots(rs.q, m.h, K);
        rs.d_rate = rs.complex_roots.front().z.real();
    }
    return rs;
}

}  // namespace wavephase
