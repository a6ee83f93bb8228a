#pragma once

#include <complex>
#include <vector>

#include "wavephase/core/model.hpp"

namespace wavephase {

/// chi0(z) = z^2 - c z + f1(0,0) + f2(0,0) e^{-z c h}
double chi0(const ModelSpec& model, double c, double z);
double chi0_derivative(const ModelSpec& model, double c, double z);

struct RealRoots {
    double lambda1;
    double lambda2;
};

/// The two positive zeros of chi0 for a super-critical speed.
/// Throws SubcriticalSpeed when chi0 > 0 on (0, inf), CriticalSpeed when the
/// zeros are closer than 1e-6.
RealRoots real_roots(const ModelSpec& model, double c);

/// Infimum of the speeds for which chi0 has a positive zero (nested
/// bisection over c on the sign of min chi0).
double minimal_speed(const ModelSpec& model);

/// q = f2(0,0) e^{-lambda1 c h}, the rate of the tail amplitude equation
/// A' = q (A(t - h) - A(t)).
double phase_q(const ModelSpec& model, double c, double lambda1);

/// chi(z) = z + q - q e^{-z h}
std::complex<double> chi_quasi(double q, double h, std::complex<double> z);

struct Rect {
    double re_lo, re_hi, im_lo, im_hi;
};

/// Winding number of chi_quasi around the boundary of rect (counter-clockwise),
/// i.e. the number of zeros inside. Throws NumericalError when chi vanishes
/// on the boundary.
int winding_count(double q, double h, const Rect& rect);

/// Rectangle certified to contain every zero of strip k >= 1:
/// Im z in ((pi + 2 pi (k-1))/h, (2 pi + 2 pi (k-1))/h).
Rect strip_rectangle(double q, double h, int k);

struct QuasiRoot {
    int strip;                 ///< k >= 1
    std::complex<double> z;
    double residual;           ///< |chi(z)| / max(1, q)
    int winding;               ///< zero count of the strip rectangle (always 1)
};

/// The zeros z_1..z_K of z + q - q e^{-zh} in the upper strips, one per
/// strip, each certified by a winding count of one. z = 0 is excluded.
std::vector<QuasiRoot> quasi_roots(double q, double h, int K);

/// Re z_1, the decay exponent of the phase equation.
double decay_rate(double q, double h);

struct RootSet {
    double lambda1;
    double lambda2;
    double sigma_gap;  ///< lambda2 - lambda1
    std::vector<QuasiRoot> complex_roots;
    double q;
    double d_rate;  ///< Re z_1; -inf when q == 0
};

RootSet compute_root_set(const ModelSpec& model, double c, int K);

}  // namespace wavephase
