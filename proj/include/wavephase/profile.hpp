#pragma once

#include <cstddef>
#include <vector>

#include "wavephase/core/model.hpp"

namespace wavephase {

/// Wavefront phi of phi'' - c phi' + f(phi(xi), phi(xi - ch)) = 0 on a uniform
/// grid, normalized by phi(xi) ~ e^{lambda1 xi} at the left end.
///
/// Left of xi_min the profile is the seed
///   e^{lambda1 xi} (1 + s e^{(lambda2 - lambda1)(xi - xi_min)}),
/// which is also what eval() returns there.
struct WaveProfile {
    double xi_min = 0.0;
    double dxi = 0.0;
    std::vector<double> phi;
    std::vector<double> dphi;
    double c = 0.0;
    double h = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double seed_s = 0.0;     ///< coefficient of the lambda2 mode at xi_min
    double xi0 = 0.0;        ///< seed point (= xi_min)
    double u_plus = 0.0;     ///< right-end state used for sanity bounds
    std::size_t delay_steps = 0;  ///< ch / dxi
    double residual_max = 0.0;
    double tail_sigma_est = 0.0;
    bool right_plateau_ok = false;  ///< min over the last quarter > 0.1 u_plus

    std::size_t size() const { return phi.size(); }
    double xi(std::size_t i) const { return xi_min + static_cast<double>(i) * dxi; }
    double xi_max() const { return xi(phi.size() - 1); }

    double seed(double xi) const;
    double seed_derivative(double xi) const;

    /// Cubic Hermite between nodes, seed tail left of xi_min. Throws
    /// RangeError right of xi_max.
    double eval(double xi) const;
    double eval_derivative(double xi) const;
};

/// Forward shooting from the tail: RK4 on (phi, phi') with the delayed value
/// read from the computed solution (Hermite at half steps) or from the seed
/// left of xi_min. The lambda2 coefficient s is found by bisection on whether
/// the orbit escapes above or below; the unstable growth near the right state
/// is then removed by restarting from the agreed part and bisecting a tiny
/// kick to phi' until the bracketing orbits agree through xi_max.
///
/// dxi is reduced so that it divides ch; xi_max is rounded up to a whole
/// number of steps. Throws ProfileError ("seed too shallow") when the fitted s
/// is larger than 1e-10, with a deeper xi_min suggested.
WaveProfile compute_profile(const ModelSpec& model, double c, double xi_min, double xi_max,
                            double dxi);

/// A xi_min deep enough that the seed's neglected terms stay below 1e-11.
double default_xi_min(double lambda1, double lambda2);

/// max over interior nodes of |D2 phi - c D1 phi + f(phi, phi(xi - ch))| with
/// fourth-order centered differences.
double profile_residual(const WaveProfile& profile, const ModelSpec& model);

/// Pointwise version; the two nodes at each end are zero.
std::vector<double> profile_residuals(const WaveProfile& profile, const ModelSpec& model);

struct TailFit {
    double sigma_est;
    bool bounded;
};

/// Decay exponent of B = phi - e^{lambda1 xi} on the left third of the grid.
/// sigma_est = fitted exponent - lambda1; bounded when the exponent is at
/// least lambda1 + 0.1 (lambda2 - lambda1). Returns (lambda2 - lambda1, true)
/// when |B| stays below 1e-8 e^{lambda1 xi} everywhere.
TailFit tail_remainder(const WaveProfile& profile);

}  // namespace wavephase
