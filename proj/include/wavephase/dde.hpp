#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace wavephase {

using ScalarFunction = std::function<double(double)>;

/// Initial data of the phase equation on [-h, 0], either as an amplitude A0(s)
/// or as a phase alpha0(s) with A0 = exp(lambda1 alpha0). Both forms are kept
/// once built so nothing is converted twice.
class PhaseInitial {
public:
    enum class Form { amplitude, phase };

    static constexpr std::size_t default_intervals = 1024;

    static PhaseInitial from_amplitude(double h, ScalarFunction A0,
                                       std::size_t intervals = default_intervals);
    static PhaseInitial from_phase(double h, double lambda1, ScalarFunction alpha0,
                                   std::size_t intervals = default_intervals);

    Form form() const { return form_; }
    double h() const { return h_; }
    std::size_t intervals() const { return intervals_; }
    double spacing() const { return h_ / static_cast<double>(intervals_); }

    double A0(double s) const;
    /// Only available in the phase form.
    double alpha0(double s) const;
    bool has_alpha() const { return form_ == Form::phase; }

    /// Samples on the uniform grid s_j = -h + j h / intervals, j = 0..intervals.
    const std::vector<double>& A_samples() const { return A_samples_; }
    const std::vector<double>& alpha_samples() const { return alpha_samples_; }

    /// Composite Simpson value of the integral of A0 over [-h, 0].
    double integral() const { return integral_; }
    double A0_at_zero() const { return A_samples_.back(); }

private:
    PhaseInitial() = default;
    void sample();

    Form form_ = Form::amplitude;
    double h_ = 0.0;
    double lambda1_ = 0.0;
    std::size_t intervals_ = default_intervals;
    ScalarFunction A0_;
    ScalarFunction alpha0_;
    std::vector<double> A_samples_;
    std::vector<double> alpha_samples_;
    double integral_ = 0.0;
};

/// A(t) on the knots t_k = -h + k dt, k = 0..N + steps.
struct PhaseSeries {
    double h = 0.0;
    double dt = 0.0;
    std::vector<double> t;
    std::vector<double> A;

    /// Index of t = 0.
    std::size_t origin() const;
    double final_value() const { return A.back(); }
    /// Value at a knot time (throws RangeError off the knots).
    double at(double time) const;
};

/// Classical RK4 for A'(t) = q (A(t - h) - A(t)). dt must divide h; delayed
/// values at half steps come from cubic Hermite interpolation of the stored
/// solution, or from A0 itself while t - h < 0.
PhaseSeries solve_phase(double q, double h, const PhaseInitial& init, double T, double dt);

/// A_inf = (A0(0) + q int A0) / (1 + q h).
double a_infinity(double q, double h, const PhaseInitial& init);

/// a_* = ln(A_inf) / lambda1.
double asymptotic_shift(double lambda1, double A_inf);

/// delta_a = (1/lambda1) ln[(1 + q int A0 / A0(0)) / (1 + q h)]. Needs A0(0) > 0.
double traveled_distance(double lambda1, double q, double h, const PhaseInitial& init);

/// A1 with A1 (1 + h (z1 + q)) = A0(0) + q e^{-z1 h} int e^{-z1 s} A0(s) ds,
/// so that A(t) - A_inf ~ 2 Re(A1 e^{z1 t}).
std::complex<double> leading_coefficient(double q, double h, const PhaseInitial& init,
                                         std::complex<double> z1);

struct PhasePrediction {
    double A_inf;
    double a_star;
    std::optional<double> delta_a;  ///< absent when A0(0) <= 0
    std::complex<double> A1;
    std::optional<std::complex<double>> z1;  ///< absent when q == 0 or h == 0
    double d_rate;
};

/// All closed forms at once. z1 is computed from quasi_roots when q > 0.
PhasePrediction predict_phase(double q, double h, double lambda1, const PhaseInitial& init);

struct EnvelopeFit {
    double C;      ///< smallest C with |A - A_inf| <= C e^{d t} on t >= 0
    double slope;  ///< fitted exponent of the per-window maxima of |A - A_inf|
    bool ok;       ///< slope <= d_rate + 0.05
};

/// Fits |A(t) - A_inf| <= C e^{d_rate t}. Differences at rounding level count
/// as zero; the exponent regression uses maxima over windows of length h
/// starting at t = h.
EnvelopeFit check_exponential_bound(const PhaseSeries& series, double A_inf, double d_rate);

}  // namespace wavephase
