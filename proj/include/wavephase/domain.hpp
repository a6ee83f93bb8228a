#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace wavephase {

struct FeasibilityResult {
    bool feasible;
    double lambda;
    double gamma;
    double margin;  ///< value of the left side at (lambda, gamma); feasible iff < 0
};

/// lambda^2 - c lambda - D - gamma + L2 e^{-lambda c h} e^{-gamma h}
double stability_expression(double c, double h, double L2, double D, double lambda, double gamma);

/// Extra condition of the KPP-Fisher theorem: lambda_*^2 - c lambda_* - D - gamma < 0
/// with lambda_* = min(lambda_star, lambda, 2 lambda1).
struct ExtraCondition {
    double lambda1;
    double lambda_star;
};

/// 64 x 64 grid over lambda_range x (max(d_rate, -10), 0), refined three times
/// around the best cell. Pass d_rate = -inf when only gamma < 0 is required.
/// With extra set, the margin is the larger of the two left sides.
FeasibilityResult feasible_pair(double c, double h, double L2, double D, std::pair<double, double> lambda_range,
                                double d_rate, std::optional<ExtraCondition> extra = std::nullopt);

/// Boundary curve of the KPP-Fisher stability domain; c_sharp(0) = 2 sqrt 2.
double c_sharp(double h);

/// min over lambda in (0, c) of lambda^2 - c lambda + 1 + e^{ch(1 - lambda)} < 0.
bool in_domain(double h, double c);

/// n + 1 samples (h, c_sharp(h)) uniformly on [h_lo, h_hi]; n = 0 gives one row.
std::vector<std::pair<double, double>> emit_curve(double h_lo, double h_hi, int n);

}  // namespace wavephase
