#include "wavephase/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wavephase/core/error.hpp"

namespace wavephase {

namespace {

constexpr int kCells = 64;
constexpr int kRefinements = 3;
constexpr double kGammaFloor = -10.0;

double domain_function(double h, double c, double lambda) {
    return lambda * lambda - c * lambda + 1.0 + std::exp(c * h * (1.0 - lambda));
}

// Implicit equation of the boundary curve. 1/(ch) - sqrt(c^2/4 + 1/(ch)^2 - 1)
// is written without the cancellation near c = 2.
double implicit_curve(double h, double c) {
    const double ch = c * h;
    const double root = std::sqrt(c * c / 4.0 + 1.0 / (ch * ch) - 1.0);
    const double lead = -(c * c / 4.0 - 1.0) / (1.0 / ch + root);
    return -2.0 + std::sqrt(c * c * c * c * h * h - 4.0 * c * c * h * h + 4.0) -
           ch * ch * std::exp(ch * (1.0 - c / 2.0 + lead));
}

}  // namespace

double stability_expression(double c, double h, double L2, double D, double lambda, double gamma) {
    return lambda * lambda - c * lambda - D - gamma + L2 * std::exp(-lambda * c * h) * std::exp(-gamma * h);
}

FeasibilityResult feasible_pair(double c, double h, double L2, double D, std::pair<double, double> range,
                                double d_rate, std::optional<ExtraCondition> extra) {
    if (!(range.second > range.first)) throw std::invalid_argument("feasible_pair: empty lambda range");
    if (!(d_rate < 0.0)) throw std::invalid_argument("feasible_pair: d_rate must be negative");

    auto value = [&](double l, double g) {
        double v = stability_expression(c, h, L2, D, l, g);
        if (extra) {
            const double ls = std::min({extra->lambda_star, l, 2.0 * extra->lambda1});
            v = std::max(v, ls * ls - c * ls - D - g);
        }
        return v;
    };

    const double g_lo_all = std::max(d_rate, kGammaFloor);
    double l_lo = range.first, l_hi = range.second;
    double g_lo = g_lo_all, g_hi = 0.0;
    FeasibilityResult best{false, 0.0, 0.0, std::numeric_limits<double>::infinity()};
    for (int round = 0; round <= kRefinements; ++round) {
        const double dl = (l_hi - l_lo) / kCells;
        const double dg = (g_hi - g_lo) / kCells;
        for (int i = 0; i < kCells; ++i) {
            const double l = l_lo + (i + 0.5) * dl;
            for (int j = 0; j < kCells; ++j) {
                const double g = g_lo + (j + 0.5) * dg;
                const double v = value(l, g);
                if (v < best.margin) best = {false, l, g, v};
            }
        }
        // shrink to the best cell and its neighbours, clipped to the open box
        l_lo = std::max(range.first, best.lambda - 1.5 * dl);
        l_hi = std::min(range.second, best.lambda + 1.5 * dl);
        g_lo = std::max(g_lo_all, best.gamma - 1.5 * dg);
        g_hi = std::min(0.0, best.gamma + 1.5 * dg);
    }
    best.feasible = best.margin < 0.0;
    return best;
}

double c_sharp(double h) {
    if (!(h >= 0.0)) throw std::invalid_argument("c_sharp: h must be >= 0");
    const double top = 2.0 * std::sqrt(2.0);
    if (h == 0.0) return top;
    double lo = 2.0 + 1e-9, hi = top;
    double flo = implicit_curve(h, lo);
    const double fhi = implicit_curve(h, hi);
    if ((flo > 0.0) == (fhi > 0.0)) throw NumericalError("c_sharp: no sign change on [2, 2 sqrt 2]");
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        const double fm = implicit_curve(h, mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

bool in_domain(double h, double c) {
    if (!(h >= 0.0) || !(c > 0.0)) throw std::invalid_argument("in_domain: need h >= 0, c > 0");
    // convex in lambda, so golden section finds the minimum
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0, b = c;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = domain_function(h, c, x1), f2 = domain_function(h, c, x2);
    for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = domain_function(h, c, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = domain_function(h, c, x2);
        }
    }
    return std::min(f1, f2) < -1e-12;
}

std::vector<std::pair<double, double>> emit_curve(double h_lo, double h_hi, int n) {
    if (!(h_lo >= 0.0) || h_hi < h_lo || n < 0) throw std::invalid_argument("emit_curve: bad range");
    if (n > 0 && !(h_hi > h_lo)) throw std::invalid_argument("emit_curve: need h_lo < h_hi");
    std::vector<std::pair<double, double>> rows;
    for (int i = 0; i <= n; ++i) {
        const double h = n == 0 ? h_lo : h_lo + (h_hi - h_lo) * i / n;
        rows.emplace_back(h, c_sharp(h));
    }
    return rows;
}

}  // namespace wavephase
