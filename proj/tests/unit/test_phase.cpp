#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "wavephase/charroots.hpp"
#include "wavephase/core/error.hpp"
#include "wavephase/phase.hpp"

using namespace wavephase;

namespace {

struct Fixture {
    ModelSpec model = make_model("nicholson", {{"p", 2.0}, {"h", 1.0}});
    double c = 0.83255461115769776 + 0.5;
    RealRoots rr = real_roots(model, c);
    WaveProfile profile = compute_profile(model, c, default_xi_min(rr.lambda1, rr.lambda2), 70.0, 0.01);
    GridSpec grid;

    GridFunction shifted(double a, double noise = 0.0, unsigned seed = 0) const {
        std::mt19937 rng(seed);
        std::normal_distribution<double> n(0.0, 1.0);
        std::vector<double> v(grid.node_count());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = profile.eval(grid.x(i) + a) + noise * n(rng);
        return GridFunction(grid, std::move(v));
    }
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

}  // namespace

TEST_SUITE("phase") {

TEST_CASE("fit window") {
    const auto& f = fixture();
    const auto w = default_fit_window(f.profile);
    CHECK(w.first < w.second);
    CHECK(f.profile.eval(w.first) == doctest::Approx(0.1 * std::log(2.0)).epsilon(0.01));
}

TEST_CASE("exact shift recovery") {
    const auto& f = fixture();
    const auto w = default_fit_window(f.profile);
    CHECK(std::abs(fit_phase(f.shifted(0.3), f.profile, w) - 0.3) < 1e-6);
    CHECK(std::abs(fit_phase(f.shifted(0.0), f.profile, w)) < 1e-6);
    CHECK(std::abs(fit_phase(f.shifted(-1.7), f.profile, w) + 1.7) < 1e-6);
}

TEST_CASE("noisy shift recovery") {
    const auto& f = fixture();
    const auto w = default_fit_window(f.profile);
    double worst = 0.0;
    for (unsigned draw = 0; draw < 100; ++draw)
        worst = std::max(worst, std::abs(fit_phase(f.shifted(0.3, 1e-3, draw), f.profile, w) - 0.3));
    MESSAGE("max deviation over 100 draws: " << worst);
    CHECK(worst < 5e-3);
}

TEST_CASE("shift equivariance on whole cells") {
    const auto& f = fixture();
    const auto w = default_fit_window(f.profile);
    const auto base = f.shifted(0.137);
    const double a0 = fit_phase(base, f.profile, w);
    for (int cells : {1, 7, -12}) {
        std::vector<double> v(base.values.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const long j = static_cast<long>(i) + cells;
            v[i] = base.values[static_cast<std::size_t>(std::clamp(j, 0L, static_cast<long>(v.size()) - 1))];
        }
        const double a = fit_phase(GridFunction(f.grid, v), f.profile, w);
        CHECK(std::abs(a - (a0 + cells * f.grid.dx)) < 1e-6);
    }
}

TEST_CASE("fit errors") {
    const auto& f = fixture();
    CHECK_THROWS_AS(fit_phase(f.shifted(0.0), f.profile, {100.0, 101.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_phase(f.shifted(8.0), f.profile, default_fit_window(f.profile)), NumericalError);
}

TEST_CASE("weighted error") {
    const auto& f = fixture();
    const double lw = 0.45;
    CHECK(weighted_error(f.shifted(0.0), f.profile, 0.0, lw, -30.0) < 1e-10);
    CHECK(weighted_error(f.shifted(0.25), f.profile, 0.25, lw, -30.0) < 1e-7);

    const double K = 1e-3;
    std::vector<double> v(f.grid.node_count());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = f.grid.x(i);
        v[i] = f.profile.eval(x) + (x <= 0.0 ? K * std::exp(lw * x) : 0.0);
    }
    CHECK(weighted_error(GridFunction(f.grid, v), f.profile, 0.0, lw, -30.0) == doctest::Approx(K).epsilon(1e-6));
}

TEST_CASE("decay fit") {
    std::vector<double> t, e1, e2, e3;
    for (int k = 0; k <= 300; ++k) {
        const double s = 0.1 * k;
        t.push_back(s);
        e1.push_back(std::exp(-0.3 * s));
        e2.push_back(2.0 * std::exp(-0.3 * s) * (1.0 + 0.1 * std::sin(s)));
        e3.push_back(4e-3);
    }
    const auto a = decay_fit(t, e1, 1.0);
    CHECK(a.gamma == doctest::Approx(-0.3).epsilon(1e-12));
    CHECK(a.log_K == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    CHECK_FALSE(a.plateau);
    CHECK(std::abs(decay_fit(t, e2, 1.0).gamma + 0.3) < 0.02);
    const auto c = decay_fit(t, e3, 1.0);
    CHECK(std::abs(c.gamma) < 1e-12);
    CHECK(c.plateau);
    CHECK_THROWS_AS(decay_fit(t, e1, 29.5), std::invalid_argument);
    e1[50] = 0.0;
    CHECK_THROWS_AS(decay_fit(t, e1, 0.0), std::invalid_argument);
}

TEST_CASE("crossing counts") {
    const double h = 1.0;
    std::vector<double> t, flat, osc;
    const auto z1 = quasi_roots(1.3, h, 1).front().z;
    for (int k = 0; k <= 20 * 200; ++k) {
        const double s = k / 200.0;
        t.push_back(s);
        flat.push_back(0.1);
        osc.push_back(0.1 + std::exp(z1.real() * s) * std::cos(z1.imag() * s));
    }
    for (int n : crossing_count(t, flat, 0.1, h)) CHECK(n == 0);

    // zeros of cos(y t) are pi / y apart, and pi < y h < 2 pi, so each window of
    // length h holds one or two of them
    const auto counts = crossing_count(t, osc, 0.1, h);
    REQUIRE(counts.size() == 20);
    int total = 0, windows = 0;
    for (std::size_t w = 0; w < counts.size(); ++w) {
        if (std::exp(z1.real() * (w + 1.0)) < 10 * 1e-4) break;
        CHECK(counts[w] >= 1);
        CHECK(counts[w] <= 2);
        total += counts[w];
        ++windows;
    }
    REQUIRE(windows >= 3);
    CHECK(static_cast<double>(total) / windows == doctest::Approx(z1.imag() * h / std::numbers::pi).epsilon(0.35));

    // hysteresis: wiggles inside the band do not count
    std::vector<double> wiggle;
    for (double s : t) wiggle.push_back(0.1 + 5e-5 * std::sin(40.0 * s));
    for (int n : crossing_count(t, wiggle, 0.1, h)) CHECK(n == 0);

    std::vector<double> sparse_t = {0.0, 0.5, 1.0, 1.5, 2.0}, sparse_a(5, 0.0);
    CHECK_THROWS_AS(crossing_count(sparse_t, sparse_a, 0.0, h), std::invalid_argument);
}

}  // TEST_SUITE
