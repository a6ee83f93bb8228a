#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "wavephase/charroots.hpp"
#include "wavephase/core/error.hpp"
#include "wavephase/pde.hpp"

using namespace wavephase;

namespace {

struct Setup {
    ModelSpec model;
    double c;
    RealRoots rr;
    std::shared_ptr<const WaveProfile> profile;
};

const Setup& nicholson() {
    static const Setup s = [] {
        Setup n;
        n.model = make_model("nicholson", {{"p", 2.0}, {"h", 1.0}});
        n.c = 0.83255461115769776 + 0.5;
        n.rr = real_roots(n.model, n.c);
        n.profile = std::make_shared<const WaveProfile>(
            compute_profile(n.model, n.c, default_xi_min(n.rr.lambda1, n.rr.lambda2), 70.0, 0.01));
        return n;
    }();
    return s;
}

SimConfig config(const Setup& s, double dx, std::function<double(double)> alpha0) {
    SimConfig cfg;
    cfg.model = s.model;
    cfg.c = s.c;
    cfg.grid.dx = dx;
    cfg.grid.dt = cfl_time_step(dx, s.model.h);
    cfg.profile = s.profile;
    cfg.alpha0 = std::move(alpha0);
    cfg.lambda1 = s.rr.lambda1;
    cfg.save_every = 0.5;
    return cfg;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double w = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]));
    return w;
}

}  // namespace

TEST_SUITE("pde") {

TEST_CASE("initial history") {
    const auto& n = nicholson();
    auto cfg = config(n, 0.1, [](double) { return 0.0; });
    const auto H = build_initial(cfg);
    CHECK(H.complete());
    CHECK(H.t_now() == 0.0);
    CHECK(H.t_oldest() == doctest::Approx(-1.0));
    for (const auto& [t, frame] : H.snapshots())
        for (std::size_t i = 0; i < frame.size(); i += 97) CHECK(frame[i] == n.profile->eval(cfg.grid.x(i)));

    auto alpha = [](double s) { return 0.2 * std::sin(std::numbers::pi * s); };
    cfg.alpha0 = alpha;
    const auto Hs = build_initial(cfg);
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::size_t> ks(0, Hs.delay_steps()), is(0, cfg.grid.node_count() - 1);
    const auto snaps = Hs.snapshots();
    for (int trial = 0; trial < 100; ++trial) {
        const auto& [s, frame] = snaps[ks(rng)];
        const std::size_t i = is(rng);
        CHECK(frame[i] == doctest::Approx(n.profile->eval(cfg.grid.x(i) + alpha(s))).epsilon(1e-15));
    }

    cfg.perturbation = Perturbation{0.01, 0.6, 0.0};
    const auto Hp = build_initial(cfg);
    for (const auto& [s, frame] : Hp.snapshots()) {
        for (std::size_t i = 0; i < frame.size(); i += 13) {
            const double x = cfg.grid.x(i);
            CHECK(std::abs(frame[i] - n.profile->eval(x + alpha(s))) <= 0.01 * std::exp(0.6 * x) * (1 + 1e-12));
            if (x > 0.0) CHECK(frame[i] == n.profile->eval(x + alpha(s)));
        }
    }

    auto short_cfg = cfg;
    short_cfg.profile = std::make_shared<const WaveProfile>(
        compute_profile(n.model, n.c, default_xi_min(n.rr.lambda1, n.rr.lambda2), 20.0, 0.01));
    CHECK_THROWS_AS(build_initial(short_cfg), RangeError);
}

TEST_CASE("boundary policy") {
    const double l1 = 0.4, dx = 0.05;
    std::vector<double> v(20);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(l1 * (-5.0 + dx * static_cast<double>(i)));
    const double left = v[0];
    v[0] = -1.0;
    v.back() = 99.0;
    boundary_policy(v, l1, dx);
    CHECK(v[0] == doctest::Approx(left).epsilon(1e-15));
    CHECK(v.back() == v[v.size() - 2]);

    // on the computed profile the left rule error sits far below 1e-10
    const auto& n = nicholson();
    const double x0 = -30.0 / n.rr.lambda1;
    const double rule = std::exp(-n.rr.lambda1 * dx) * n.profile->eval(x0 + dx);
    CHECK(std::abs(rule - n.profile->eval(x0)) < 1e-10);
}

TEST_CASE("unperturbed nicholson wave drifts only by discretization") {
    const auto& n = nicholson();
    auto cfg = config(n, 0.05, [](double) { return 0.0; });
    const auto tr = simulate(cfg, build_initial(cfg), 20.0);
    const auto& last = tr.frames.back();
    CHECK(tr.times.back() == doctest::Approx(20.0));
    double worst = 0.0;
    for (std::size_t i = 0; i < last.values.size(); ++i)
        worst = std::max(worst, std::abs(last.values[i] - n.profile->eval(cfg.grid.x(i))));
    CHECK(worst <= 5e-3);
    REQUIRE(tr.window);
    CHECK(tr.window->complete());
    CHECK(tr.window->t_now() == doctest::Approx(20.0));
}

TEST_CASE("KPP wave stays within the discretization envelope") {
    const double h = 0.5, c = 2.8;
    Setup k;
    k.model = make_model("kpp_fisher", {{"h", h}, {"c", c}});
    k.c = c;
    k.rr = real_roots(k.model, c);
    k.profile = std::make_shared<const WaveProfile>(
        compute_profile(k.model, c, default_xi_min(k.rr.lambda1, k.rr.lambda2), 70.0, 0.01));
    auto cfg = config(k, 0.05, [](double) { return 0.0; });
    const auto tr = simulate(cfg, build_initial(cfg), 20.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.frames.back().values.size(); ++i)
        worst = std::max(worst, std::abs(tr.frames.back().values[i] - k.profile->eval(cfg.grid.x(i))));
    CHECK(worst <= 5e-3);
}

TEST_CASE("self-convergence order in dx") {
    const auto& n = nicholson();
    auto alpha = [](double s) { return 0.2 * std::sin(std::numbers::pi * s); };
    std::vector<std::vector<double>> finals;
    for (double dx : {0.2, 0.1, 0.05}) {
        auto cfg = config(n, dx, alpha);
        cfg.save_every = 2.0;
        finals.push_back(simulate(cfg, build_initial(cfg), 2.0).frames.back().values);
    }
    // compare on the middle half at the coarse nodes
    auto diff = [&](const std::vector<double>& a, std::size_t ra, const std::vector<double>& b, std::size_t rb) {
        double w = 0.0;
        const std::size_t nodes = (a.size() - 1) / ra;
        for (std::size_t j = nodes / 4; j <= 3 * nodes / 4; ++j) w = std::max(w, std::abs(a[j * ra] - b[j * rb]));
        return w;
    };
    const double e1 = diff(finals[0], 1, finals[1], 2);
    const double e2 = diff(finals[1], 2, finals[2], 4);
    CHECK(std::log2(e1 / e2) >= 1.9);
}

TEST_CASE("translation equivariance by one cell") {
    const auto& n = nicholson();
    GridSpec g;
    g.x_min = -30.0;
    g.x_max = 30.0;
    g.dx = 0.1;
    g.dt = cfl_time_step(g.dx, 1.0);
    auto make = [&](double offset) {
        HistoryField H(g, 1.0);
        for (std::size_t k = 0; k <= H.delay_steps(); ++k) {
            const double s = -1.0 + static_cast<double>(k) * g.dt;
            std::vector<double> f(g.node_count());
            for (std::size_t i = 0; i < f.size(); ++i)
                f[i] = n.profile->eval(g.x(i) - offset + 0.1 * std::sin(3.0 * s));
            H.push(k == H.delay_steps() ? 0.0 : s, std::move(f));
        }
        return H;
    };
    SimConfig cfg;
    cfg.model = n.model;
    cfg.c = n.c;
    cfg.grid = g;
    cfg.lambda1 = n.rr.lambda1;
    cfg.save_every = 1.0;
    const double T = 0.25;
    const auto a = simulate(cfg, make(0.0), T).frames.back().values;
    const auto b = simulate(cfg, make(g.dx), T).frames.back().values;
    const std::size_t steps = static_cast<std::size_t>(std::llround(T / g.dt));
    const std::size_t reach = 2 * steps + static_cast<std::size_t>(std::ceil(n.c / g.dx)) + 4;
    double worst = 0.0;
    for (std::size_t i = reach; i + reach + 1 < a.size(); ++i) worst = std::max(worst, std::abs(b[i + 1] - a[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("h = 0 matches plain stepping") {
    const auto m = make_model("nicholson", {{"p", 2.0}, {"h", 0.0}});
    const double c = 3.0;
    const auto rr = real_roots(m, c);
    GridSpec g;
    g.x_min = -20.0;
    g.x_max = 20.0;
    g.dx = 0.1;
    g.dt = cfl_time_step(g.dx, 0.0);
    std::vector<double> v(g.node_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.7 / (1.0 + std::exp(-g.x(i)));
    HistoryField H(g, 0.0);
    H.push(0.0, v);
    SimConfig cfg;
    cfg.model = m;
    cfg.c = c;
    cfg.grid = g;
    cfg.lambda1 = rr.lambda1;
    cfg.save_every = 0.5;
    const double T = 0.5;
    const auto out = simulate(cfg, H, T).frames.back().values;

    const auto steps = static_cast<std::size_t>(std::ceil(T / g.dt - 1e-9));
    for (std::size_t s = 0; s < steps; ++s) {
        std::vector<double> next(v.size());
        for (std::size_t i = 1; i + 1 < v.size(); ++i) {
            const double lap = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (g.dx * g.dx);
            const double adv = (v[i + 1] - v[i - 1]) / (2.0 * g.dx);
            next[i] = v[i] + g.dt * (lap - c * adv + m.f(v[i], v[i]));
        }
        boundary_policy(next, rr.lambda1, g.dx);
        v = std::move(next);
    }
    CHECK(sup_diff(out, v) < 1e-14);
}

TEST_CASE("mass is conserved without reaction") {
    CustomConstants k;
    k.h = 0.5;
    const auto m = make_custom_model("zero", [](double, double) { return 0.0; }, k);
    GridSpec g;
    g.x_min = -30.0;
    g.x_max = 30.0;
    g.dx = 0.1;
    g.dt = cfl_time_step(g.dx, k.h);
    HistoryField H(g, k.h);
    for (std::size_t s = 0; s <= H.delay_steps(); ++s) {
        std::vector<double> f(g.node_count());
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(-g.x(i) * g.x(i));
        H.push(-k.h + static_cast<double>(s) * g.dt, std::move(f));
    }
    auto mass = [&](std::span<const double> v) {
        double total = 0.0;
        for (double x : v) total += x * g.dx;
        return total;
    };
    const double m0 = mass(H.current_frame());
    SimConfig cfg;
    cfg.model = m;
    cfg.c = 1.0;
    cfg.grid = g;
    cfg.lambda1 = 0.5;
    cfg.save_every = 1.0;
    const auto tr = simulate(cfg, std::move(H), 3.0);
    CHECK(std::abs(mass(tr.frames.back().values) - m0) < 1e-6);
    // -c v_x carries the Gaussian to the right with speed c
    const auto& f = tr.frames.back();
    const auto peak = std::max_element(f.values.begin(), f.values.end()) - f.values.begin();
    CHECK(f.grid.x(static_cast<std::size_t>(peak)) == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("positivity and the a-priori bound") {
    const auto& n = nicholson();
    auto cfg = config(n, 0.1, [](double s) { return 0.5 * std::sin(2.0 * std::numbers::pi * s); });
    cfg.perturbation = Perturbation{0.05, 0.5, 0.0};
    auto init = build_initial(cfg);
    double sup0 = 0.0;
    for (const auto& [s, f] : init.snapshots()) sup0 = std::max(sup0, *std::max_element(f.begin(), f.end()));
    const double bound = std::max(sup0, 2.0 / std::numbers::e + sup0);
    bool ok = true;
    simulate(cfg, std::move(init), 10.0, [&](double, const GridFunction& fr) {
        for (double v : fr.values)
            if (v < 0.0 || v > bound) ok = false;
        return true;
    });
    CHECK(ok);
}

TEST_CASE("simulation errors") {
    const auto& n = nicholson();
    auto cfg = config(n, 0.1, [](double) { return 0.0; });
    auto H = build_initial(cfg);
    auto bad = cfg;
    bad.grid.dt = 0.01;  // dx^2 / 4 = 0.0025
    CHECK_THROWS_AS(simulate(bad, H, 1.0), std::invalid_argument);

    CustomConstants k;
    k.h = 0.5;
    const auto wild = make_custom_model("wild", [](double u, double) { return 1e200 * u * u; }, k);
    GridSpec g;
    g.x_min = -5.0;
    g.x_max = 5.0;
    g.dx = 0.1;
    g.dt = cfl_time_step(g.dx, k.h);
    HistoryField W(g, k.h);
    for (std::size_t s = 0; s <= W.delay_steps(); ++s)
        W.push(-k.h + static_cast<double>(s) * g.dt, std::vector<double>(g.node_count(), 1.0));
    SimConfig wc;
    wc.model = wild;
    wc.c = 1.0;
    wc.grid = g;
    wc.lambda1 = 0.5;
    try {
        simulate(wc, std::move(W), 1.0);
        FAIL("blow-up not detected");
    } catch (const SimulationError& e) {
        CHECK(e.time > 0.0);
        CHECK(e.node > 0);
    }
}

}  // TEST_SUITE
