#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "wavephase/core/grid.hpp"
#include "wavephase/core/history.hpp"
#include "wavephase/core/model.hpp"

using namespace wavephase;

TEST_SUITE("core") {

TEST_CASE("nicholson preset constants") {
    const auto m = make_model("nicholson", {{"p", 2.0}, {"h", 1.0}});
    CHECK(m.f2_00 == 2.0);
    CHECK(m.f1_00 == -1.0);
    CHECK(m.L2 == 2.0);
    CHECK(m.D == 1.0);
    CHECK(m.h == 1.0);
    CHECK(eval_f(m, 0.0, 0.0) == 0.0);
    CHECK(eval_f(m, 1.0, 1.0) == doctest::Approx(-1.0 + 2.0 * std::exp(-1.0)).epsilon(1e-15));
    REQUIRE(m.u_plus);
    CHECK(*m.u_plus == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("kpp_fisher preset constants") {
    const auto m0 = make_model("kpp_fisher", {{"h", 0.0}});
    CHECK(m0.L2 == 1.0);
    CHECK(m0.M1.value() == 1.0);
    CHECK(m0.D == -1.0);
    CHECK(m0.M3.is_plus_infinity());
    CHECK(eval_f(m0, 2.0, 1.0) == 0.0);

    const auto m = make_model("kpp_fisher", {{"h", 1.0}, {"c", 3.0}});
    CHECK(m.L2 == doctest::Approx(std::exp(3.0)).epsilon(1e-15));
    CHECK(m.M1.value() == doctest::Approx(std::exp(3.0)).epsilon(1e-15));
}

TEST_CASE("make_model rejects bad input") {
    CHECK_THROWS_AS(make_model("logistic", {{"h", 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_model("nicholson", {{"p", 1.0}, {"h", 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_model("nicholson", {{"p", 2.0}, {"h", -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_model("nicholson", {{"p", 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_model("nicholson", {{"p", 2.0}, {"h", 1.0}, {"q", 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_model("custom", {}), std::invalid_argument);
}

TEST_CASE("preset partials match finite differences") {
    for (const auto& m : {make_model("nicholson", {{"p", 2.0}, {"h", 1.0}}),
                          make_model("nicholson", {{"p", 7.5}, {"h", 0.3}}),
                          make_model("kpp_fisher", {{"h", 0.5}, {"c", 2.5}})}) {
        const double e = 1e-6;
        const double d1 = (eval_f(m, e, 0.0) - eval_f(m, -e, 0.0)) / (2 * e);
        const double d2 = (eval_f(m, 0.0, e) - eval_f(m, 0.0, -e)) / (2 * e);
        CHECK(std::abs(d1 - m.f1_00) < 1e-5);
        CHECK(std::abs(d2 - m.f2_00) < 1e-5);
        CHECK(m.L2 >= m.f2_00);
        CHECK(m.M2.less_equal(ExtendedReal::finite(0.0)));
        CHECK(ExtendedReal::finite(0.0).less_equal(m.M1));
        CHECK(m.M1.less_equal(m.M3));
    }
}

TEST_CASE("custom model validation") {
    CustomConstants k;
    k.f1_00 = 0.0;
    k.f2_00 = 1.0;
    k.L2 = 1.0;
    k.h = 1.0;
    const auto m = make_custom_model("shift", [](double, double v) { return v; }, k);
    CHECK(eval_f(m, 3.0, 2.0) == 2.0);
    k.L2 = 0.5;
    CHECK_THROWS_AS(make_custom_model("bad", [](double, double v) { return v; }, k), std::invalid_argument);
    CHECK_THROWS_AS(make_custom_model("none", nullptr, CustomConstants{}), std::invalid_argument);
}

TEST_CASE("extended reals") {
    CHECK(ExtendedReal::minus_infinity().less_equal(ExtendedReal::finite(-1e300)));
    CHECK_FALSE(ExtendedReal::plus_infinity().less_equal(ExtendedReal::finite(1e300)));
    CHECK_THROWS(ExtendedReal::plus_infinity().value());
}

TEST_CASE("grid validation and time step") {
    GridSpec g;
    CHECK(g.node_count() == 2401);
    CHECK(cfl_time_step(0.05, 1.0) == 6.25e-4);
    CHECK(g.delay_steps(1.0) == 1600);
    CHECK_NOTHROW(g.validate(1.0));
    g.dt = 7e-4;
    CHECK_THROWS_AS(g.validate(1.0), std::invalid_argument);
    g.dt = 1.0 / 1000.0;
    CHECK_THROWS_AS(g.validate(1.0), std::invalid_argument);  // CFL
    g.dt = cfl_time_step(0.05, 0.7);
    CHECK_NOTHROW(g.validate(0.7));
    CHECK(0.7 / g.dt == doctest::Approx(std::round(0.7 / g.dt)));
    g.x_max = g.x_min;
    CHECK_THROWS_AS(g.validate(1.0), std::invalid_argument);
}

TEST_CASE("lagrange4 reproduces cubics") {
    GridSpec g;
    g.x_min = -3.0;
    g.x_max = 3.0;
    g.dx = 0.1;
    std::vector<double> v(g.node_count());
    auto cubic = [](double x) { return 0.3 * x * x * x - x * x + 2.0 * x - 0.5; };
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = cubic(g.x(i));
    const GridFunction f(g, v);
    for (double x : {-3.0, -2.97, -1.234, 0.05, 1.999, 2.95, 3.0}) CHECK(std::abs(f.eval(x) - cubic(x)) < 1e-12);
    CHECK(f.eval(g.x(17)) == v[17]);
}

TEST_CASE("simpson is exact for cubics") {
    std::vector<double> v;
    for (int i = 0; i <= 10; ++i) {
        const double s = -1.0 + i * 0.1;
        v.push_back(s * s * s + s * s);
    }
    CHECK(simpson(v, 0.1) == doctest::Approx(-0.25 + 1.0 / 3.0).epsilon(1e-14));
    v.pop_back();
    CHECK_THROWS_AS(simpson(v, 0.1), std::invalid_argument);
}

TEST_CASE("history field window and lookup") {
    GridSpec g;
    g.x_min = -1.0;
    g.x_max = 1.0;
    g.dx = 0.25;
    g.dt = 0.25;
    HistoryField H(g, 1.0);
    CHECK(H.capacity() == 5);
    for (int k = 0; k <= 4; ++k) {
        std::vector<double> f(g.node_count());
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = k * 10.0 + static_cast<double>(i);
        H.push(-1.0 + 0.25 * k, f);
    }
    CHECK(H.complete());
    CHECK(H.t_now() == 0.0);
    CHECK(H.delayed_frame()[3] == 3.0);
    CHECK(H.eval(-0.5, g.x(4)) == 24.0);
    // linear data is reproduced off the nodes
    CHECK(H.eval(-0.5, 0.1) == doctest::Approx(20.0 + 4.4).epsilon(1e-13));

    std::vector<double> next(g.node_count(), 7.0);
    H.push(0.25, next);
    CHECK(H.t_oldest() == -0.75);
    CHECK(H.current_frame()[0] == 7.0);
    CHECK(H.delayed_frame()[0] == 10.0);
    CHECK_THROWS(H.push(0.75, next));
    CHECK_THROWS(H.frame_at(-1.0));
    const auto snaps = H.snapshots();
    REQUIRE(snaps.size() == 5);
    CHECK(snaps.front().first == -0.75);
    CHECK(snaps.back().first == 0.25);
}

}  // TEST_SUITE
