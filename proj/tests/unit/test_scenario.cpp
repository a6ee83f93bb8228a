#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wavephase/charroots.hpp"
#include "wavephase/domain.hpp"
#include "wavephase/scenario.hpp"

using namespace wavephase;
using nlohmann::json;

TEST_SUITE("scenario") {

TEST_CASE("alpha0 shorthands") {
    const auto c = parse_alpha0(std::string("constant:0.25"));
    CHECK(c.function(1.0)(-0.3) == 0.25);

    const auto l = parse_alpha0(std::string("linear:2:0.5"));
    CHECK(l.function(1.0)(-0.5) == doctest::Approx(-0.5));

    const auto s = parse_alpha0(std::string("sin:0.2"));
    CHECK(s.function(2.0)(-1.0) == doctest::Approx(-0.2));
    CHECK(parse_alpha0(std::string("sinusoidal:0.2")).amplitude == 0.2);

    const auto t = parse_alpha0(std::string("table:-1=0,-0.5=1,0=0"));
    const auto f = t.function(1.0);
    CHECK(f(-0.75) == doctest::Approx(0.5));
    CHECK(f(-0.5) == 1.0);
    CHECK(f(-2.0) == 0.0);

    for (const char* bad : {"", "constant", "constant:x", "wave:1", "linear:1", "table:1", "table:0=1,0=2"})
        CHECK_THROWS_AS(parse_alpha0(std::string(bad)), ConfigError);
}

TEST_CASE("alpha0 objects and round trip") {
    const auto d = parse_alpha0(json{{"kind", "linear"}, {"slope", 0.5}, {"intercept", -0.1}});
    CHECK(d.function(1.0)(-1.0) == doctest::Approx(-0.6));
    CHECK_THROWS_AS(parse_alpha0(json{{"kind", "linear"}, {"slop", 0.5}}), ConfigError);
    CHECK_THROWS_AS(parse_alpha0(json{{"value", 0.5}}), ConfigError);

    for (const char* text : {"constant:0.3", "linear:1.5:-2", "sin:0.2", "table:-1=0.1,0=0.4"}) {
        const auto a = parse_alpha0(std::string(text));
        const auto b = parse_alpha0(a.str());
        for (double s : {-1.0, -0.6, -0.2, 0.0}) CHECK(a.function(1.0)(s) == b.function(1.0)(s));
    }
}

TEST_CASE("scenario parsing") {
    const json j = {
        {"model", {{"name", "kpp_fisher"}, {"params", {{"h", 0.5}}}}},
        {"wave", {{"c_sharp_plus", 0.3}}},
        {"phase", {{"alpha0", "sin:0.2"}}},
        {"grid", {{"dx", 0.1}}},
        {"run", {{"T", 5.0}}},
        {"verify", {{"alpha_tol", 0.05}}},
    };
    const auto cfg = parse_scenario(j);
    CHECK(cfg.model.name == "kpp_fisher");
    CHECK(cfg.grid.dx == 0.1);
    CHECK(cfg.grid.x_min == -60.0);
    CHECK(cfg.run.T == 5.0);
    CHECK(cfg.verify.alpha_tol == 0.05);
    CHECK_FALSE(cfg.phase.amplitude_form);

    const double c = resolve_speed(cfg);
    CHECK(c == doctest::Approx(c_sharp(0.5) + 0.3).epsilon(1e-14));
    const auto m = resolve_model(cfg, c);
    CHECK(m.L2 == doctest::Approx(std::exp(c * 0.5)).epsilon(1e-14));

    const auto back = parse_scenario(to_json(cfg));
    CHECK(to_json(back) == to_json(cfg));
}

TEST_CASE("speed selection") {
    ScenarioConfig cfg;
    cfg.model.params = {{"p", 2.0}, {"h", 1.0}};
    CHECK(resolve_speed(cfg) == doctest::Approx(0.83255461115769776 + 0.5).epsilon(1e-10));
    cfg.wave.c_star_plus = 1.0;
    CHECK(resolve_speed(cfg) == doctest::Approx(1.83255461115769776).epsilon(1e-10));
    cfg.wave.c = 4.0;
    CHECK(resolve_speed(cfg) == 4.0);
}

TEST_CASE("scenario rejects bad input") {
    CHECK_THROWS_AS(parse_scenario(json{{"modle", json::object()}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario(json{{"grid", {{"dx", -1.0}}}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario(json{{"grid", {{"dx", "small"}}}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario(json{{"grid", {{"x_min", 5.0}, {"x_max", 1.0}}}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario(json{{"run", {{"T", 0.0}}}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario(json{{"wave", {{"c", 3.0}, {"c_star_plus", 0.5}}}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario(json{{"phase", {{"form", "angle"}}}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario(json{{"verify", {{"tolerance", 1.0}}}}), ConfigError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ConfigError);
}

}  // TEST_SUITE
