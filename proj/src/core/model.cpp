#include "wavephase/core/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wavephase {

ExtendedReal ExtendedReal::finite(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("ExtendedReal::finite needs a finite value");
    return ExtendedReal(Kind::finite, v);
}

ExtendedReal ExtendedReal::plus_infinity() { return ExtendedReal(Kind::plus_inf, 0.0); }

ExtendedReal ExtendedReal::minus_infinity() { return ExtendedReal(Kind::minus_inf, 0.0); }

double ExtendedReal::value() const {
    if (kind_ != Kind::finite) throw std::logic_error("value() on an unbounded ExtendedReal");
    return value_;
}

bool ExtendedReal::less_equal(const ExtendedReal& other) const {
    if (kind_ == Kind::minus_inf || other.kind_ == Kind::plus_inf) return true;
    if (kind_ == Kind::plus_inf || other.kind_ == Kind::minus_inf) return false;
    return value_ <= other.value_;
}

namespace {

double require(const ParamMap& params, const std::string& key, const std::string& model) {
    auto it = params.find(key);
    if (it == params.end()) throw std::invalid_argument(model + ": missing parameter '" + key + "'");
    return it->second;
}

void reject_unknown(const ParamMap& params, std::initializer_list<const char*> known,
                    const std::string& model) {
    for (const auto& [key, value] : params) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw std::invalid_argument(model + ": unknown parameter '" + key + "'");
    }
}

ModelSpec nicholson(const ParamMap& params) {
    reject_unknown(params, {"p", "h"}, "nicholson");
    const double p = require(params, "p", "nicholson");
    const double h = require(params, "h", "nicholson");
    if (!(p > 1.0)) throw std::invalid_argument("nicholson: p must exceed 1");
    if (!(h >= 0.0)) throw std::invalid_argument("nicholson: h must be non-negative");

    ModelSpec m;
    m.name = "nicholson";
    m.kind = ModelKind::nicholson;
    m.f = [p](double u, double v) { return -u + p * v * std::exp(-v); };
    m.f1_00 = -1.0;
    m.f2_00 = p;
    m.L2 = p;
    m.D = 1.0;
    // 0 <= phi <= sup b = p/e; solution bounds depend on the data.
    m.M1 = ExtendedReal::finite(p / std::exp(1.0));
    m.M2 = ExtendedReal::finite(0.0);
    m.M3 = ExtendedReal::plus_infinity();
    m.h = h;
    m.u_plus = std::log(p);
    m.p = p;
    return m;
}

ModelSpec kpp_fisher(const ParamMap& params) {
    reject_unknown(params, {"h", "c"}, "kpp_fisher");
    const double h = require(params, "h", "kpp_fisher");
    if (!(h >= 0.0)) throw std::invalid_argument("kpp_fisher: h must be non-negative");

    // Non-monotone waves: L2 = M1 = e^{ch}; without a speed fall back to the
    // monotone constants L2 = M1 = 1.
    double bound = 1.0;
    if (auto it = params.find("c"); it != params.end()) {
        if (!(it->second > 0.0)) throw std::invalid_argument("kpp_fisher: c must be positive");
        bound = std::exp(it->second * h);
    }

    ModelSpec m;
    m.name = "kpp_fisher";
    m.kind = ModelKind::kpp_fisher;
    m.f = [](double u, double v) { return u * (1.0 - v); };
    m.f1_00 = 1.0;
    m.f2_00 = 0.0;
    m.L2 = bound;
    m.D = -1.0;  // u0 >= 0 = M2
    m.M1 = ExtendedReal::finite(bound);
    m.M2 = ExtendedReal::finite(0.0);
    m.M3 = ExtendedReal::plus_infinity();
    m.h = h;
    m.kpp = KppStructure{1.0, [](double u) { return u; }};
    m.u_plus = 1.0;
    return m;
}

}  // namespace

ModelSpec make_model(const std::string& name, const ParamMap& params) {
    ModelSpec m;
    if (name == "nicholson") {
        m = nicholson(params);
    } else if (name == "kpp_fisher") {
        m = kpp_fisher(params);
    } else if (name == "custom") {
        throw std::invalid_argument("custom models need a reaction function; use make_custom_model");
    } else {
        throw std::invalid_argument("unknown model '" + name + "'");
    }
    validate(m);
    return m;
}

ModelSpec make_custom_model(const std::string& name, Reaction f, const CustomConstants& k) {
    if (!f) throw std::invalid_argument("custom model needs a reaction function");
    ModelSpec m;
    m.name = name;
    m.kind = ModelKind::custom;
    m.f = std::move(f);
    m.f1_00 = k.f1_00;
    m.f2_00 = k.f2_00;
    m.L2 = k.L2;
    m.D = k.D;
    m.M1 = k.M1;
    m.M2 = k.M2;
    m.M3 = k.M3;
    m.h = k.h;
    m.u_plus = k.u_plus;
    validate(m);
    return m;
}

double eval_f(const ModelSpec& model, double u, double v) { return model.f(u, v); }

void validate(const ModelSpec& m) {
    if (!m.f) throw std::invalid_argument(m.name + ": missing reaction function");
    if (!(m.h >= 0.0) || !std::isfinite(m.h)) throw std::invalid_argument(m.name + ": h must be >= 0");
    if (!(m.f2_00 >= 0.0)) throw std::invalid_argument(m.name + ": f2(0,0) must be >= 0");
    if (!(m.L2 >= m.f2_00)) throw std::invalid_argument(m.name + ": L2 must be >= f2(0,0)");
    const auto zero = ExtendedReal::finite(0.0);
    if (!m.M2.less_equal(zero) || !zero.less_equal(m.M1) || !m.M1.less_equal(m.M3))
        throw std::invalid_argument(m.name + ": bounds must satisfy M2 <= 0 <= M1 <= M3");
}

}  // namespace wavephase
