#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace wavephase {

/// A real bound that may be +/- infinity. The unbounded state is checked
/// before any arithmetic; value() on an unbounded bound throws.
class ExtendedReal {
public:
    static ExtendedReal finite(double v);
    static ExtendedReal plus_infinity();
    static ExtendedReal minus_infinity();

    bool is_finite() const { return kind_ == Kind::finite; }
    bool is_plus_infinity() const { return kind_ == Kind::plus_inf; }
    bool is_minus_infinity() const { return kind_ == Kind::minus_inf; }
    double value() const;

    /// Total order with -inf < every finite value < +inf.
    bool less_equal(const ExtendedReal& other) const;

private:
    enum class Kind { finite, plus_inf, minus_inf };
    ExtendedReal(Kind k, double v) : kind_(k), value_(v) {}
    Kind kind_;
    double value_;
};

enum class ModelKind { nicholson, kpp_fisher, custom };

/// f(u, v) = g(u) (kappa - v).
struct KppStructure {
    double kappa = 1.0;
    std::function<double(double)> g;
};

using Reaction = std::function<double(double, double)>;

/// Reaction term of u_t = u_xx + f(u(t,x), u(t-h,x)) with the constants that
/// the stability theory needs.
struct ModelSpec {
    std::string name;
    ModelKind kind = ModelKind::custom;
    Reaction f;
    double f1_00 = 0.0;  ///< df/du at (0,0)
    double f2_00 = 0.0;  ///< df/dv at (0,0)
    double L2 = 0.0;     ///< Lipschitz bound in the delayed argument
    double D = 0.0;      ///< monotonicity constant in the first argument
    ExtendedReal M1 = ExtendedReal::plus_infinity();
    ExtendedReal M2 = ExtendedReal::finite(0.0);
    ExtendedReal M3 = ExtendedReal::plus_infinity();
    double h = 0.0;
    std::optional<KppStructure> kpp;
    /// Positive equilibrium the wave connects to. Used only for sanity
    /// bounds and profile shooting, never imposed as a constraint.
    std::optional<double> u_plus;
    /// Nicholson birth-rate parameter, when applicable.
    std::optional<double> p;
};

using ParamMap = std::map<std::string, double>;

/// Build a preset. name: "nicholson" (needs p > 1, h >= 0) or "kpp_fisher"
/// (needs h >= 0; an optional c sets L2 = M1 = e^{ch}, otherwise the
/// monotone-wave constants L2 = M1 = 1 are used). "custom" is rejected here;
/// use make_custom_model.
ModelSpec make_model(const std::string& name, const ParamMap& params);

struct CustomConstants {
    double f1_00 = 0.0;
    double f2_00 = 0.0;
    double L2 = 0.0;
    double D = 0.0;
    double h = 0.0;
    ExtendedReal M1 = ExtendedReal::plus_infinity();
    ExtendedReal M2 = ExtendedReal::finite(0.0);
    ExtendedReal M3 = ExtendedReal::plus_infinity();
    std::optional<double> u_plus;
};

ModelSpec make_custom_model(const std::string& name, Reaction f, const CustomConstants& constants);

double eval_f(const ModelSpec& model, double u, double v);

/// Throws std::invalid_argument when the constant relations
/// L2 >= f2_00 >= 0, M2 <= 0 <= M1 <= M3 or h >= 0 fail.
void validate(const ModelSpec& model);

}  // namespace wavephase
