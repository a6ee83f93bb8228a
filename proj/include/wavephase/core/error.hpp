#pragma once

#include <stdexcept>
#include <string>

namespace wavephase {

// Precondition violations raise std::invalid_argument. Everything that can go
// wrong while computing raises one of the types below.

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Speed at or below the minimal speed: the characteristic function has no
/// positive real zero.
class SubcriticalSpeed : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The two positive zeros coincide within tolerance.
class CriticalSpeed : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Argument-principle count on a strip rectangle differed from one.
class LocalizationError : public NumericalError {
public:
    LocalizationError(const std::string& what, double re_lo, double re_hi,
                      double im_lo, double im_hi, int winding)
        : NumericalError(what), re_lo(re_lo), re_hi(re_hi), im_lo(im_lo), im_hi(im_hi),
          winding(winding) {}

    double re_lo, re_hi, im_lo, im_hi;
    int winding;
};

class ProfileError : public NumericalError {
public:
    explicit ProfileError(const std::string& what, double suggested_xi_min = 0.0)
        : NumericalError(what), suggested_xi_min(suggested_xi_min) {}

    double suggested_xi_min;
};

class SimulationError : public NumericalError {
public:
    SimulationError(const std::string& what, double t, std::size_t node)
        : NumericalError(what), time(t), node(node) {}

    double time;
    std::size_t node;
};

class RangeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace wavephase
