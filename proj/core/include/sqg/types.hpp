#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace sqg {

struct Vec2 {
    double x1 = 0.0;
    double x2 = 0.0;

    Vec2 operator+(Vec2 o) const { return {x1 + o.x1, x2 + o.x2}; }
    Vec2 operator-(Vec2 o) const { return {x1 - o.x1, x2 - o.x2}; }
    Vec2 operator*(double s) const { return {x1 * s, x2 * s}; }
    double norm() const { return std::hypot(x1, x2); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

// Bad input: config, resolution, probe placement.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// NaN, CFL breach, exhaustion without a clean stop, interpolation failure.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A claim check that the data can never legitimately violate.
struct ClaimViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sqg
