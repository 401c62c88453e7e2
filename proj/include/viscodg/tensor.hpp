#pragma once

#include <array>
#include <cmath>

namespace viscodg {

// Plain 2D vectors and 2x2 tensors. Mat2[i][j] is row i, column j; for a
// gradient, grad[i][j] = d v_i / d x_j.
using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

inline constexpr Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline constexpr Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline constexpr Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }

inline constexpr double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }

inline constexpr Mat2 operator+(const Mat2& a, const Mat2& b)
{
    return {{{a[0][0] + b[0][0], a[0][1] + b[0][1]}, {a[1][0] + b[1][0], a[1][1] + b[1][1]}}};
}
inline constexpr Mat2 operator-(const Mat2& a, const Mat2& b)
{
    return {{{a[0][0] - b[0][0], a[0][1] - b[0][1]}, {a[1][0] - b[1][0], a[1][1] - b[1][1]}}};
}
inline constexpr Mat2 operator*(double s, const Mat2& a)
{
    return {{{s * a[0][0], s * a[0][1]}, {s * a[1][0], s * a[1][1]}}};
}

inline constexpr Vec2 operator*(const Mat2& a, const Vec2& v)
{
    return {a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]};
}

inline constexpr Mat2 outer(const Vec2& a, const Vec2& b)
{
    return {{{a[0] * b[0], a[0] * b[1]}, {a[1] * b[0], a[1] * b[1]}}};
}

/// Double contraction A : B.
inline constexpr double ddot(const Mat2& a, const Mat2& b)
{
    return a[0][0] * b[0][0] + a[0][1] * b[0][1] + a[1][0] * b[1][0] + a[1][1] * b[1][1];
}

inline constexpr double trace(const Mat2& a) { return a[0][0] + a[1][1]; }

inline constexpr Mat2 transpose(const Mat2& a) { return {{{a[0][0], a[1][0]}, {a[0][1], a[1][1]}}}; }

/// Symmetric part; applied to a displacement gradient this is the small strain.
inline constexpr Mat2 sym(const Mat2& a)
{
    const double off = 0.5 * (a[0][1] + a[1][0]);
    return {{{a[0][0], off}, {off, a[1][1]}}};
}

inline constexpr Mat2 identity2() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }

/// Value and gradient of a vector field at a point.
struct FieldSample {
    Vec2 value{};
    Mat2 gradient{};
};

}  // namespace viscodg
