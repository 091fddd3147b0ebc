#pragma once

#include <cmath>

namespace streamnav {

/// Planar point or vector in meters (or m/s for velocities).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }
  friend constexpr Vec2 operator*(const Vec2& v, double s) { return {s * v.x, s * v.y}; }
  friend constexpr Vec2 operator/(const Vec2& v, double s) { return {v.x / s, v.y / s}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }
constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

/// Axis-aligned rectangle [x_min, x_max] x [y_min, y_max].
struct Box {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  constexpr bool degenerate() const { return !(x_max > x_min) || !(y_max > y_min); }

  friend constexpr bool operator==(const Box&, const Box&) = default;
};

}  // namespace streamnav
