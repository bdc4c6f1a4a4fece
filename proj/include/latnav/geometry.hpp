#pragma once

#include <cmath>
#include <numbers>
#include <ostream>

namespace latnav {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
  constexpr double squaredNorm() const { return x * x + y * y; }
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

inline std::ostream& operator<<(std::ostream& os, const Vec2& v) {
  return os << "(" << v.x << ", " << v.y << ")";
}

/// Wraps an angle into [0, 2π).
inline double wrapAngle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

/// Signed smallest difference b - a, in (-π, π].
inline double angleDiff(double a, double b) {
  double d = std::fmod(b - a, kTwoPi);
  if (d > std::numbers::pi) d -= kTwoPi;
  if (d <= -std::numbers::pi) d += kTwoPi;
  return d;
}

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // radians, [0, 2π)

  Vec2 position() const { return {x, y}; }
  bool operator==(const Pose&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, const Pose& p) {
  return os << "(" << p.x << ", " << p.y << ", " << p.theta << ")";
}

/// Rotates v by angle a.
inline Vec2 rotate(const Vec2& v, double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

}  // namespace latnav
