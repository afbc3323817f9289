#pragma once

#include <cmath>

namespace simbiped {

// Point or vector in the sagittal plane: x forward, z up.
struct Vec2 {
  double x = 0.0;
  double z = 0.0;

  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    z += o.z;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    z -= o.z;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.z + b.z}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.z - b.z}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.z}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.z}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.z}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.z * b.z; }
// Scalar cross product a x b.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.z - a.z * b.x; }
// w x r for an angular rate w.
constexpr Vec2 cross(double w, Vec2 r) { return {-w * r.z, w * r.x}; }
inline double length(Vec2 a) { return std::hypot(a.x, a.z); }

// Counterclockwise rotation by `angle`.
inline Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.z, s * v.x + c * v.z};
}

}  // namespace simbiped
