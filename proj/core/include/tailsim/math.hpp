#pragma once

// Minimal 3D math used by the simulator: vectors, unit quaternions, poses
// and the semi-implicit Euler update. No general-purpose linear algebra.

#include <cmath>

namespace tailsim {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  constexpr double squared_norm() const { return dot(*this); }
  Vec3 normalized() const {
    const double n = norm();
    return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{};
  }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Unit quaternion (w, x, y, z). Public operations keep |q| within 1e-9 of 1.
struct Quat {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quat() = default;
  constexpr Quat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

  static Quat from_axis_angle(const Vec3& axis, double angle) {
    const Vec3 a = axis.normalized();
    const double h = 0.5 * angle;
    const double s = std::sin(h);
    return {std::cos(h), a.x * s, a.y * s, a.z * s};
  }

  constexpr Quat conjugate() const { return {w, -x, -y, -z}; }

  Quat operator*(const Quat& q) const {
    return {w * q.w - x * q.x - y * q.y - z * q.z,
            w * q.x + x * q.w + y * q.z - z * q.y,
            w * q.y - x * q.z + y * q.w + z * q.x,
            w * q.z + x * q.y - y * q.x + z * q.w};
  }

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Quat normalized() const {
    const double n = norm();
    return {w / n, x / n, y / n, z / n};
  }
};

// Rotates v by q (q assumed unit). Preserves |v| to machine precision.
Vec3 rotate_vector(const Quat& q, const Vec3& v);

// Advances a unit quaternion by a world-frame angular velocity over dt using
// the exact exponential map, then renormalizes.
Quat quat_integrate(const Quat& q, const Vec3& omega, double dt);

struct SemiImplicitResult {
  Vec3 velocity;
  Vec3 position;
};

// Symplectic Euler update, exactly in this order:
//   v' = v + a*dt
//   x' = x + v'*dt
SemiImplicitResult semi_implicit_step(const Vec3& x, const Vec3& v, const Vec3& a, double dt);

struct Pose {
  Vec3 position;
  Quat orientation;

  Vec3 transform(const Vec3& local) const {
    return position + rotate_vector(orientation, local);
  }
};

// Intrinsic Z-Y-X Euler angles (yaw, pitch, roll) of a unit quaternion.
struct EulerZYX {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
};
EulerZYX to_euler_zyx(const Quat& q);

}  // namespace tailsim
