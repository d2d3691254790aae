#include "tailsim/math.hpp"

namespace tailsim {

Vec3 rotate_vector(const Quat& q, const Vec3& v) {
  // q * (0,v) * q^-1 expanded via the double-cross form.
  const Vec3 u{q.x, q.y, q.z};
  const Vec3 t = u.cross(v) * 2.0;
  return v + t * q.w + u.cross(t);
}

Quat quat_integrate(const Quat& q, const Vec3& omega, double dt) {
  const double angle = omega.norm() * dt;
  if (angle == 0.0) {
    return q.normalized();
  }
  const Quat dq = Quat::from_axis_angle(omega, angle);
  return (dq * q).normalized();
}

SemiImplicitResult semi_implicit_step(const Vec3& x, const Vec3& v, const Vec3& a, double dt) {
  SemiImplicitResult r;
  r.velocity = v + a * dt;
  r.position = x + r.velocity * dt;
  return r;
}

EulerZYX to_euler_zyx(const Quat& q) {
  EulerZYX e;
  const double siny = 2.0 * (q.w * q.z + q.x * q.y);
  const double cosy = 1.0 - 2.0 * (q.y * q.y + q.z * q.z);
  e.yaw = std::atan2(siny, cosy);

  double sinp = 2.0 * (q.w * q.y - q.z * q.x);
  if (sinp > 1.0) sinp = 1.0;
  if (sinp < -1.0) sinp = -1.0;
  e.pitch = std::asin(sinp);

  const double sinr = 2.0 * (q.w * q.x + q.y * q.z);
  const double cosr = 1.0 - 2.0 * (q.x * q.x + q.y * q.y);
  e.roll = std::atan2(sinr, cosr);
  return e;
}

}  // namespace tailsim
