#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tailsim/math.hpp"
#include "tailsim/rng.hpp"

#include <cmath>

using namespace tailsim;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("rotate_vector identity and axis cases") {
  const Vec3 v{1, 2, 3};
  const Vec3 r = rotate_vector(Quat{}, v);
  CHECK(r.x == doctest::Approx(1.0));
  CHECK(r.y == doctest::Approx(2.0));
  CHECK(r.z == doctest::Approx(3.0));

  const Quat qz = Quat::from_axis_angle({0, 0, 1}, kPi / 2);
  const Vec3 rz = rotate_vector(qz, {1, 0, 0});
  CHECK(rz.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rz.y == doctest::Approx(1.0));
  CHECK(rz.z == doctest::Approx(0.0).epsilon(1e-12));

  const Quat qx = Quat::from_axis_angle({1, 0, 0}, kPi);
  const Vec3 rx = rotate_vector(qx, {0, 1, 0});
  CHECK(rx.y == doctest::Approx(-1.0));
}

TEST_CASE("rotation preserves vector norm") {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Vec3 axis{rng.symmetric(1), rng.symmetric(1), rng.symmetric(1)};
    if (axis.norm() < 1e-6) continue;
    const Quat q = Quat::from_axis_angle(axis, rng.symmetric(kPi));
    const Vec3 v{rng.symmetric(10), rng.symmetric(10), rng.symmetric(10)};
    const double rel = std::abs(rotate_vector(q, v).norm() - v.norm()) / (v.norm() + 1e-300);
    CHECK(rel < 1e-12);
  }
}

TEST_CASE("quat_integrate basics") {
  const Quat q0;
  const Quat still = quat_integrate(q0, {0, 0, 0}, 1e-3);
  CHECK(still.w == doctest::Approx(1.0));

  const Quat q1 = Quat::from_axis_angle({0.3, -0.5, 0.8}, 0.9);
  const Quat q1b = quat_integrate(q1, {0, 0, 0}, 1e-3);
  CHECK(q1b.w == doctest::Approx(q1.w));
  CHECK(q1b.x == doctest::Approx(q1.x));
}

TEST_CASE("quat_integrate accumulates a constant rate exactly") {
  // omega = pi rad/s about z for 1 s in 1000 substeps -> 180 degrees
  Quat q;
  const Vec3 omega{0, 0, kPi};
  for (int i = 0; i < 1000; ++i) {
    q = quat_integrate(q, omega, 1e-3);
  }
  const Vec3 r = rotate_vector(q, {1, 0, 0});
  CHECK(std::abs(std::atan2(r.y, r.x)) == doctest::Approx(kPi).epsilon(1e-4));
  CHECK(std::abs(q.norm() - 1.0) < 1e-9);
}

TEST_CASE("quat_integrate renormalizes every step") {
  Rng rng(3);
  Quat q = Quat::from_axis_angle({1, 1, 1}, 0.5);
  for (int i = 0; i < 5000; ++i) {
    q = quat_integrate(q, {rng.symmetric(20), rng.symmetric(20), rng.symmetric(20)}, 1e-3);
    CHECK(std::abs(q.norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("semi_implicit_step one-step arithmetic") {
  const auto r = semi_implicit_step({0, 0, 0}, {0, 0, 0}, {0, 0, -9.81}, 1e-3);
  CHECK(r.velocity.z == doctest::Approx(-0.00981));
  CHECK(r.position.z == doctest::Approx(-9.81e-6));
}

TEST_CASE("semi_implicit_step uniform motion with zero acceleration") {
  const auto r = semi_implicit_step({1, 2, 3}, {4, -5, 6}, {0, 0, 0}, 1e-3);
  CHECK(r.position.x == 1.0 + 4.0 * 1e-3);
  CHECK(r.position.y == 2.0 - 5.0 * 1e-3);
  CHECK(r.velocity.x == 4.0);
}

TEST_CASE("free fall from rest for 1 s lands near the closed form") {
  Vec3 x, v;
  const Vec3 g{0, 0, -9.81};
  for (int i = 0; i < 1000; ++i) {
    const auto r = semi_implicit_step(x, v, g, 1e-3);
    x = r.position;
    v = r.velocity;
  }
  // exact discrete sum: -g dt^2 n(n+1)/2; closed form 1/2 g t^2 = 4.905
  CHECK(x.z == doctest::Approx(-4.905).epsilon(0.005));
  CHECK(x.z == doctest::Approx(-9.81e-6 * 1000.0 * 1001.0 / 2.0).epsilon(1e-12));
}

TEST_CASE("semi_implicit_step is bit-deterministic") {
  const Vec3 x{0.123456, -9.5, 2.0};
  const Vec3 v{-3.25, 0.5, 1e-7};
  const Vec3 a{0.1, -9.81, 4.0};
  const auto r1 = semi_implicit_step(x, v, a, 1e-3);
  const auto r2 = semi_implicit_step(x, v, a, 1e-3);
  CHECK(r1.position.x == r2.position.x);
  CHECK(r1.position.y == r2.position.y);
  CHECK(r1.position.z == r2.position.z);
  CHECK(r1.velocity.x == r2.velocity.x);
}

TEST_CASE("euler angles roundtrip for yaw") {
  const Quat q = Quat::from_axis_angle({0, 0, 1}, 0.7);
  const EulerZYX e = to_euler_zyx(q);
  CHECK(e.yaw == doctest::Approx(0.7));
  CHECK(e.pitch == doctest::Approx(0.0).epsilon(1e-12));
}
