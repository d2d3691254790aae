#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tailsim/controller.hpp"

#include <cmath>

using namespace tailsim;

namespace {
constexpr double kPi = 3.14159265358979323846;
double deg(double rad) { return rad * 180.0 / kPi; }
}  // namespace

TEST_CASE("gait phase wraps") {
  CHECK(gait_phase(0.0, 2.0) == 0.0);
  CHECK(gait_phase(3.0, 2.0) == doctest::Approx(0.5));
  CHECK(gait_phase(2.0, 2.0) == 0.0);   // exact wraparound
  CHECK(gait_phase(10.0, 2.0) == 0.0);
  CHECK(gait_phase(0.25, 1.0) == doctest::Approx(0.25));
}

TEST_CASE("phase 0.25 puts front-left down, front-right lifted") {
  const GaitParams params;
  const ServoCommandSet cmd = servo_targets(0.25, params);
  // negative see-saw roll presses the left leg down / lifts the right
  CHECK(cmd.front_vert < 0.0);
  CHECK(deg(-cmd.front_vert) == doctest::Approx(params.vert_amplitude_deg));
  // rear mirrors: rear-right pressed
  CHECK(cmd.rear_vert > 0.0);
}

TEST_CASE("half-period mirror symmetry") {
  const GaitParams params;
  for (double p = 0.0; p < 0.5; p += 0.01) {
    const ServoCommandSet a = servo_targets(p, params);
    const ServoCommandSet b = servo_targets(p + 0.5, params);
    CHECK(a.front_vert == doctest::Approx(-b.front_vert).epsilon(1e-12));
    CHECK(a.rear_vert == doctest::Approx(-b.rear_vert).epsilon(1e-12));
    CHECK(a.front_horiz == doctest::Approx(-b.front_horiz).epsilon(1e-12));
    CHECK(a.rear_horiz == doctest::Approx(-b.rear_horiz).epsilon(1e-12));
    CHECK(a.body_yaw == doctest::Approx(-b.body_yaw).epsilon(1e-10));
  }
}

TEST_CASE("phase 0 and phase just below 1 agree within the blend") {
  const GaitParams params;
  const ServoCommandSet a = servo_targets(0.0, params);
  const ServoCommandSet b = servo_targets(1.0 - 1e-9, params);
  CHECK(a.front_vert == doctest::Approx(b.front_vert).epsilon(1e-6));
  CHECK(a.front_horiz == doctest::Approx(b.front_horiz).epsilon(1e-6));
  CHECK(a.body_yaw == doctest::Approx(b.body_yaw).epsilon(1e-6));
}

TEST_CASE("all commands stay within servo limits over the cycle") {
  GaitParams params;
  params.horiz_amplitude_deg = 20.0;
  params.vert_amplitude_deg = 15.0;
  params.body_undulation_deg = 30.0;  // at the limit
  for (int i = 0; i < 10000; ++i) {
    const double p = i / 10000.0;
    const ServoCommandSet c = servo_targets(p, params);
    CHECK(deg(c.front_horiz) >= params.horiz_min_deg - 1e-9);
    CHECK(deg(c.front_horiz) <= params.horiz_max_deg + 1e-9);
    CHECK(deg(c.rear_horiz) >= params.horiz_min_deg - 1e-9);
    CHECK(deg(c.rear_horiz) <= params.horiz_max_deg + 1e-9);
    CHECK(std::abs(deg(c.front_vert)) <= params.vert_limit_deg + 1e-9);
    CHECK(std::abs(deg(c.rear_vert)) <= params.vert_limit_deg + 1e-9);
    CHECK(std::abs(deg(c.body_yaw)) <= params.body_yaw_limit_deg + 1e-9);
  }
}

TEST_CASE("tail policies") {
  const TailPolicy stiff{TailPolicyKind::ConstantStiff};
  const TailPolicy relaxed{TailPolicyKind::Relaxed};
  TailPolicy periodic;
  periodic.kind = TailPolicyKind::Periodic;
  const SensorReadings none;

  for (double p : {0.0, 0.1, 0.4, 0.77, 0.99}) {
    CHECK(tail_command(p, stiff, none) == 90.0);
    CHECK(tail_command(p, relaxed, none) == 0.0);
  }

  // stiff window [0.75, 1.25) mod 1
  CHECK(tail_command(0.0, periodic, none) == 90.0);
  CHECK(tail_command(0.2, periodic, none) == 90.0);
  CHECK(tail_command(0.25, periodic, none) == 0.0);
  CHECK(tail_command(0.5, periodic, none) == 0.0);
  CHECK(tail_command(0.74, periodic, none) == 0.0);
  CHECK(tail_command(0.75, periodic, none) == 90.0);
}

TEST_CASE("periodic policy is a two-level square wave switching only at the set phases") {
  TailPolicy periodic;
  periodic.kind = TailPolicyKind::Periodic;
  const SensorReadings none;
  int transitions = 0;
  double prev = tail_command(0.0, periodic, none);
  const int n = 40000;
  for (int i = 1; i <= n; ++i) {
    const double p = static_cast<double>(i) / n;
    const double v = tail_command(p - 1e-12, periodic, none);
    CHECK((v == periodic.stiff_angle_deg || v == periodic.relaxed_angle_deg));
    if (v != prev) {
      ++transitions;
      const double frac = p;
      const bool at_relax = std::abs(frac - periodic.relax_phase) < 1e-3;
      const bool at_stiffen = std::abs(frac - periodic.stiffen_phase) < 1e-3;
      CHECK((at_relax || at_stiffen));
    }
    prev = v;
  }
  CHECK(transitions == 2);
}

TEST_CASE("touch policy relaxes only after sustained loss of contact") {
  TailPolicy touch;
  touch.kind = TailPolicyKind::TouchTriggered;
  SensorReadings s;
  s.tail_tip_force = 1.0;
  s.time_without_contact = 0.0;
  CHECK(tail_command(0.3, touch, s) == touch.stiff_angle_deg);
  s.time_without_contact = 0.05;  // below the 0.1 s hold
  CHECK(tail_command(0.3, touch, s) == touch.stiff_angle_deg);
  s.time_without_contact = 0.11;
  CHECK(tail_command(0.3, touch, s) == touch.relaxed_angle_deg);
}

TEST_CASE("controller_step composes and is periodic") {
  const GaitParams params;
  TailPolicy periodic;
  periodic.kind = TailPolicyKind::Periodic;
  const SensorReadings none;

  const ServoCommandSet a = controller_step(0.0, params, periodic, none);
  const ServoCommandSet direct = servo_targets(0.0, params);
  CHECK(a.front_horiz == direct.front_horiz);
  CHECK(a.reel_target_deg == tail_command(0.0, periodic, none));

  for (double t : {0.3, 1.1, 1.9}) {
    const ServoCommandSet x = controller_step(t, params, periodic, none);
    const ServoCommandSet y = controller_step(t + params.period, params, periodic, none);
    CHECK(x.front_horiz == doctest::Approx(y.front_horiz).epsilon(1e-12));
    CHECK(x.front_vert == doctest::Approx(y.front_vert).epsilon(1e-12));
    CHECK(x.reel_target_deg == y.reel_target_deg);
  }

  // open-loop policies give a constant reel target over a cycle sweep
  const TailPolicy relaxed{TailPolicyKind::Relaxed};
  for (double t = 0.0; t < 2.0; t += 0.01) {
    CHECK(controller_step(t, params, relaxed, none).reel_target_deg == 0.0);
  }
}
