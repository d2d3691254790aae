#include "tailsim/controller.hpp"

#include <algorithm>
#include <cmath>

namespace tailsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

double deg2rad(double d) { return d * kPi / 180.0; }

// Symmetric triangle wave: -1 at phase 0, +1 at 0.5, back to -1 at 1.
double triangle(double phase) {
  return phase < 0.5 ? 4.0 * phase - 1.0 : 3.0 - 4.0 * phase;
}

// Square wave (+1 on the first half-cycle) with cosine-blended transitions
// of total width w centered on phase 0 and 0.5. Antisymmetric under a
// half-period shift by construction.
double blended_square(double phase, double w) {
  const double half = phase < 0.5 ? phase : phase - 0.5;
  const double sign = phase < 0.5 ? 1.0 : -1.0;
  double v;
  if (w <= 0.0) {
    v = 1.0;
  } else if (half < w / 2.0) {
    v = std::sin(kPi * half / w);
  } else if (half > 0.5 - w / 2.0) {
    v = std::sin(kPi * (0.5 - half) / w);
  } else {
    v = 1.0;
  }
  return sign * v;
}

}  // namespace

double gait_phase(double t, double period) {
  const double p = t / period - std::floor(t / period);
  return p < 1.0 ? p : 0.0;  // guard against floor rounding at exact multiples
}

ServoCommandSet servo_targets(double phase, const GaitParams& params) {
  double p = phase - std::floor(phase);
  if (params.swap_diagonals) {
    p = p < 0.5 ? p + 0.5 : p - 0.5;
  }

  const double a_h = deg2rad(params.horiz_amplitude_deg);
  const double a_v = deg2rad(params.vert_amplitude_deg);
  const double a_b = deg2rad(params.body_undulation_deg);

  ServoCommandSet cmd;
  // Stance legs sweep rearward while swing legs recover forward. A positive
  // plate yaw moves the left foot rearward, so the front plate tracks +tri
  // while front-left is in stance; the rear plate mirrors it.
  cmd.front_horiz = a_h * triangle(p);
  cmd.rear_horiz = -a_h * triangle(p);
  // Positive see-saw roll raises the left foot: press front-left / lift
  // front-right during [0, 0.5), mirrored on the rear segment.
  const double sq = blended_square(p, params.blend_fraction);
  cmd.front_vert = -a_v * sq;
  cmd.rear_vert = a_v * sq;
  cmd.body_yaw = a_b * std::sin(2.0 * kPi * p);

  cmd.front_horiz = std::clamp(cmd.front_horiz, deg2rad(params.horiz_min_deg), deg2rad(params.horiz_max_deg));
  cmd.rear_horiz = std::clamp(cmd.rear_horiz, deg2rad(params.horiz_min_deg), deg2rad(params.horiz_max_deg));
  cmd.front_vert = std::clamp(cmd.front_vert, -deg2rad(params.vert_limit_deg), deg2rad(params.vert_limit_deg));
  cmd.rear_vert = std::clamp(cmd.rear_vert, -deg2rad(params.vert_limit_deg), deg2rad(params.vert_limit_deg));
  cmd.body_yaw = std::clamp(cmd.body_yaw, -deg2rad(params.body_yaw_limit_deg), deg2rad(params.body_yaw_limit_deg));
  return cmd;
}

double tail_command(double phase, const TailPolicy& policy, const SensorReadings& sensors) {
  switch (policy.kind) {
    case TailPolicyKind::Relaxed:
      return policy.relaxed_angle_deg;
    case TailPolicyKind::ConstantStiff:
      return policy.stiff_angle_deg;
    case TailPolicyKind::Periodic: {
      const double p = phase - std::floor(phase);
      bool stiff;
      if (policy.stiffen_phase <= policy.relax_phase) {
        stiff = p >= policy.stiffen_phase && p < policy.relax_phase;
      } else {
        // window wraps through phase 0
        stiff = p >= policy.stiffen_phase || p < policy.relax_phase;
      }
      return stiff ? policy.stiff_angle_deg : policy.relaxed_angle_deg;
    }
    case TailPolicyKind::TouchTriggered:
      // Lost tip contact for a while usually means the tail is snagged or
      // hanging past an edge; relaxing lets it conform and re-seat.
      return sensors.time_without_contact >= policy.touch_hold ? policy.relaxed_angle_deg
                                                               : policy.stiff_angle_deg;
  }
  return policy.relaxed_angle_deg;
}

ServoCommandSet controller_step(double t, const GaitParams& params, const TailPolicy& policy,
                                const SensorReadings& sensors) {
  const double phase = gait_phase(t, params.period);
  ServoCommandSet cmd = servo_targets(phase, params);
  cmd.reel_target_deg = tail_command(phase, policy, sensors);
  return cmd;
}

}  // namespace tailsim
