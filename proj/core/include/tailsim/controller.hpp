#pragma once

// Open-loop diagonal-gait generator with body undulation, plus the tail
// stiffness policies. Everything here is a pure function of time (and, for
// the touch policy, of the supplied sensor readings).
//
// Phase convention (fixed): front-left and rear-right feet are in stance
// during phase [0, 0.5); front-right and rear-left during [0.5, 1).

#include "tailsim/math.hpp"

namespace tailsim {

struct GaitParams {
  double period = 2.0;  // s
  double duty = 0.5;    // diagonal pairs split the cycle evenly
  double horiz_amplitude_deg = 20.0;
  double vert_amplitude_deg = 15.0;
  double body_undulation_deg = 12.0;
  double blend_fraction = 0.1;  // cosine blend width of see-saw flips, in cycles
  bool swap_diagonals = false;  // flips which diagonal leads at phase 0

  // servo ranges the commands are clamped to
  double horiz_min_deg = -25.0;
  double horiz_max_deg = 30.0;
  double vert_limit_deg = 15.0;
  double body_yaw_limit_deg = 30.0;
};

enum class TailPolicyKind { Relaxed, ConstantStiff, Periodic, TouchTriggered };

struct TailPolicy {
  TailPolicyKind kind = TailPolicyKind::Relaxed;
  double stiffen_phase = 0.75;  // mid-swing of the front-left leg
  double relax_phase = 0.25;    // mid-swing of the front-right leg
  double stiff_angle_deg = 90.0;
  double relaxed_angle_deg = 0.0;
  double touch_threshold = 0.05;  // N
  double touch_hold = 0.1;        // s without tip contact before relaxing
};

struct ServoCommandSet {
  double front_horiz = 0.0;  // rad
  double front_vert = 0.0;
  double rear_horiz = 0.0;
  double rear_vert = 0.0;
  double body_yaw = 0.0;
  double reel_target_deg = 0.0;
};

struct SensorReadings {
  double tail_tip_force = 0.0;      // N, normal force at the tip sphere
  double time_without_contact = 0.0;  // s since tip force was last above threshold
};

// Fractional position within the gait cycle, in [0, 1).
double gait_phase(double t, double period);

// Leg and body-yaw targets for a phase. Stance legs retract along a triangle
// wave, the see-saw flips with cosine blends at phase 0 and 0.5, and the body
// yaw undulates sinusoidally.
ServoCommandSet servo_targets(double phase, const GaitParams& params);

// Reel angle commanded by a tail policy.
double tail_command(double phase, const TailPolicy& policy, const SensorReadings& sensors);

// servo_targets + tail_command at time t.
ServoCommandSet controller_step(double t, const GaitParams& params, const TailPolicy& policy,
                                const SensorReadings& sensors);

}  // namespace tailsim
