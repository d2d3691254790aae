#pragma once

// Articulated robot construction: two coupled-leg body segments plus an
// optional tail (rigid link, or five cable-modulated segments whose
// stiffness and rest shape follow the reel angle).

#include "tailsim/joints.hpp"
#include "tailsim/math.hpp"

#include <array>
#include <string>
#include <vector>

namespace tailsim {

struct Morphology {
  // geometry, m
  double body_length = 0.20;        // two segments
  double body_width = 0.07;
  double body_height = 0.035;
  double leg_length = 0.12;         // hip to foot tip
  double leg_fore_aft_splay = 0.045; // foot standoff ahead of the front hips / behind the rear
  double neutral_com_height = 0.05; // CoM height with legs neutral

  // servo ranges, deg
  double leg_horiz_min_deg = -25.0;
  double leg_horiz_max_deg = 30.0;
  double body_yaw_range_deg = 30.0;  // +-
  double leg_vert_range_deg = 30.0;  // see-saw total range (+- half)
  double leg_tip_lift = 0.04;        // tip lift at full see-saw throw

  // leg compliance
  double leg_spring_k_kgf_cm = 0.2;     // catalog spring constant
  double leg_spring_moment_arm = 0.01;  // m, spring attachment lever
  double leg_spring_damping = 0.002;    // N*m*s/rad
  double leg_bend_limit_deg = 50.0;

  // masses, kg
  double mass_front_segment = 0.150;
  double mass_rear_segment = 0.150;
  double mass_plate = 0.005;      // leg-pair yaw carrier
  double mass_rocker = 0.0215;    // see-saw crossbar with both upper legs
  double mass_lower_leg = 0.012;

  // servo model
  double servo_kp = 4.0;             // N*m/rad
  double servo_kd = 0.05;            // N*m*s/rad
  double servo_stall_torque = 0.39;  // N*m
  double servo_gear_drag = 0.005;    // N*m*s/rad, unpowered gearbox drag

  double contact_radius = 0.004;  // m, all contact sample spheres
};

enum class TailVariant { None, Rigid, Flexible };

struct TailKind {
  TailVariant variant = TailVariant::None;

  // flexible variant
  int segments = 5;
  double segment_length = 0.03;       // m
  double k_min = 0.002;               // N*m/rad, relaxed
  double k_max = 1.2;                 // N*m/rad, fully stiffened
  double joint_damping = 0.008;       // N*m*s/rad
  double joint_limit_deg = 60.0;
  double mount_height_offset = 0.04;  // connection box raises the attachment
  std::array<double, 5> base_rest_deg{20.0, -25.0, -25.0, 15.0, 15.0};
  double tip_rest_drop = 0.0;         // rest tip this far below ground: preload
  double mass_segment = 0.007;
  double mass_mount = 0.015;          // folded into the rear segment
  double friction_scale = 0.5;        // filleted tail surfaces slide easier than feet

  // rigid variant
  double rigid_length = 0.090;
  double rigid_width = 0.008;
  double rigid_thickness = 0.0035;
  double rigid_mass = 0.012;
  double rigid_mount_height = 0.02;  // above the rear box center
};

struct ReelState {
  double angle_deg = 0.0;  // clamped to [0, 90]
  double rate_deg_s = 0.0;
};

// The reel servo slews at a finite rate; 90 deg takes about 0.3 s.
inline constexpr double kReelMaxRateDegS = 300.0;

enum class ContactTag { FootFL, FootFR, FootRL, FootRR, Knee, Body, TailSegment, TailTip };

struct LinkDesc {
  std::string name;
  double mass = 0.0;
  Vec3 inertia_diag;  // about the link CoM, link axes
  Vec3 com_local;
  int parent_joint = -1;  // -1 for the base link
};

struct ContactPointDesc {
  int link = 0;
  Vec3 local;
  double radius = 0.004;
  ContactTag tag = ContactTag::Body;
  double friction_scale = 1.0;  // smooth filleted parts slide easier than feet
};

struct ServoMap {
  int front_horiz = -1;
  int front_vert = -1;
  int rear_horiz = -1;
  int rear_vert = -1;
  int body_yaw = -1;
  int tail_lateral = -1;  // rigid tail mount servo, held at neutral
};

struct ArticulatedRobot {
  Morphology morphology;
  TailKind tail;
  std::vector<LinkDesc> links;    // links[0] is the floating base (front segment)
  std::vector<JointSpec> joints;  // topologically ordered, parents first
  std::vector<ContactPointDesc> contact_points;
  ServoMap servos;

  double neutral_base_height = 0.0;  // base origin z with feet grounded
  double tail_mount_pitch_rad = 0.0; // solved so the stiff rest shape grounds the tip

  // per joint: links moved by it; per link: joints between it and the base
  std::vector<std::vector<int>> joint_subtree;
  std::vector<std::vector<int>> link_path;

  double total_mass() const;
  int foot_contact_index(ContactTag tag) const;  // index into contact_points
};

// Builds the articulated tree. Joint census:
//   5 servo DoF (2 horizontal, 2 vertical see-saw, 1 body yaw)
//   4 passive leg springs
//   tail: 0 (None) / 1 lateral servo (Rigid) / 5 cable-modulated (Flexible)
ArticulatedRobot build_robot(const Morphology& m, const TailKind& tail);

// See-saw coupling: one vertical servo drives both legs of a segment,
// (left, right) = (+angle, -angle).
std::pair<double, double> coupled_leg_lift(double vert_servo_angle);

// Torsional stiffness of the leg spring joint from its catalog linear
// constant: kgf/cm -> N/m, then k_theta = k_lin * r^2.
double leg_spring_linear_k(const Morphology& m);    // N/m
double leg_spring_torsional_k(const Morphology& m); // N*m/rad

// Fraction of the stiffening ramp covered at a reel angle: 0 below 55 deg,
// linear up to 1 at 90 deg.
double reel_ramp_fraction(double reel_angle_deg);

// Per-joint stiffness of the flexible tail at a reel angle; identical for
// all five joints and monotone non-decreasing in the angle.
double tail_joint_stiffness(const ReelState& reel, const TailKind& tail);

// Rest angles of the five tail joints: straight when relaxed, scaled toward
// the alternating-sign s-shape as the reel winds through the ramp.
std::array<double, 5> tail_rest_angles(const ReelState& reel, const TailKind& tail);

}  // namespace tailsim
