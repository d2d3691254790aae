#pragma once

// Joint descriptions and the torque laws applied at each 1-DoF joint:
// servo PD (clamped at stall), passive/cable springs, soft limit stops.

#include "tailsim/math.hpp"

#include <string>

namespace tailsim {

enum class JointKind { Servo, PassiveSpring, CableModulated };

struct JointSpec {
  JointKind kind = JointKind::PassiveSpring;
  std::string name;

  int parent_link = -1;
  int child_link = -1;
  Vec3 pivot;  // joint origin in the parent link frame
  Quat frame_rotation;  // fixed mount rotation applied before the joint angle
  Vec3 axis{0.0, 0.0, 1.0};  // rotation axis after frame_rotation, unit

  double limit_min = 0.0;  // rad
  double limit_max = 0.0;  // rad
  double stiffness = 0.0;  // N*m/rad; PD kp for Servo joints
  double damping = 0.0;    // N*m*s/rad; PD kd for Servo joints
  double rest_angle = 0.0; // rad
  double max_torque = 0.0; // N*m; > 0 required for Servo joints
};

struct JointState {
  double angle = 0.0;  // rad
  double rate = 0.0;   // rad/s
};

// PD torque toward `target`, clamped to +-max_torque (servo stall).
double servo_torque(double target, const JointState& state, double kp, double kd,
                    double max_torque);

// Linear torsional spring with viscous damping about rest_angle.
// Not meaningful for Servo joints.
double spring_torque(const JointState& state, const JointSpec& spec);

// Stiffness of the one-sided limit stop for a joint.
double limit_stiffness(const JointSpec& spec);

// Restoring-spring part of the limit stop alone (zero inside the range).
double joint_limit_elastic(const JointState& state, const JointSpec& spec);

// Zero inside [limit_min, limit_max]; outside, a stiff one-sided
// spring-damper pushing back toward the range. Damping acts only on
// outward motion so the stop never injects energy.
double joint_limit_torque(const JointState& state, const JointSpec& spec);

}  // namespace tailsim
