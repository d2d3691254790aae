#include "tailsim/joints.hpp"

#include <algorithm>

namespace tailsim {

double servo_torque(double target, const JointState& state, double kp, double kd,
                    double max_torque) {
  const double tau = kp * (target - state.angle) - kd * state.rate;
  return std::clamp(tau, -max_torque, max_torque);
}

double spring_torque(const JointState& state, const JointSpec& spec) {
  return -spec.stiffness * (state.angle - spec.rest_angle) - spec.damping * state.rate;
}

double limit_stiffness(const JointSpec& spec) {
  // stiffness field holds PD gains for servos, not a spring constant
  const double k = spec.kind == JointKind::Servo ? 0.0 : spec.stiffness;
  return std::max(50.0 * k, 5.0);
}

double joint_limit_elastic(const JointState& state, const JointSpec& spec) {
  const double k_lim = limit_stiffness(spec);
  if (state.angle > spec.limit_max) {
    return -k_lim * (state.angle - spec.limit_max);
  }
  if (state.angle < spec.limit_min) {
    return -k_lim * (state.angle - spec.limit_min);
  }
  return 0.0;
}

double joint_limit_torque(const JointState& state, const JointSpec& spec) {
  const double elastic = joint_limit_elastic(state, spec);
  if (elastic == 0.0) {
    return 0.0;
  }
  const double c_lim = 0.02 * limit_stiffness(spec);
  const bool moving_out = (state.angle > spec.limit_max && state.rate > 0.0) ||
                          (state.angle < spec.limit_min && state.rate < 0.0);
  return moving_out ? elastic - c_lim * state.rate : elastic;
}

}  // namespace tailsim
