#pragma once

// Penalty contact with regularized Coulomb friction.

#include "tailsim/math.hpp"

namespace tailsim {

struct Material {
  double mu = 0.45;      // friction coefficient
  double k_c = 2500.0;   // N/m contact stiffness
  double c_c = 50.0;     // N*s/m contact damping
  double v_eps = 1.0e-3; // m/s friction regularization velocity
};

struct Contact {
  Vec3 point;            // world, m
  Vec3 normal;           // unit, away from the surface
  double penetration = 0.0;  // m, >= 0
  Vec3 rel_velocity;     // contact point velocity relative to the surface, m/s
  int body_id = -1;
  int material_id = 0;
};

// Penalty normal force plus tanh-regularized Coulomb friction.
//   F_n = max(0, k_c*delta - c_c*v_n)       with v_n = rel_velocity . normal
//   F_t = -mu*F_n*tanh(|v_t|/v_eps)*v_t_hat
// |F_t| <= mu*F_n holds by construction.
Vec3 contact_force(const Contact& contact, const Material& material);

// Normal component alone, with the damping coefficient capped so an explicit
// step of size dt on an effective mass m_eff cannot overshoot. Used by the
// stepper; equal to the contact_force normal part when m_eff is large.
double normal_force_capped(const Contact& contact, const Material& material,
                           double m_eff, double dt);

}  // namespace tailsim
