#include "tailsim/contact.hpp"

#include <algorithm>
#include <cmath>

namespace tailsim {

Vec3 contact_force(const Contact& contact, const Material& material) {
  if (contact.penetration <= 0.0) {
    return {};
  }
  const double v_n = contact.rel_velocity.dot(contact.normal);
  const double f_n = std::max(0.0, material.k_c * contact.penetration - material.c_c * v_n);
  if (f_n == 0.0) {
    return {};
  }
  const Vec3 v_t = contact.rel_velocity - contact.normal * v_n;
  const double v_t_mag = v_t.norm();
  if (v_t_mag == 0.0) {
    return contact.normal * f_n;
  }
  const double f_t = material.mu * f_n * std::tanh(v_t_mag / material.v_eps);
  return contact.normal * f_n - v_t * (f_t / v_t_mag);
}

double normal_force_capped(const Contact& contact, const Material& material,
                           double m_eff, double dt) {
  if (contact.penetration <= 0.0) {
    return 0.0;
  }
  const double c_c = std::min(material.c_c, 0.5 * m_eff / dt);
  const double v_n = contact.rel_velocity.dot(contact.normal);
  return std::max(0.0, material.k_c * contact.penetration - c_c * v_n);
}

}  // namespace tailsim
