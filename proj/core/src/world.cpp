#include "tailsim/world.hpp"

#include "tailsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tailsim {

namespace {

constexpr double kMinJointInertia = 1.0e-7;  // kg*m^2, guards degenerate subtrees
constexpr double kStateBound = 1.0e6;

// Friction anchor spring. Stiffness and damping are capped per contact by
// the carrying link's mass so the explicit step stays stable.
constexpr double kTangentStiffness = 2000.0;  // N/m
constexpr double kTangentDamping = 2.0;       // N*s/m

double tangent_stiffness(double m_eff, double dt) {
  return std::min(kTangentStiffness, 0.2 * m_eff / (dt * dt));
}

double tangent_damping(double m_eff, double dt) {
  return std::min(kTangentDamping, 0.5 * m_eff / dt);
}

// Symmetric 3x3 for the composite inertia; just enough algebra for the
// angular update, nothing general-purpose.
struct Sym3 {
  double xx = 0, yy = 0, zz = 0, xy = 0, xz = 0, yz = 0;

  void add_point_mass(double m, const Vec3& d) {
    const double r2 = d.squared_norm();
    xx += m * (r2 - d.x * d.x);
    yy += m * (r2 - d.y * d.y);
    zz += m * (r2 - d.z * d.z);
    xy -= m * d.x * d.y;
    xz -= m * d.x * d.z;
    yz -= m * d.y * d.z;
  }

  // R * diag * R^T for a rotation given as a quaternion.
  void add_rotated_diag(const Quat& q, const Vec3& diag) {
    const Vec3 cx = rotate_vector(q, {1, 0, 0});
    const Vec3 cy = rotate_vector(q, {0, 1, 0});
    const Vec3 cz = rotate_vector(q, {0, 0, 1});
    xx += diag.x * cx.x * cx.x + diag.y * cy.x * cy.x + diag.z * cz.x * cz.x;
    yy += diag.x * cx.y * cx.y + diag.y * cy.y * cy.y + diag.z * cz.y * cz.y;
    zz += diag.x * cx.z * cx.z + diag.y * cy.z * cy.z + diag.z * cz.z * cz.z;
    xy += diag.x * cx.x * cx.y + diag.y * cy.x * cy.y + diag.z * cz.x * cz.y;
    xz += diag.x * cx.x * cx.z + diag.y * cy.x * cy.z + diag.z * cz.x * cz.z;
    yz += diag.x * cx.y * cx.z + diag.y * cy.y * cy.z + diag.z * cz.y * cz.z;
  }

  Vec3 multiply(const Vec3& v) const {
    return {xx * v.x + xy * v.y + xz * v.z, xy * v.x + yy * v.y + yz * v.z,
            xz * v.x + yz * v.y + zz * v.z};
  }

  Vec3 solve(const Vec3& b) const {
    const double a00 = xx, a01 = xy, a02 = xz, a11 = yy, a12 = yz, a22 = zz;
    const double c00 = a11 * a22 - a12 * a12;
    const double c01 = a02 * a12 - a01 * a22;
    const double c02 = a01 * a12 - a02 * a11;
    const double det = a00 * c00 + a01 * c01 + a02 * c02;
    const double inv = 1.0 / det;
    const double c11 = a00 * a22 - a02 * a02;
    const double c12 = a01 * a02 - a00 * a12;
    const double c22 = a00 * a11 - a01 * a01;
    return {(c00 * b.x + c01 * b.y + c02 * b.z) * inv,
            (c01 * b.x + c11 * b.y + c12 * b.z) * inv,
            (c02 * b.x + c12 * b.y + c22 * b.z) * inv};
  }
};

struct PointForce {
  int link;
  Vec3 pos;
  Vec3 force;
};

struct RelFrame {
  Pose pose;     // relative to the base frame
  Vec3 lin_vel;  // of the origin, base frame, base held fixed
  Vec3 ang_vel;
};

void relative_tree(const ArticulatedRobot& robot, const WorldState& world,
                   std::vector<RelFrame>& frames) {
  frames.resize(robot.links.size());
  frames[0] = RelFrame{};
  for (std::size_t j = 0; j < robot.joints.size(); ++j) {
    const JointSpec& spec = robot.joints[j];
    const JointState& js = world.joints[j];
    const RelFrame& parent = frames[static_cast<std::size_t>(spec.parent_link)];

    const Vec3 arm = rotate_vector(parent.pose.orientation, spec.pivot);
    const Quat mount = parent.pose.orientation * spec.frame_rotation;
    const Vec3 axis = rotate_vector(mount, spec.axis);

    RelFrame f;
    f.pose.position = parent.pose.position + arm;
    f.pose.orientation = (mount * Quat::from_axis_angle(spec.axis, js.angle)).normalized();
    f.ang_vel = parent.ang_vel + axis * js.rate;
    f.lin_vel = parent.lin_vel + parent.ang_vel.cross(arm);
    frames[static_cast<std::size_t>(spec.child_link)] = f;
  }
}

}  // namespace

Vec3 point_velocity(const LinkKinematics& link, const Vec3& point) {
  return link.lin_vel + link.ang_vel.cross(point - link.pose.position);
}

Kinematics compute_kinematics(const ArticulatedRobot& robot, const WorldState& world) {
  std::vector<RelFrame> rel;
  relative_tree(robot, world, rel);

  const double total = robot.total_mass();
  Vec3 com_rel, com_rel_dot;
  for (std::size_t l = 0; l < robot.links.size(); ++l) {
    const Vec3 c = rel[l].pose.transform(robot.links[l].com_local);
    com_rel += c * robot.links[l].mass;
    com_rel_dot += (rel[l].lin_vel + rel[l].ang_vel.cross(c - rel[l].pose.position)) * robot.links[l].mass;
  }
  com_rel = com_rel / total;
  com_rel_dot = com_rel_dot / total;

  const Quat& qb = world.base_orientation;
  const Vec3& wb = world.base_angular_velocity;
  const Vec3 base_pos = world.com_position - rotate_vector(qb, com_rel);
  const Vec3 base_vel =
      world.com_velocity - wb.cross(rotate_vector(qb, com_rel)) - rotate_vector(qb, com_rel_dot);

  Kinematics kin;
  kin.links.resize(robot.links.size());
  kin.com_world = world.com_position;
  for (std::size_t l = 0; l < robot.links.size(); ++l) {
    LinkKinematics& k = kin.links[l];
    const Vec3 rel_pos = rotate_vector(qb, rel[l].pose.position);
    k.pose.position = base_pos + rel_pos;
    k.pose.orientation = (qb * rel[l].pose.orientation).normalized();
    k.ang_vel = wb + rotate_vector(qb, rel[l].ang_vel);
    k.lin_vel = base_vel + wb.cross(rel_pos) + rotate_vector(qb, rel[l].lin_vel);
    k.com_world = k.pose.transform(robot.links[l].com_local);
    k.com_vel = point_velocity(k, k.com_world);
  }
  return kin;
}

WorldState init_world(const ArticulatedRobot& robot, const Terrain& terrain, const SpawnPose& spawn) {
  WorldState world;
  world.joints.assign(robot.joints.size(), JointState{});
  world.base_orientation = Quat::from_axis_angle({0, 0, 1}, spawn.yaw);
  world.com_position = {spawn.x, spawn.y, 0.0};
  world.com_velocity = {};
  world.base_angular_velocity = {};

  // Provisional placement at the neutral height, then raise/lower so the
  // lowest contact sphere clears the terrain by `spawn.clearance`.
  world.com_position.z = robot.neutral_base_height + robot.morphology.neutral_com_height;
  // com_position is authoritative; compute_kinematics resolves the base pose.
  // First pass: find where the CoM sits relative to the base at neutral.
  {
    Kinematics kin = compute_kinematics(robot, world);
    // shift so the base ends up at neutral height over z=0
    const double base_z = kin.links[0].pose.position.z;
    world.com_position.z += robot.neutral_base_height - base_z;
  }
  Kinematics kin = compute_kinematics(robot, world);
  double min_clear = 1.0e30;
  for (const auto& cp : robot.contact_points) {
    const Vec3 center = kin.links[static_cast<std::size_t>(cp.link)].pose.transform(cp.local);
    const double d = support_distance(terrain, center) - cp.radius;
    min_clear = std::min(min_clear, d);
  }
  world.com_position.z += spawn.clearance - min_clear;

  kin = compute_kinematics(robot, world);
  world.bodies.resize(robot.links.size());
  for (std::size_t l = 0; l < robot.links.size(); ++l) {
    world.bodies[l] = BodyState{kin.links[l].pose, kin.links[l].lin_vel, kin.links[l].ang_vel,
                                robot.links[l].mass, robot.links[l].inertia_diag};
  }
  world.anchors.assign(2 * robot.contact_points.size(), FrictionAnchor{});
  return world;
}

void step_world(WorldState& world, const ArticulatedRobot& robot,
                const std::optional<ServoCommandSet>& commands, const Terrain& terrain, double dt) {
  if (!(dt > 0.0) || dt > 5.0e-3) {
    throw std::invalid_argument("step_world: dt must be in (0, 5e-3]");
  }
  const std::size_t n_links = robot.links.size();
  const std::size_t n_joints = robot.joints.size();

  const Kinematics kin = compute_kinematics(robot, world);
  const double total_mass = robot.total_mass();

  // Reel tracks its command at a bounded slew rate; stiffness and rest shape
  // of the cable joints follow it.
  if (commands) {
    const double delta = std::clamp(commands->reel_target_deg - world.reel.angle_deg,
                                    -kReelMaxRateDegS * dt, kReelMaxRateDegS * dt);
    world.reel.angle_deg = std::clamp(world.reel.angle_deg + delta, 0.0, 90.0);
    world.reel.rate_deg_s = delta / dt;
  } else {
    world.reel.rate_deg_s = 0.0;
  }
  double cable_k = 0.0;
  std::array<double, 5> cable_rest{};
  if (robot.tail.variant == TailVariant::Flexible) {
    cable_k = tail_joint_stiffness(world.reel, robot.tail);
    cable_rest = tail_rest_angles(world.reel, robot.tail);
  }

  // --- external forces ---
  std::vector<PointForce> forces;
  forces.reserve(n_links + 2 * robot.contact_points.size());
  for (std::size_t l = 0; l < n_links; ++l) {
    forces.push_back({static_cast<int>(l), kin.links[l].com_world,
                      world.gravity * robot.links[l].mass});
  }

  world.last_contacts.clear();
  world.anchors.resize(2 * robot.contact_points.size());
  std::vector<bool> slot_touched(world.anchors.size(), false);
  const Material& mat = terrain.material;
  for (std::size_t i = 0; i < robot.contact_points.size(); ++i) {
    const auto& cp = robot.contact_points[i];
    const auto& lk = kin.links[static_cast<std::size_t>(cp.link)];
    const double m_eff = robot.links[static_cast<std::size_t>(cp.link)].mass;
    const Vec3 center = lk.pose.transform(cp.local);
    SurfaceHit hits[2];
    const int n = collect_contacts(terrain, center, cp.radius, hits);
    for (int h = 0; h < n; ++h) {
      Contact c;
      c.point = hits[h].point;
      c.normal = hits[h].normal;
      c.penetration = hits[h].penetration;
      c.rel_velocity = point_velocity(lk, c.point);
      c.body_id = cp.link;

      const double f_n = normal_force_capped(c, mat, m_eff, dt);
      Vec3 f = c.normal * f_n;
      const double mu = mat.mu * cp.friction_scale;

      const std::size_t slot = 2 * i + (hits[h].riser ? 1 : 0);
      FrictionAnchor& anchor = world.anchors[slot];
      slot_touched[slot] = true;
      if (f_n > 0.0 && mu > 0.0) {
        if (!anchor.active || anchor.tread != hits[h].tread) {
          anchor = {true, c.point, hits[h].tread};
        }
        const Vec3 offset = c.point - anchor.position;
        const Vec3 d_t = offset - c.normal * offset.dot(c.normal);
        const Vec3 v_t = c.rel_velocity - c.normal * c.rel_velocity.dot(c.normal);
        const double k_t = tangent_stiffness(m_eff, dt);
        Vec3 f_t = d_t * -k_t - v_t * tangent_damping(m_eff, dt);
        const double cone = mu * f_n;
        const double f_t_mag = f_t.norm();
        if (f_t_mag > cone) {
          f_t *= cone / f_t_mag;
          // slide the anchor so the elastic deflection matches the cone
          anchor.position = c.point + f_t / k_t;
        }
        world.max_friction_ratio = std::max(world.max_friction_ratio, f_t.norm() / cone);
        f += f_t;
      } else {
        anchor.active = false;
      }

      forces.push_back({cp.link, c.point, f});
      world.last_contacts.push_back({static_cast<int>(i), cp.tag, cp.link, c, f, hits[h].tread});
    }
  }
  for (std::size_t s = 0; s < world.anchors.size(); ++s) {
    if (!slot_touched[s]) world.anchors[s].active = false;
  }

  // --- base: CoM translation and composite-inertia rotation ---
  Vec3 f_sum;
  Vec3 tau_com;
  for (const auto& pf : forces) {
    f_sum += pf.force;
    tau_com += (pf.pos - kin.com_world).cross(pf.force);
  }

  Sym3 inertia;
  for (std::size_t l = 0; l < n_links; ++l) {
    inertia.add_rotated_diag(kin.links[l].pose.orientation, robot.links[l].inertia_diag);
    inertia.add_point_mass(robot.links[l].mass, kin.links[l].com_world - kin.com_world);
  }
  Vec3 omega = world.base_angular_velocity;
  const Vec3 omega_dot = inertia.solve(tau_com - omega.cross(inertia.multiply(omega)));
  omega += omega_dot * dt;
  world.base_orientation = quat_integrate(world.base_orientation, omega, dt);
  world.base_angular_velocity = omega;

  // --- joints ---
  std::vector<Vec3> joint_axis(n_joints), joint_pivot(n_joints);
  for (std::size_t j = 0; j < n_joints; ++j) {
    const JointSpec& spec = robot.joints[j];
    const auto& parent = kin.links[static_cast<std::size_t>(spec.parent_link)];
    const Quat mount = parent.pose.orientation * spec.frame_rotation;
    joint_axis[j] = rotate_vector(mount, spec.axis);
    joint_pivot[j] = parent.pose.transform(spec.pivot);
  }

  std::vector<double> tau(n_joints, 0.0);
  for (const auto& pf : forces) {
    for (const int j : robot.link_path[static_cast<std::size_t>(pf.link)]) {
      const auto js = static_cast<std::size_t>(j);
      tau[js] += joint_axis[js].dot((pf.pos - joint_pivot[js]).cross(pf.force));
    }
  }

  int cable_index = 0;
  for (std::size_t j = 0; j < n_joints; ++j) {
    const JointSpec& spec = robot.joints[j];
    JointState& js = world.joints[j];

    double inertia_eff = 0.0;
    for (const int l : robot.joint_subtree[j]) {
      const auto& lk = kin.links[static_cast<std::size_t>(l)];
      const auto& ld = robot.links[static_cast<std::size_t>(l)];
      Sym3 li;
      li.add_rotated_diag(lk.pose.orientation, ld.inertia_diag);
      const Vec3 d = lk.com_world - joint_pivot[j];
      li.add_point_mass(ld.mass, d);
      inertia_eff += joint_axis[j].dot(li.multiply(joint_axis[j]));
    }
    inertia_eff = std::max(inertia_eff, kMinJointInertia);

    double torque = tau[j];
    double k_lin = 0.0;   // local elastic slope, handled implicitly
    double c_lin = 0.0;   // damping, handled implicitly
    switch (spec.kind) {
      case JointKind::Servo: {
        if (commands) {
          double target = 0.0;
          const int ji = static_cast<int>(j);
          if (ji == robot.servos.front_horiz) target = commands->front_horiz;
          else if (ji == robot.servos.front_vert) target = commands->front_vert;
          else if (ji == robot.servos.rear_horiz) target = commands->rear_horiz;
          else if (ji == robot.servos.rear_vert) target = commands->rear_vert;
          else if (ji == robot.servos.body_yaw) target = commands->body_yaw;
          else if (ji == robot.servos.tail_lateral) target = 0.0;  // held neutral
          torque += servo_torque(target, js, spec.stiffness, spec.damping, spec.max_torque);
        }
        c_lin = robot.morphology.servo_gear_drag;
        break;
      }
      case JointKind::PassiveSpring: {
        torque += -spec.stiffness * (js.angle - spec.rest_angle);
        k_lin = spec.stiffness;
        c_lin = spec.damping;
        break;
      }
      case JointKind::CableModulated: {
        torque += -cable_k * (js.angle - cable_rest[static_cast<std::size_t>(cable_index++)]);
        k_lin = cable_k;
        c_lin = spec.damping;
        break;
      }
    }
    const double limit_elastic = joint_limit_elastic(js, spec);
    if (limit_elastic != 0.0) {
      torque += limit_elastic;
      k_lin += limit_stiffness(spec);
      c_lin += 0.02 * limit_stiffness(spec);
    }

    // Spring slopes and damping enter the update implicitly so stiff limit
    // stops and cable settings stay stable on feather-light links.
    const double rate_free = js.rate + torque / inertia_eff * dt;
    js.rate = rate_free / (1.0 + c_lin * dt / inertia_eff + k_lin * dt * dt / inertia_eff);
    js.angle += js.rate * dt;
  }

  // --- CoM translation (semi-implicit, velocity first) ---
  const Vec3 accel = f_sum / total_mass;
  const SemiImplicitResult r = semi_implicit_step(world.com_position, world.com_velocity, accel, dt);
  world.com_velocity = r.velocity;
  world.com_position = r.position;
  world.time += dt;

  // --- sanity ---
  auto bad = [](const Vec3& v) { return !v.finite() || std::abs(v.x) > kStateBound ||
                                        std::abs(v.y) > kStateBound || std::abs(v.z) > kStateBound; };
  bool diverged = bad(world.com_position) || bad(world.com_velocity) || bad(world.base_angular_velocity) ||
                  !std::isfinite(world.base_orientation.norm());
  for (const auto& s : world.joints) {
    diverged = diverged || !std::isfinite(s.angle) || !std::isfinite(s.rate) ||
               std::abs(s.angle) > kStateBound || std::abs(s.rate) > kStateBound;
  }
  if (diverged) {
    throw NumericalDivergence("state exceeded bounds at t=" + std::to_string(world.time));
  }

  // --- refresh observable per-body state ---
  const Kinematics post = compute_kinematics(robot, world);
  world.bodies.resize(n_links);
  for (std::size_t l = 0; l < n_links; ++l) {
    world.bodies[l] = BodyState{post.links[l].pose, post.links[l].lin_vel, post.links[l].ang_vel,
                                robot.links[l].mass, robot.links[l].inertia_diag};
  }
}

double mechanical_energy(const ArticulatedRobot& robot, const WorldState& world,
                         const Terrain& terrain, double dt) {
  const Kinematics kin = compute_kinematics(robot, world);
  double e = 0.0;
  for (std::size_t l = 0; l < robot.links.size(); ++l) {
    const auto& lk = kin.links[l];
    const auto& ld = robot.links[l];
    e += 0.5 * ld.mass * lk.com_vel.squared_norm();
    const Vec3 w_local = rotate_vector(lk.pose.orientation.conjugate(), lk.ang_vel);
    e += 0.5 * (ld.inertia_diag.x * w_local.x * w_local.x +
                ld.inertia_diag.y * w_local.y * w_local.y +
                ld.inertia_diag.z * w_local.z * w_local.z);
    e += -ld.mass * world.gravity.dot(lk.com_world);
  }

  double cable_k = 0.0;
  std::array<double, 5> cable_rest{};
  if (robot.tail.variant == TailVariant::Flexible) {
    cable_k = tail_joint_stiffness(world.reel, robot.tail);
    cable_rest = tail_rest_angles(world.reel, robot.tail);
  }
  int cable_index = 0;
  for (std::size_t j = 0; j < robot.joints.size(); ++j) {
    const JointSpec& spec = robot.joints[j];
    const JointState& js = world.joints[j];
    if (spec.kind == JointKind::PassiveSpring) {
      const double d = js.angle - spec.rest_angle;
      e += 0.5 * spec.stiffness * d * d;
    } else if (spec.kind == JointKind::CableModulated) {
      const double d = js.angle - cable_rest[static_cast<std::size_t>(cable_index++)];
      e += 0.5 * cable_k * d * d;
    }
    const double over = std::max({0.0, js.angle - spec.limit_max, spec.limit_min - js.angle});
    e += 0.5 * limit_stiffness(spec) * over * over;
  }

  for (std::size_t i = 0; i < robot.contact_points.size(); ++i) {
    const auto& cp = robot.contact_points[i];
    const double m_eff = robot.links[static_cast<std::size_t>(cp.link)].mass;
    const Vec3 center = kin.links[static_cast<std::size_t>(cp.link)].pose.transform(cp.local);
    SurfaceHit hits[2];
    const int n = collect_contacts(terrain, center, cp.radius, hits);
    for (int h = 0; h < n; ++h) {
      e += 0.5 * terrain.material.k_c * hits[h].penetration * hits[h].penetration;
      const std::size_t slot = 2 * i + (hits[h].riser ? 1 : 0);
      if (slot < world.anchors.size() && world.anchors[slot].active) {
        const Vec3 offset = hits[h].point - world.anchors[slot].position;
        const Vec3 d_t = offset - hits[h].normal * offset.dot(hits[h].normal);
        e += 0.5 * tangent_stiffness(m_eff, dt) * d_t.squared_norm();
      }
    }
  }
  return e;
}

Vec3 linear_momentum(const ArticulatedRobot& robot, const WorldState& world) {
  return world.com_velocity * robot.total_mass();
}

}  // namespace tailsim
