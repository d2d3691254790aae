#include "tailsim/robot.hpp"

#include "tailsim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tailsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

double deg2rad(double d) { return d * kPi / 180.0; }

Vec3 box_inertia(double m, double lx, double ly, double lz) {
  return {m / 12.0 * (ly * ly + lz * lz), m / 12.0 * (lx * lx + lz * lz),
          m / 12.0 * (lx * lx + ly * ly)};
}

// Thin rod spanning `d`, diagonal part of the exact inertia about its CoM.
Vec3 rod_inertia(double m, const Vec3& d) {
  const double s = d.squared_norm();
  return {m / 12.0 * (s - d.x * d.x), m / 12.0 * (s - d.y * d.y), m / 12.0 * (s - d.z * d.z)};
}

void require(bool ok, const char* what) {
  if (!ok) throw InvalidMorphology(what);
}

}  // namespace

double ArticulatedRobot::total_mass() const {
  double m = 0.0;
  for (const auto& l : links) m += l.mass;
  return m;
}

int ArticulatedRobot::foot_contact_index(ContactTag tag) const {
  for (std::size_t i = 0; i < contact_points.size(); ++i) {
    if (contact_points[i].tag == tag) return static_cast<int>(i);
  }
  return -1;
}

std::pair<double, double> coupled_leg_lift(double vert_servo_angle) {
  return {vert_servo_angle, -vert_servo_angle};
}

double leg_spring_linear_k(const Morphology& m) {
  // kgf/cm -> N/m: 1 kgf = 9.81 N, 1 cm = 0.01 m
  return m.leg_spring_k_kgf_cm * 9.81 / 0.01;
}

double leg_spring_torsional_k(const Morphology& m) {
  const double r = m.leg_spring_moment_arm;
  return leg_spring_linear_k(m) * r * r;
}

double reel_ramp_fraction(double reel_angle_deg) {
  const double a = std::clamp(reel_angle_deg, 0.0, 90.0);
  if (a <= 55.0) return 0.0;
  return (a - 55.0) / 35.0;
}

double tail_joint_stiffness(const ReelState& reel, const TailKind& tail) {
  if (tail.variant != TailVariant::Flexible) {
    throw WrongTailVariant("tail_joint_stiffness requires a flexible tail");
  }
  return tail.k_min + (tail.k_max - tail.k_min) * reel_ramp_fraction(reel.angle_deg);
}

std::array<double, 5> tail_rest_angles(const ReelState& reel, const TailKind& tail) {
  if (tail.variant != TailVariant::Flexible) {
    throw WrongTailVariant("tail_rest_angles requires a flexible tail");
  }
  const double f = reel_ramp_fraction(reel.angle_deg);
  std::array<double, 5> rest{};
  for (int i = 0; i < 5; ++i) {
    rest[i] = f * deg2rad(tail.base_rest_deg[i]);
  }
  return rest;
}

ArticulatedRobot build_robot(const Morphology& m, const TailKind& tail) {
  require(m.body_length > 0 && m.body_width > 0 && m.body_height > 0, "body dimensions must be positive");
  require(m.leg_length > 0, "leg length must be positive");
  require(m.neutral_com_height > 0, "CoM height must be positive");
  require(m.leg_horiz_min_deg < m.leg_horiz_max_deg, "horizontal range must be ordered");
  require(m.body_yaw_range_deg > 0 && m.leg_vert_range_deg > 0, "servo ranges must be positive");
  require(m.mass_front_segment > 0 && m.mass_rear_segment > 0 && m.mass_plate > 0 &&
              m.mass_rocker > 0 && m.mass_lower_leg > 0,
          "masses must be positive");
  require(m.leg_spring_moment_arm > 0, "leg spring moment arm must be positive");
  require(m.contact_radius > 0, "contact radius must be positive");
  require(m.servo_stall_torque > 0, "servo stall torque must be positive");
  if (tail.variant == TailVariant::Flexible) {
    require(tail.segments == 5, "flexible tail has exactly five segments");
    require(tail.segment_length > 0 && tail.mass_segment > 0, "tail segment parameters must be positive");
    require(tail.k_min < tail.k_max && tail.k_min >= 0, "tail stiffness range must be ordered");
  }
  if (tail.variant == TailVariant::Rigid) {
    require(tail.rigid_length > 0 && tail.rigid_mass > 0, "rigid tail parameters must be positive");
  }

  ArticulatedRobot robot;
  robot.morphology = m;
  robot.tail = tail;

  const double seg_len = m.body_length / 2.0;
  const double r = m.contact_radius;

  // Neutral base height H: CoM of body-plus-legs sits exactly at
  // neutral_com_height when foot spheres touch z = 0. CoM(H) is affine in H,
  // so the solve is closed-form. D is the hip-to-foot drop.
  const double body_mass = m.mass_front_segment + m.mass_rear_segment + 2.0 * m.mass_plate +
                           2.0 * m.mass_rocker + 4.0 * m.mass_lower_leg;
  const double drop_coeff = 0.5 * m.mass_rocker + 3.0 * m.mass_lower_leg;
  const double H = (m.neutral_com_height * body_mass - drop_coeff * r) / (body_mass - drop_coeff);
  const double D = H - r;
  require(D > 0 && D < m.leg_length, "legs cannot reach the ground at the neutral CoM height");
  const double splay = m.leg_fore_aft_splay;
  const double leg_y_sq = m.leg_length * m.leg_length - D * D - splay * splay;
  require(leg_y_sq > 1.0e-6, "legs cannot reach the ground at the neutral CoM height");
  const double leg_y = std::sqrt(leg_y_sq);
  robot.neutral_base_height = H;

  const double half_vert = deg2rad(m.leg_vert_range_deg / 2.0);
  const double yaw_limit = deg2rad(m.body_yaw_range_deg);
  const double horiz_min = deg2rad(m.leg_horiz_min_deg);
  const double horiz_max = deg2rad(m.leg_horiz_max_deg);
  const double bend_limit = deg2rad(m.leg_bend_limit_deg);
  const double k_leg = leg_spring_torsional_k(m);

  auto add_link = [&](const std::string& name, double mass, const Vec3& inertia,
                      const Vec3& com, int parent_joint) {
    robot.links.push_back(LinkDesc{name, mass, inertia, com, parent_joint});
    return static_cast<int>(robot.links.size()) - 1;
  };

  auto add_joint = [&](JointSpec spec) {
    robot.joints.push_back(std::move(spec));
    return static_cast<int>(robot.joints.size()) - 1;
  };

  auto servo_spec = [&](const std::string& name, int parent, const Vec3& pivot, const Vec3& axis,
                        double lo, double hi) {
    JointSpec s;
    s.kind = JointKind::Servo;
    s.name = name;
    s.parent_link = parent;
    s.pivot = pivot;
    s.axis = axis;
    s.limit_min = lo;
    s.limit_max = hi;
    s.stiffness = m.servo_kp;
    s.damping = m.servo_kd;
    s.max_torque = m.servo_stall_torque;
    return s;
  };

  // --- body ---
  const Vec3 seg_inertia = box_inertia(m.mass_front_segment, seg_len, m.body_width, m.body_height);
  const int front = add_link("front_segment", m.mass_front_segment, seg_inertia, {0, 0, 0}, -1);

  double rear_mass = m.mass_rear_segment;
  if (tail.variant == TailVariant::Flexible) {
    rear_mass += tail.mass_mount;  // connection box rides on the rear segment
  }
  JointSpec yaw = servo_spec("body_yaw", front, {-seg_len / 2.0, 0, 0}, {0, 0, 1}, -yaw_limit, yaw_limit);
  const int yaw_j = add_joint(yaw);
  const int rear = add_link("rear_segment", rear_mass,
                            box_inertia(rear_mass, seg_len, m.body_width, m.body_height),
                            {-seg_len / 2.0, 0, 0}, yaw_j);
  robot.joints[yaw_j].child_link = rear;
  robot.servos.body_yaw = yaw_j;

  // --- leg assemblies: yaw plate -> see-saw rocker -> two lower legs ---
  struct LegSide {
    double sign;  // +1 left (+y), -1 right
    ContactTag foot;
  };
  auto build_leg_pair = [&](const std::string& prefix, int segment_link, const Vec3& hip_pivot,
                            double splay_x, ContactTag left_foot, ContactTag right_foot,
                            int* horiz_j, int* vert_j) {
    JointSpec horiz = servo_spec(prefix + "_horiz", segment_link, hip_pivot, {0, 0, 1}, horiz_min, horiz_max);
    const int hj = add_joint(horiz);
    const int plate = add_link(prefix + "_plate", m.mass_plate,
                               box_inertia(m.mass_plate, 0.02, 0.02, 0.01), {0, 0, 0}, hj);
    robot.joints[hj].child_link = plate;

    JointSpec vert = servo_spec(prefix + "_vert", plate, {0, 0, 0}, {1, 0, 0}, -half_vert, half_vert);
    const int vj = add_joint(vert);
    const int rocker = add_link(prefix + "_rocker", m.mass_rocker,
                                rod_inertia(m.mass_rocker, {0, leg_y, 0}), {0, 0, -D / 4.0}, vj);
    robot.joints[vj].child_link = rocker;

    for (const LegSide side : {LegSide{1.0, left_foot}, LegSide{-1.0, right_foot}}) {
      const Vec3 knee{splay_x / 2.0, side.sign * leg_y / 2.0, -D / 2.0};
      const Vec3 leg_dir = Vec3{splay_x, side.sign * leg_y, -D}.normalized();
      // bend axis perpendicular to the leg so the foot deflects fore-aft
      const Vec3 axis = leg_dir.cross(Vec3{1, 0, 0}).normalized();
      JointSpec spring;
      spring.kind = JointKind::PassiveSpring;
      spring.name = prefix + (side.sign > 0 ? "_left_spring" : "_right_spring");
      spring.parent_link = rocker;
      spring.pivot = knee;
      spring.axis = axis;
      spring.limit_min = -bend_limit;
      spring.limit_max = bend_limit;
      spring.stiffness = k_leg;
      spring.damping = m.leg_spring_damping;
      const int sj = add_joint(spring);
      const Vec3 tip{splay_x / 2.0, side.sign * leg_y / 2.0, -D / 2.0};
      const int lower = add_link(spring.name + "_lower", m.mass_lower_leg,
                                 rod_inertia(m.mass_lower_leg, tip), tip * 0.5, sj);
      robot.joints[sj].child_link = lower;
      robot.contact_points.push_back({lower, tip, r, side.foot, 1.0});
      robot.contact_points.push_back({lower, {0, 0, 0}, r, ContactTag::Knee, 0.6});
    }
    *horiz_j = hj;
    *vert_j = vj;
  };

  build_leg_pair("front", front, {0, 0, 0}, splay, ContactTag::FootFL, ContactTag::FootFR,
                 &robot.servos.front_horiz, &robot.servos.front_vert);
  build_leg_pair("rear", rear, {-seg_len / 2.0, 0, 0}, -splay, ContactTag::FootRL,
                 ContactTag::FootRR, &robot.servos.rear_horiz, &robot.servos.rear_vert);

  // --- body underside corners (the rear strikes the ground when pitching) ---
  const double under_z = -m.body_height / 2.0;
  const double half_w = m.body_width / 2.0;
  for (const double sy : {1.0, -1.0}) {
    robot.contact_points.push_back({front, {seg_len / 2.0, sy * half_w, under_z}, r, ContactTag::Body, 1.0});
    robot.contact_points.push_back({front, {-seg_len / 2.0, sy * half_w, under_z}, r, ContactTag::Body, 1.0});
    robot.contact_points.push_back({rear, {-0.2 * seg_len, sy * half_w, under_z}, r, ContactTag::Body, 1.0});
    robot.contact_points.push_back({rear, {-seg_len, sy * half_w, under_z}, r, ContactTag::Body, 1.0});
  }

  // --- tail ---
  if (tail.variant == TailVariant::Rigid) {
    // Mounted on the rear servo; swings laterally, pitched down so the tip
    // rests just below the foot plane and props the rear as it sags.
    const Vec3 pivot{-m.body_length / 2.0, 0, tail.rigid_mount_height};
    const double pivot_z = H + tail.rigid_mount_height;
    const double sin_a = std::clamp((pivot_z - r + tail.tip_rest_drop) / tail.rigid_length, 0.0, 0.95);
    const double pitch = std::asin(sin_a);
    robot.tail_mount_pitch_rad = pitch;

    JointSpec lateral = servo_spec("tail_lateral", rear, pivot, {0, 0, 1},
                                   deg2rad(-60.0), deg2rad(60.0));
    const int lj = add_joint(lateral);
    const Vec3 tip{-tail.rigid_length * std::cos(pitch), 0, -tail.rigid_length * sin_a};
    const int link = add_link("rigid_tail", tail.rigid_mass, rod_inertia(tail.rigid_mass, tip),
                              tip * 0.5, lj);
    robot.joints[lj].child_link = link;
    robot.servos.tail_lateral = lj;
    robot.contact_points.push_back({link, tip, r, ContactTag::TailTip, tail.friction_scale});
  } else if (tail.variant == TailVariant::Flexible) {
    // Mount pitch solved so the fully stiffened rest shape grounds the tip
    // with a small preload; the relaxed shape is straight along the mount.
    const double mount_z = H + tail.mount_height_offset;
    const double tip_target = r - tail.tip_rest_drop;
    auto tip_height = [&](double pitch) {
      double z = mount_z;
      double heading = -pitch;
      for (int i = 0; i < tail.segments; ++i) {
        heading += deg2rad(tail.base_rest_deg[static_cast<std::size_t>(i)]);
        z += tail.segment_length * std::sin(heading);
      }
      return z;
    };
    double lo = 0.0, hi = deg2rad(85.0);
    require(tip_height(hi) < tip_target, "tail cannot reach the ground; lower the mount");
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (tip_height(mid) > tip_target ? lo : hi) = mid;
    }
    const double pitch = 0.5 * (lo + hi);
    robot.tail_mount_pitch_rad = pitch;

    int parent = rear;
    Vec3 pivot{-m.body_length / 2.0, 0, tail.mount_height_offset};
    Quat mount_rot = Quat::from_axis_angle({0, 1, 0}, -pitch);
    for (int i = 0; i < tail.segments; ++i) {
      JointSpec cable;
      cable.kind = JointKind::CableModulated;
      cable.name = "tail_" + std::to_string(i + 1);
      cable.parent_link = parent;
      cable.pivot = pivot;
      cable.frame_rotation = mount_rot;
      cable.axis = {0, 1, 0};
      cable.limit_min = -deg2rad(tail.joint_limit_deg);
      cable.limit_max = deg2rad(tail.joint_limit_deg);
      cable.stiffness = tail.k_min;  // reel-modulated every step
      cable.damping = tail.joint_damping;
      const int cj = add_joint(cable);
      const Vec3 end{-tail.segment_length, 0, 0};
      const int link = add_link(cable.name, tail.mass_segment, rod_inertia(tail.mass_segment, end),
                                end * 0.5, cj);
      robot.joints[cj].child_link = link;

      if (i + 1 < tail.segments) {
        robot.contact_points.push_back({link, {end.x, 0, -0.008}, r, ContactTag::TailSegment, tail.friction_scale});
      } else {
        robot.contact_points.push_back({link, end, r, ContactTag::TailTip, tail.friction_scale});
      }
      parent = link;
      pivot = end;
      mount_rot = Quat{};  // only the mount carries the fixed pitch
    }
  }

  // --- topology tables ---
  const auto n_links = robot.links.size();
  robot.link_path.resize(n_links);
  for (std::size_t l = 0; l < n_links; ++l) {
    std::vector<int> path;
    int link = static_cast<int>(l);
    while (robot.links[static_cast<std::size_t>(link)].parent_joint >= 0) {
      const int j = robot.links[static_cast<std::size_t>(link)].parent_joint;
      path.push_back(j);
      link = robot.joints[static_cast<std::size_t>(j)].parent_link;
    }
    std::reverse(path.begin(), path.end());
    robot.link_path[l] = std::move(path);
  }
  robot.joint_subtree.resize(robot.joints.size());
  for (std::size_t l = 0; l < n_links; ++l) {
    for (const int j : robot.link_path[l]) {
      robot.joint_subtree[static_cast<std::size_t>(j)].push_back(static_cast<int>(l));
    }
  }
  return robot;
}

}  // namespace tailsim
