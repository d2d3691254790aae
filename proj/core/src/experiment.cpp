#include "tailsim/experiment.hpp"

#include "tailsim/errors.hpp"
#include "tailsim/metrics.hpp"
#include "tailsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tailsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::map<std::string, TailVariant>& tail_names() {
  static const std::map<std::string, TailVariant> m{
      {"none", TailVariant::None}, {"rigid", TailVariant::Rigid}, {"flexible", TailVariant::Flexible}};
  return m;
}

const std::map<std::string, TailPolicyKind>& policy_names() {
  static const std::map<std::string, TailPolicyKind> m{{"relaxed", TailPolicyKind::Relaxed},
                                                       {"constant_stiff", TailPolicyKind::ConstantStiff},
                                                       {"periodic", TailPolicyKind::Periodic},
                                                       {"touch", TailPolicyKind::TouchTriggered}};
  return m;
}

std::string format_double(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace

const char* failure_reason_name(FailureReason reason) {
  switch (reason) {
    case FailureReason::None: return "none";
    case FailureReason::OffRunway: return "off_runway";
    case FailureReason::Stuck: return "stuck";
    case FailureReason::NumericalDivergence: return "numerical_divergence";
    case FailureReason::Timeout: return "timeout";
  }
  return "none";
}

FailureReason failure_reason_from_name(const std::string& name) {
  if (name == "off_runway") return FailureReason::OffRunway;
  if (name == "stuck") return FailureReason::Stuck;
  if (name == "numerical_divergence") return FailureReason::NumericalDivergence;
  if (name == "timeout") return FailureReason::Timeout;
  return FailureReason::None;
}

void validate(const ExperimentConfig& config) {
  const auto& sim = config.sim;
  if (!(sim.dt > 0.0) || sim.dt > 5.0e-3) {
    throw ConfigError("sim.dt must be in (0, 5e-3]");
  }
  if (sim.trials < 1) {
    throw ConfigError("sim.trials must be >= 1");
  }
  if (!(sim.max_time > 10.0 * config.gait.period)) {
    throw ConfigError("sim.max_time must exceed 10 gait periods");
  }
  const auto& g = config.gait;
  if (!(g.period > 0.0)) {
    throw ConfigError("gait.period must be positive");
  }
  if (g.horiz_amplitude_deg > std::min(-g.horiz_min_deg, g.horiz_max_deg) ||
      g.horiz_amplitude_deg < 0.0) {
    throw ConfigError("gait.horiz_amplitude_deg outside the servo range");
  }
  if (g.vert_amplitude_deg > g.vert_limit_deg || g.vert_amplitude_deg < 0.0) {
    throw ConfigError("gait.vert_amplitude_deg outside the servo range");
  }
  if (g.body_undulation_deg > g.body_yaw_limit_deg || g.body_undulation_deg < 0.0) {
    throw ConfigError("gait.body_undulation_deg outside the servo range");
  }
  const auto& p = config.policy;
  if (p.stiffen_phase < 0.0 || p.stiffen_phase >= 1.0 || p.relax_phase < 0.0 || p.relax_phase >= 1.0) {
    throw ConfigError("policy phases must be in [0, 1)");
  }
  if (p.stiff_angle_deg < 55.0 || p.stiff_angle_deg > 90.0) {
    throw ConfigError("policy.stiff_angle_deg must be in [55, 90]");
  }
  if (p.relaxed_angle_deg < 0.0 || p.relaxed_angle_deg >= 55.0) {
    throw ConfigError("policy.relaxed_angle_deg must be in [0, 55)");
  }
  if (config.terrain.variant == TerrainVariant::Incline &&
      (config.terrain.incline.angle_deg < 0.0 || config.terrain.incline.angle_deg > 45.0)) {
    throw ConfigError("terrain.incline.angle_deg must be in [0, 45]");
  }
}

ExperimentConfig experiment_from_config(const ConfigMap& cfg) {
  ExperimentConfig c;
  c.name = cfg.get_string("name", c.name);

  const std::string variant = cfg.get_string("terrain.variant", "flat");
  if (variant == "flat") {
    c.terrain = flat_terrain();
  } else if (variant == "incline") {
    c.terrain = incline_terrain(15.0);
  } else if (variant == "stairs") {
    c.terrain = stairs_terrain();
  } else if (variant == "heightfield") {
    c.terrain = heightfield_terrain(1);
  } else {
    throw ConfigError("terrain.variant must be flat|incline|stairs|heightfield");
  }
  c.terrain.incline.angle_deg = cfg.get_double("terrain.incline.angle_deg", c.terrain.incline.angle_deg);
  c.terrain.incline.length = cfg.get_double("terrain.incline.length", c.terrain.incline.length);
  c.terrain.incline.half_width = cfg.get_double("terrain.incline.half_width", c.terrain.incline.half_width);
  c.terrain.stairs.count = cfg.get_int("terrain.stairs.count", c.terrain.stairs.count);
  c.terrain.stairs.rise = cfg.get_double("terrain.stairs.rise", c.terrain.stairs.rise);
  c.terrain.stairs.run = cfg.get_double("terrain.stairs.run", c.terrain.stairs.run);
  c.terrain.stairs.half_width = cfg.get_double("terrain.stairs.half_width", c.terrain.stairs.half_width);
  c.terrain.heightfield.seed = cfg.get_u64("terrain.heightfield.seed", c.terrain.heightfield.seed);
  c.terrain.heightfield.rms_amp = cfg.get_double("terrain.heightfield.rms_amp", c.terrain.heightfield.rms_amp);
  c.terrain.heightfield.corr_len = cfg.get_double("terrain.heightfield.corr_len", c.terrain.heightfield.corr_len);
  c.descend = cfg.get_bool("terrain.stairs.descend", c.descend);
  c.terrain.material.mu = cfg.get_double("terrain.mu", c.terrain.material.mu);
  c.terrain.material.k_c = cfg.get_double("terrain.k_c", c.terrain.material.k_c);
  c.terrain.material.c_c = cfg.get_double("terrain.c_c", c.terrain.material.c_c);
  c.terrain.material.v_eps = cfg.get_double("terrain.v_eps", c.terrain.material.v_eps);

  const std::string tail = cfg.get_string("tail.variant", "none");
  const auto tv = tail_names().find(tail);
  if (tv == tail_names().end()) {
    throw ConfigError("tail.variant must be none|rigid|flexible");
  }
  c.tail.variant = tv->second;
  c.tail.segment_length = cfg.get_double("tail.segment_length", c.tail.segment_length);
  c.tail.k_min = cfg.get_double("tail.k_min", c.tail.k_min);
  c.tail.k_max = cfg.get_double("tail.k_max", c.tail.k_max);
  c.tail.joint_damping = cfg.get_double("tail.joint_damping", c.tail.joint_damping);
  c.tail.mount_height_offset = cfg.get_double("tail.mount_height_offset", c.tail.mount_height_offset);
  c.tail.tip_rest_drop = cfg.get_double("tail.tip_rest_drop", c.tail.tip_rest_drop);
  c.tail.mass_segment = cfg.get_double("tail.mass_segment", c.tail.mass_segment);
  c.tail.friction_scale = cfg.get_double("tail.friction_scale", c.tail.friction_scale);
  c.tail.rigid_length = cfg.get_double("tail.rigid_length", c.tail.rigid_length);
  c.tail.rigid_mass = cfg.get_double("tail.rigid_mass", c.tail.rigid_mass);
  c.tail.rigid_mount_height = cfg.get_double("tail.rigid_mount_height", c.tail.rigid_mount_height);

  const std::string policy = cfg.get_string("policy.kind", "relaxed");
  const auto pk = policy_names().find(policy);
  if (pk == policy_names().end()) {
    throw ConfigError("policy.kind must be relaxed|constant_stiff|periodic|touch");
  }
  c.policy.kind = pk->second;
  c.policy.stiffen_phase = cfg.get_double("policy.stiffen_phase", c.policy.stiffen_phase);
  c.policy.relax_phase = cfg.get_double("policy.relax_phase", c.policy.relax_phase);
  c.policy.stiff_angle_deg = cfg.get_double("policy.stiff_angle_deg", c.policy.stiff_angle_deg);
  c.policy.relaxed_angle_deg = cfg.get_double("policy.relaxed_angle_deg", c.policy.relaxed_angle_deg);
  c.policy.touch_threshold = cfg.get_double("policy.touch_threshold", c.policy.touch_threshold);
  c.policy.touch_hold = cfg.get_double("policy.touch_hold", c.policy.touch_hold);

  c.gait.period = cfg.get_double("gait.period", c.gait.period);
  c.gait.horiz_amplitude_deg = cfg.get_double("gait.horiz_amplitude_deg", c.gait.horiz_amplitude_deg);
  c.gait.vert_amplitude_deg = cfg.get_double("gait.vert_amplitude_deg", c.gait.vert_amplitude_deg);
  c.gait.body_undulation_deg = cfg.get_double("gait.body_undulation_deg", c.gait.body_undulation_deg);
  c.gait.blend_fraction = cfg.get_double("gait.blend_fraction", c.gait.blend_fraction);
  c.gait.swap_diagonals = cfg.get_bool("gait.swap_diagonals", c.gait.swap_diagonals);

  c.morphology.servo_kp = cfg.get_double("morph.servo_kp", c.morphology.servo_kp);
  c.morphology.servo_kd = cfg.get_double("morph.servo_kd", c.morphology.servo_kd);
  c.morphology.leg_fore_aft_splay =
      cfg.get_double("morph.leg_fore_aft_splay", c.morphology.leg_fore_aft_splay);
  c.morphology.leg_spring_moment_arm =
      cfg.get_double("morph.leg_spring_moment_arm", c.morphology.leg_spring_moment_arm);
  c.morphology.leg_spring_damping =
      cfg.get_double("morph.leg_spring_damping", c.morphology.leg_spring_damping);
  c.morphology.mass_front_segment = cfg.get_double("morph.mass_front_segment", c.morphology.mass_front_segment);
  c.morphology.mass_rear_segment = cfg.get_double("morph.mass_rear_segment", c.morphology.mass_rear_segment);
  c.morphology.mass_lower_leg = cfg.get_double("morph.mass_lower_leg", c.morphology.mass_lower_leg);

  c.sim.dt = cfg.get_double("sim.dt", c.sim.dt);
  c.sim.max_time = cfg.get_double("sim.max_time", c.sim.max_time);
  c.sim.trials = cfg.get_int("sim.trials", c.sim.trials);
  c.sim.seed = cfg.get_u64("sim.seed", c.sim.seed);
  c.sim.jitter_pos = cfg.get_double("sim.jitter_pos", c.sim.jitter_pos);
  c.sim.jitter_yaw_deg = cfg.get_double("sim.jitter_yaw_deg", c.sim.jitter_yaw_deg);
  c.sim.servo_bias_deg = cfg.get_double("sim.servo_bias_deg", c.sim.servo_bias_deg);
  c.sim.servo_gain_jitter = cfg.get_double("sim.servo_gain_jitter", c.sim.servo_gain_jitter);
  c.sim.stuck_threshold = cfg.get_double("sim.stuck_threshold", c.sim.stuck_threshold);
  c.sim.stuck_window_cycles = cfg.get_int("sim.stuck_window_cycles", c.sim.stuck_window_cycles);
  c.sim.stuck_warmup_cycles = cfg.get_int("sim.stuck_warmup_cycles", c.sim.stuck_warmup_cycles);

  validate(c);
  return c;
}

ConfigMap resolved_config(const ExperimentConfig& c) {
  ConfigMap out;
  out.set("name", c.name);
  switch (c.terrain.variant) {
    case TerrainVariant::Flat: out.set("terrain.variant", "flat"); break;
    case TerrainVariant::Incline: out.set("terrain.variant", "incline"); break;
    case TerrainVariant::Stairs: out.set("terrain.variant", "stairs"); break;
    case TerrainVariant::Heightfield: out.set("terrain.variant", "heightfield"); break;
  }
  out.set("terrain.incline.angle_deg", format_double(c.terrain.incline.angle_deg));
  out.set("terrain.incline.length", format_double(c.terrain.incline.length));
  out.set("terrain.incline.half_width", format_double(c.terrain.incline.half_width));
  out.set("terrain.stairs.count", std::to_string(c.terrain.stairs.count));
  out.set("terrain.stairs.rise", format_double(c.terrain.stairs.rise));
  out.set("terrain.stairs.run", format_double(c.terrain.stairs.run));
  out.set("terrain.stairs.half_width", format_double(c.terrain.stairs.half_width));
  out.set("terrain.stairs.descend", c.descend ? "true" : "false");
  out.set("terrain.heightfield.seed", std::to_string(c.terrain.heightfield.seed));
  out.set("terrain.heightfield.rms_amp", format_double(c.terrain.heightfield.rms_amp));
  out.set("terrain.heightfield.corr_len", format_double(c.terrain.heightfield.corr_len));
  out.set("terrain.mu", format_double(c.terrain.material.mu));
  out.set("terrain.k_c", format_double(c.terrain.material.k_c));
  out.set("terrain.c_c", format_double(c.terrain.material.c_c));
  out.set("terrain.v_eps", format_double(c.terrain.material.v_eps));
  switch (c.tail.variant) {
    case TailVariant::None: out.set("tail.variant", "none"); break;
    case TailVariant::Rigid: out.set("tail.variant", "rigid"); break;
    case TailVariant::Flexible: out.set("tail.variant", "flexible"); break;
  }
  out.set("tail.segment_length", format_double(c.tail.segment_length));
  out.set("tail.k_min", format_double(c.tail.k_min));
  out.set("tail.k_max", format_double(c.tail.k_max));
  out.set("tail.joint_damping", format_double(c.tail.joint_damping));
  out.set("tail.mount_height_offset", format_double(c.tail.mount_height_offset));
  out.set("tail.tip_rest_drop", format_double(c.tail.tip_rest_drop));
  out.set("tail.mass_segment", format_double(c.tail.mass_segment));
  out.set("tail.friction_scale", format_double(c.tail.friction_scale));
  out.set("tail.rigid_length", format_double(c.tail.rigid_length));
  out.set("tail.rigid_mass", format_double(c.tail.rigid_mass));
  out.set("tail.rigid_mount_height", format_double(c.tail.rigid_mount_height));
  switch (c.policy.kind) {
    case TailPolicyKind::Relaxed: out.set("policy.kind", "relaxed"); break;
    case TailPolicyKind::ConstantStiff: out.set("policy.kind", "constant_stiff"); break;
    case TailPolicyKind::Periodic: out.set("policy.kind", "periodic"); break;
    case TailPolicyKind::TouchTriggered: out.set("policy.kind", "touch"); break;
  }
  out.set("policy.stiffen_phase", format_double(c.policy.stiffen_phase));
  out.set("policy.relax_phase", format_double(c.policy.relax_phase));
  out.set("policy.stiff_angle_deg", format_double(c.policy.stiff_angle_deg));
  out.set("policy.relaxed_angle_deg", format_double(c.policy.relaxed_angle_deg));
  out.set("policy.touch_threshold", format_double(c.policy.touch_threshold));
  out.set("policy.touch_hold", format_double(c.policy.touch_hold));
  out.set("gait.period", format_double(c.gait.period));
  out.set("gait.horiz_amplitude_deg", format_double(c.gait.horiz_amplitude_deg));
  out.set("gait.vert_amplitude_deg", format_double(c.gait.vert_amplitude_deg));
  out.set("gait.body_undulation_deg", format_double(c.gait.body_undulation_deg));
  out.set("gait.blend_fraction", format_double(c.gait.blend_fraction));
  out.set("gait.swap_diagonals", c.gait.swap_diagonals ? "true" : "false");
  out.set("morph.servo_kp", format_double(c.morphology.servo_kp));
  out.set("morph.servo_kd", format_double(c.morphology.servo_kd));
  out.set("morph.leg_fore_aft_splay", format_double(c.morphology.leg_fore_aft_splay));
  out.set("morph.leg_spring_moment_arm", format_double(c.morphology.leg_spring_moment_arm));
  out.set("morph.leg_spring_damping", format_double(c.morphology.leg_spring_damping));
  out.set("morph.mass_front_segment", format_double(c.morphology.mass_front_segment));
  out.set("morph.mass_rear_segment", format_double(c.morphology.mass_rear_segment));
  out.set("morph.mass_lower_leg", format_double(c.morphology.mass_lower_leg));
  out.set("sim.dt", format_double(c.sim.dt));
  out.set("sim.max_time", format_double(c.sim.max_time));
  out.set("sim.trials", std::to_string(c.sim.trials));
  out.set("sim.seed", std::to_string(c.sim.seed));
  out.set("sim.jitter_pos", format_double(c.sim.jitter_pos));
  out.set("sim.jitter_yaw_deg", format_double(c.sim.jitter_yaw_deg));
  out.set("sim.servo_bias_deg", format_double(c.sim.servo_bias_deg));
  out.set("sim.servo_gain_jitter", format_double(c.sim.servo_gain_jitter));
  out.set("sim.stuck_threshold", format_double(c.sim.stuck_threshold));
  out.set("sim.stuck_window_cycles", std::to_string(c.sim.stuck_window_cycles));
  out.set("sim.stuck_warmup_cycles", std::to_string(c.sim.stuck_warmup_cycles));
  return out;
}

SpawnPose spawn_for(const ExperimentConfig& config) {
  SpawnPose spawn;
  switch (config.terrain.variant) {
    case TerrainVariant::Flat:
    case TerrainVariant::Heightfield:
      break;
    case TerrainVariant::Incline:
      spawn.x = -0.18;  // CoM just before the ramp foot
      break;
    case TerrainVariant::Stairs:
      if (config.descend) {
        spawn.x = config.terrain.stairs.run * config.terrain.stairs.count + 0.35;
        spawn.yaw = kPi;  // walk toward -x, down the steps
      } else {
        spawn.x = -0.25;  // feet on the ground before the first riser
      }
      break;
  }
  return spawn;
}

std::pair<TrialResult, TrajectoryLog> run_trial(const ExperimentConfig& config, int trial_index) {
  validate(config);

  Terrain terrain = config.terrain;
  if (terrain.variant == TerrainVariant::Heightfield) {
    // Each trial samples a fresh patch, like restarting on natural ground.
    terrain.heightfield.seed = derive_seed(config.sim.seed ^ config.terrain.heightfield.seed,
                                           static_cast<std::uint64_t>(trial_index), 0x7f);
  }

  const ArticulatedRobot robot = build_robot(config.morphology, config.tail);

  Rng rng(derive_seed(config.sim.seed, static_cast<std::uint64_t>(trial_index)));
  SpawnPose spawn = spawn_for(config);
  spawn.x += rng.symmetric(config.sim.jitter_pos);
  spawn.y += rng.symmetric(config.sim.jitter_pos);
  spawn.yaw += rng.symmetric(config.sim.jitter_yaw_deg * kPi / 180.0);

  // Per-trial servo trim and gain spread, the way no two builds of the
  // physical robot track their commands identically.
  const double bias_scale = config.sim.servo_bias_deg * kPi / 180.0;
  double servo_bias[5], servo_gain[5];
  for (int s = 0; s < 5; ++s) {
    servo_bias[s] = rng.symmetric(bias_scale);
    servo_gain[s] = 1.0 + rng.symmetric(config.sim.servo_gain_jitter);
  }

  WorldState world = init_world(robot, terrain, spawn);

  const double dt = config.sim.dt;
  const double period = config.gait.period;
  const auto total_steps = static_cast<long>(std::ceil(config.sim.max_time / dt));

  TrajectoryLog log;
  log.reserve(static_cast<std::size_t>(total_steps) + 1);

  const int tail_tip_point = robot.foot_contact_index(ContactTag::TailTip);
  const ContactTag foot_tags[4] = {ContactTag::FootFL, ContactTag::FootFR, ContactTag::FootRL,
                                   ContactTag::FootRR};

  auto append_record = [&]() {
    TrajectoryRecord rec;
    rec.time = world.time;
    rec.com = world.com_position;
    const EulerZYX e = to_euler_zyx(world.base_orientation);
    rec.yaw = e.yaw;
    rec.pitch = e.pitch;
    rec.roll = e.roll;
    for (const auto& c : world.last_contacts) {
      for (int f = 0; f < 4; ++f) {
        if (c.tag == foot_tags[f]) rec.foot_tread[f] = c.tread;
      }
      if (c.tag == ContactTag::TailTip) rec.tail_tread = c.tread;
    }
    if (tail_tip_point >= 0) {
      const auto& cp = robot.contact_points[static_cast<std::size_t>(tail_tip_point)];
      rec.tail_tip = world.bodies[static_cast<std::size_t>(cp.link)].pose.transform(cp.local);
    }
    rec.reel_deg = world.reel.angle_deg;
    rec.phase = gait_phase(world.time, period);
    log.push_back(rec);
  };

  append_record();

  TrialResult result;
  FailureReason ended_by = FailureReason::None;

  SensorReadings sensors;
  std::vector<Vec3> cycle_com{world.com_position};
  long cycles_seen = 0;

  for (long k = 0; k < total_steps; ++k) {
    // tail touch sensor state from the latest measured contacts
    double tip_force = 0.0;
    for (const auto& c : world.last_contacts) {
      if (c.tag == ContactTag::TailTip) tip_force += c.force.dot(c.contact.normal);
    }
    sensors.tail_tip_force = tip_force;
    if (tip_force >= config.policy.touch_threshold) {
      sensors.time_without_contact = 0.0;
    } else {
      sensors.time_without_contact += dt;
    }

    ServoCommandSet cmd = controller_step(world.time, config.gait, config.policy, sensors);
    cmd.front_horiz = cmd.front_horiz * servo_gain[0] + servo_bias[0];
    cmd.front_vert = cmd.front_vert * servo_gain[1] + servo_bias[1];
    cmd.rear_horiz = cmd.rear_horiz * servo_gain[2] + servo_bias[2];
    cmd.rear_vert = cmd.rear_vert * servo_gain[3] + servo_bias[3];
    cmd.body_yaw = cmd.body_yaw * servo_gain[4] + servo_bias[4];
    try {
      step_world(world, robot, cmd, terrain, dt);
    } catch (const NumericalDivergence&) {
      ended_by = FailureReason::NumericalDivergence;
      break;
    }
    append_record();

    if (is_off_runway(terrain, world.com_position)) {
      ended_by = FailureReason::OffRunway;
      break;
    }

    const long cycle_now = static_cast<long>(std::floor(world.time / period + 1.0e-9));
    if (cycle_now > cycles_seen) {
      cycles_seen = cycle_now;
      cycle_com.push_back(world.com_position);
      const int w = config.sim.stuck_window_cycles;
      if (cycles_seen >= config.sim.stuck_warmup_cycles + w) {
        const Vec3 d = cycle_com.back() - cycle_com[cycle_com.size() - 1 - static_cast<std::size_t>(w)];
        if (std::sqrt(d.x * d.x + d.y * d.y) < config.sim.stuck_threshold) {
          ended_by = FailureReason::Stuck;
          break;
        }
      }
    }
  }

  result.end_time = world.time;
  result.cycles = static_cast<int>(std::floor(log.back().time / period + 1.0e-9));

  try {
    result.bl_per_cycle = bl_per_cycle(log, period, config.morphology.body_length);
    result.deg_per_cycle = deg_per_cycle(log, period);
  } catch (const InsufficientCycles&) {
    result.bl_per_cycle = std::nan("");
    result.deg_per_cycle = std::nan("");
  }

  if (terrain.variant == TerrainVariant::Stairs) {
    const auto [steps, rate] = stairs_per_cycle(log, terrain, config.descend, period);
    result.steps_completed = steps;
    (config.descend ? result.stairs_down_per_cycle : result.stairs_up_per_cycle) = rate;
    result.success = steps >= terrain.stairs.count && ended_by != FailureReason::NumericalDivergence;
    if (!result.success && ended_by == FailureReason::None) {
      ended_by = FailureReason::Timeout;  // ran out of time mid-flight
    }
  } else if (terrain.variant == TerrainVariant::Incline) {
    const double end_x = incline_end_x(terrain);
    double max_x = 0.0;
    for (const auto& r : log) max_x = std::max(max_x, r.com.x);
    result.success = max_x >= end_x;
    if (!result.success && ended_by == FailureReason::None) {
      ended_by = FailureReason::Timeout;
    }
  } else {
    result.success = ended_by == FailureReason::None;
  }
  result.failure_reason = ended_by;

  return {result, std::move(log)};
}

}  // namespace tailsim
