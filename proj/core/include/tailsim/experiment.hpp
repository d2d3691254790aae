#pragma once

// Experiment configuration and the per-trial simulation loop.

#include "tailsim/config.hpp"
#include "tailsim/controller.hpp"
#include "tailsim/robot.hpp"
#include "tailsim/terrain.hpp"
#include "tailsim/world.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tailsim {

struct SimParams {
  double dt = 1.0e-3;       // s, must stay in (0, 5e-3]
  double max_time = 40.0;   // s
  int trials = 5;
  std::uint64_t seed = 42;
  double jitter_pos = 0.002;     // m, initial-pose jitter
  double jitter_yaw_deg = 0.5;
  double servo_bias_deg = 1.5;   // per-trial servo trim error, uniform
  double servo_gain_jitter = 0.02;
  double stuck_threshold = 0.02; // m of CoM motion...
  int stuck_window_cycles = 3;   // ...over this many cycles
  int stuck_warmup_cycles = 2;
};

struct ExperimentConfig {
  std::string name = "experiment";
  Terrain terrain;
  bool descend = false;  // stairs: start on the plateau, walk down
  Morphology morphology;
  TailKind tail;
  TailPolicy policy;
  GaitParams gait;
  SimParams sim;
};

// Throws ConfigError when invariants are violated (dt range, trial count,
// amplitudes vs servo ranges, max_time vs period).
void validate(const ExperimentConfig& config);

// Loads an experiment from a parsed config; reads every recognized key so
// reject_unknown_keys() afterwards catches typos.
ExperimentConfig experiment_from_config(const ConfigMap& cfg);

// Full resolved key set for provenance; feeding it back through
// experiment_from_config reproduces the same experiment.
ConfigMap resolved_config(const ExperimentConfig& config);

struct TrajectoryRecord {
  double time = 0.0;
  Vec3 com;
  double yaw = 0.0, pitch = 0.0, roll = 0.0;  // rad
  int foot_tread[4] = {-1, -1, -1, -1};  // FL FR RL RR; -1 = airborne, else tread index
  Vec3 tail_tip;
  int tail_tread = -1;
  double reel_deg = 0.0;
  double phase = 0.0;
};

using TrajectoryLog = std::vector<TrajectoryRecord>;

enum class FailureReason { None, OffRunway, Stuck, NumericalDivergence, Timeout };

const char* failure_reason_name(FailureReason reason);
FailureReason failure_reason_from_name(const std::string& name);

struct TrialResult {
  double bl_per_cycle = 0.0;
  double deg_per_cycle = 0.0;
  double stairs_up_per_cycle = 0.0;
  double stairs_down_per_cycle = 0.0;
  int steps_completed = 0;
  bool success = false;
  FailureReason failure_reason = FailureReason::None;
  double end_time = 0.0;
  int cycles = 0;  // whole gait cycles recorded
};

// Start pose for a terrain: before the ramp / first riser, or on the stairs
// plateau when descending.
SpawnPose spawn_for(const ExperimentConfig& config);

// Runs one trial. Deterministic in (config, trial_index); per-trial seeds
// derive from sim.seed. A NumericalDivergence inside the stepper becomes a
// failure reason, never an exception.
std::pair<TrialResult, TrajectoryLog> run_trial(const ExperimentConfig& config, int trial_index);

}  // namespace tailsim
