#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tailsim/cli.hpp"
#include "tailsim/config.hpp"
#include "tailsim/csv_log.hpp"
#include "tailsim/errors.hpp"
#include "tailsim/metrics.hpp"
#include "tailsim/rng.hpp"
#include "tailsim/summary.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tailsim;
namespace fs = std::filesystem;

namespace {

constexpr double kT = 2.0;

TrajectoryLog straight_log(double dx_per_cycle, int cycles, double yaw = 0.0) {
  TrajectoryLog log;
  const double dt = 0.05;
  const double speed = dx_per_cycle / kT;
  for (double t = 0.0; t <= cycles * kT + 1e-9; t += dt) {
    TrajectoryRecord r;
    r.time = t;
    r.com = {speed * t * std::cos(yaw), speed * t * std::sin(yaw), 0.05};
    r.yaw = yaw;
    log.push_back(r);
  }
  return log;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tailsim_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(std::initializer_list<std::string> args) {
  std::vector<std::string> argv_s{"tailsim"};
  argv_s.insert(argv_s.end(), args);
  std::vector<const char*> argv;
  for (const auto& a : argv_s) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("bl_per_cycle on synthetic straight logs") {
  CHECK(bl_per_cycle(straight_log(0.09, 6), kT) == doctest::Approx(0.45));
  CHECK(bl_per_cycle(straight_log(0.0, 6), kT) == doctest::Approx(0.0));
  CHECK(bl_per_cycle(straight_log(-0.04, 6), kT) == doctest::Approx(-0.20));
  // displacement measured along the initial heading
  CHECK(bl_per_cycle(straight_log(0.09, 6, 0.4), kT) == doctest::Approx(0.45));
}

TEST_CASE("bl_per_cycle of a time-reversed straight log negates") {
  TrajectoryLog fwd = straight_log(0.08, 6);
  TrajectoryLog rev;
  const double t_end = fwd.back().time;
  for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) {
    TrajectoryRecord r = *it;
    r.time = t_end - r.time;
    rev.push_back(r);
  }
  CHECK(bl_per_cycle(rev, kT) == doctest::Approx(-bl_per_cycle(fwd, kT)));
}

TEST_CASE("bl_per_cycle requires four cycles") {
  CHECK_THROWS_AS(bl_per_cycle(straight_log(0.09, 3), kT), InsufficientCycles);
}

TEST_CASE("deg_per_cycle on synthetic logs") {
  CHECK(deg_per_cycle(straight_log(0.09, 6), kT) == doctest::Approx(0.0));

  // 2 deg-per-cycle spiral
  TrajectoryLog spiral;
  for (double t = 0.0; t <= 8 * kT + 1e-9; t += 0.05) {
    TrajectoryRecord r;
    r.time = t;
    r.yaw = 2.0 * (t / kT) * 3.14159265358979323846 / 180.0;
    spiral.push_back(r);
  }
  CHECK(deg_per_cycle(spiral, kT) == doctest::Approx(2.0).epsilon(1e-6));

  // alternating +3 / -3 per cycle averages |delta| = 3
  TrajectoryLog zigzag;
  for (double t = 0.0; t <= 8 * kT + 1e-9; t += 0.05) {
    TrajectoryRecord r;
    r.time = t;
    const int cycle = static_cast<int>(t / kT);
    const double frac = t / kT - cycle;
    const double step = (cycle % 2 == 0) ? 3.0 : -3.0;
    double base = (cycle % 2 == 0) ? 0.0 : 3.0;
    r.yaw = (base + step * frac) * 3.14159265358979323846 / 180.0;
    zigzag.push_back(r);
  }
  CHECK(deg_per_cycle(zigzag, kT) == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("stairs metric on synthetic logs") {
  const Terrain stairs = stairs_terrain();

  // never leaves the ground
  TrajectoryLog flat;
  for (double t = 0.0; t <= 10 * kT; t += 0.1) {
    TrajectoryRecord r;
    r.time = t;
    for (int f = 0; f < 4; ++f) r.foot_tread[f] = 0;
    flat.push_back(r);
  }
  const auto [s0, r0] = stairs_per_cycle(flat, stairs, false, kT);
  CHECK(s0 == 0);
  CHECK(r0 == 0.0);

  // all four feet on tread 1, then tread 2 completed at exactly 4 cycles
  TrajectoryLog climb;
  for (double t = 0.0; t <= 5 * kT; t += 0.1) {
    TrajectoryRecord r;
    r.time = t;
    const int tread = t + 1e-9 >= 4 * kT ? 2 : (t + 1e-9 >= 1.0 * kT ? 1 : 0);
    for (int f = 0; f < 4; ++f) r.foot_tread[f] = tread;
    climb.push_back(r);
  }
  const auto [s1, r1] = stairs_per_cycle(climb, stairs, false, kT);
  CHECK(s1 == 2);
  CHECK(r1 == doctest::Approx(0.5));

  // a tread only three feet ever touch stays uncounted
  TrajectoryLog partial = climb;
  for (auto& rec : partial) {
    if (rec.foot_tread[3] == 2) rec.foot_tread[3] = 1;
  }
  const auto [s2, r2] = stairs_per_cycle(partial, stairs, false, kT);
  CHECK(s2 == 1);

  CHECK_THROWS_AS(stairs_per_cycle(climb, flat_terrain(), false, kT), WrongTerrain);
}

TEST_CASE("stairs metric is monotone in the log prefix") {
  const Terrain stairs = stairs_terrain();
  TrajectoryLog log;
  Rng rng(23);
  int prev_steps = 0;
  for (double t = 0.0; t <= 30 * kT; t += 0.5) {
    TrajectoryRecord r;
    r.time = t;
    for (int f = 0; f < 4; ++f) {
      r.foot_tread[f] = static_cast<int>(rng.uniform(0, 6.999)) - 1;  // -1..5
    }
    log.push_back(r);
    if (log.back().time >= 4 * kT) {
      const auto [steps, rate] = stairs_per_cycle(log, stairs, false, kT);
      CHECK(steps >= prev_steps);
      prev_steps = steps;
    }
  }
}

TEST_CASE("summarize basics") {
  TrialResult a;
  a.bl_per_cycle = 0.4;
  a.success = true;
  TrialResult b;
  b.bl_per_cycle = 0.5;

  const Aggregate single = summarize({a});
  CHECK(single.bl_mean == doctest::Approx(0.4));
  CHECK(single.bl_std == 0.0);
  CHECK(single.success_count == 1);

  const Aggregate two = summarize({a, b});
  CHECK(two.bl_mean == doctest::Approx(0.45));
  CHECK(two.bl_std == doctest::Approx(0.0707).epsilon(1e-3));

  CHECK_THROWS_AS(summarize({}), std::invalid_argument);
}

TEST_CASE("summarize skips non-finite metrics") {
  TrialResult a;
  a.bl_per_cycle = 0.4;
  TrialResult b;
  b.bl_per_cycle = std::nan("");
  const Aggregate agg = summarize({a, b});
  CHECK(agg.bl_mean == doctest::Approx(0.4));
  CHECK(agg.n == 2);
}

TEST_CASE("trajectory CSV round-trips exactly") {
  Rng rng(31);
  TrajectoryLog log;
  for (int i = 0; i < 500; ++i) {
    TrajectoryRecord r;
    r.time = i * 1e-3;
    r.com = {rng.symmetric(2), rng.symmetric(2), rng.uniform(0, 0.1)};
    r.yaw = rng.symmetric(3.2);
    r.pitch = rng.symmetric(1.5);
    r.roll = rng.symmetric(1.5);
    for (int f = 0; f < 4; ++f) {
      r.foot_tread[f] = static_cast<int>(rng.uniform(0, 7.999)) - 1;
    }
    r.tail_tip = {rng.symmetric(1), rng.symmetric(1), rng.symmetric(1)};
    r.tail_tread = static_cast<int>(rng.uniform(0, 7.999)) - 1;
    r.reel_deg = rng.uniform(0, 90);
    r.phase = rng.uniform(0, 1);
    log.push_back(r);
  }
  const TrajectoryLog back = log_from_csv(log_to_csv(log));
  REQUIRE(back.size() == log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    CHECK(back[i].time == log[i].time);
    CHECK(back[i].com.x == log[i].com.x);
    CHECK(back[i].com.z == log[i].com.z);
    CHECK(back[i].yaw == log[i].yaw);
    CHECK(back[i].pitch == log[i].pitch);
    for (int f = 0; f < 4; ++f) CHECK(back[i].foot_tread[f] == log[i].foot_tread[f]);
    CHECK(back[i].tail_tip.z == log[i].tail_tip.z);
    CHECK(back[i].tail_tread == log[i].tail_tread);
    CHECK(back[i].reel_deg == log[i].reel_deg);
    CHECK(back[i].phase == log[i].phase);
  }
}

TEST_CASE("config parsing, defaults and strict unknown-key rejection") {
  const ConfigMap cfg = ConfigMap::parse_string(
      "# comment\n"
      "terrain.variant = stairs\n"
      "tail.variant = flexible\n"
      "policy.kind = periodic\n"
      "sim.trials = 2\n");
  const ExperimentConfig c = experiment_from_config(cfg);
  CHECK(c.terrain.variant == TerrainVariant::Stairs);
  CHECK(c.tail.variant == TailVariant::Flexible);
  CHECK(c.policy.kind == TailPolicyKind::Periodic);
  CHECK(c.sim.trials == 2);
  CHECK(c.sim.dt == 1e-3);
  cfg.reject_unknown_keys();  // everything consumed

  const ConfigMap bad = ConfigMap::parse_string("terrain.variant = flat\nterrian.mu = 0.5\n");
  (void)experiment_from_config(bad);
  CHECK_THROWS_AS(bad.reject_unknown_keys(), ConfigError);

  CHECK_THROWS_AS(ConfigMap::parse_string("no equals sign here"), ConfigError);
  CHECK_THROWS_AS(experiment_from_config(ConfigMap::parse_string("sim.dt = 0\n")), ConfigError);
  CHECK_THROWS_AS(experiment_from_config(ConfigMap::parse_string("sim.dt = 0.01\n")), ConfigError);
  CHECK_THROWS_AS(experiment_from_config(ConfigMap::parse_string("tail.variant = wiggly\n")),
                  ConfigError);
}

TEST_CASE("resolved config is a fixed point of the loader") {
  const ConfigMap cfg = ConfigMap::parse_string(
      "terrain.variant = incline\n"
      "terrain.incline.angle_deg = 17.5\n"
      "tail.variant = rigid\n"
      "sim.seed = 999\n");
  const ExperimentConfig c1 = experiment_from_config(cfg);
  const ConfigMap r1 = resolved_config(c1);
  const ExperimentConfig c2 = experiment_from_config(r1);
  const ConfigMap r2 = resolved_config(c2);
  CHECK(r1.serialize() == r2.serialize());
  CHECK(c2.terrain.incline.angle_deg == 17.5);
}

TEST_CASE("run_trial is deterministic and reruns byte-identically") {
  ConfigMap cfg = ConfigMap::parse_string(
      "terrain.variant = flat\n"
      "tail.variant = none\n"
      "sim.trials = 1\n"
      "sim.max_time = 21\n");
  const ExperimentConfig config = experiment_from_config(cfg);
  const auto [r1, log1] = run_trial(config, 0);
  const auto [r2, log2] = run_trial(config, 0);
  CHECK(log_to_csv(log1) == log_to_csv(log2));
  CHECK(r1.bl_per_cycle == r2.bl_per_cycle);
  CHECK(r1.deg_per_cycle == r2.deg_per_cycle);

  // different trial index -> different jitter -> different trajectory
  const auto [r3, log3] = run_trial(config, 1);
  CHECK(log_to_csv(log1) != log_to_csv(log3));
}

TEST_CASE("cli run twice produces byte-identical outputs, report preserves metrics") {
  const fs::path dir = fresh_dir("cli");
  const fs::path cfg_path = dir / "exp.cfg";
  {
    std::ofstream out(cfg_path);
    out << "name = smoke\n"
           "terrain.variant = flat\n"
           "tail.variant = rigid\n"
           "sim.trials = 1\n"
           "sim.max_time = 21\n";
  }
  const fs::path out1 = dir / "out1";
  const fs::path out2 = dir / "out2";
  CHECK(run_cli({"run", cfg_path.string(), "--out", out1.string()}) == 0);
  CHECK(run_cli({"run", cfg_path.string(), "--out", out2.string()}) == 0);

  CHECK(read_file(out1 / "trial_000.csv") == read_file(out2 / "trial_000.csv"));
  CHECK(read_file(out1 / "summary.json") == read_file(out2 / "summary.json"));
  CHECK(!read_file(out1 / "summary.txt").empty());

  // report recomputes the metrics from the logs and reproduces them exactly
  const std::string before = read_file(out1 / "summary.json");
  CHECK(run_cli({"report", out1.string()}) == 0);
  CHECK(read_file(out1 / "summary.json") == before);
}

TEST_CASE("cli error paths have nonzero exits") {
  const fs::path dir = fresh_dir("cli_err");
  CHECK(run_cli({"report", (dir / "nothing_here").string()}) != 0);
  CHECK(run_cli({"run", (dir / "missing.cfg").string()}) != 0);

  const fs::path bad_cfg = dir / "bad.cfg";
  {
    std::ofstream out(bad_cfg);
    out << "definitely.not.a.key = 1\n";
  }
  CHECK(run_cli({"run", bad_cfg.string(), "--out", (dir / "o").string()}) != 0);
}

TEST_CASE("cli --set overrides config keys") {
  const fs::path dir = fresh_dir("cli_set");
  const fs::path cfg_path = dir / "exp.cfg";
  {
    std::ofstream out(cfg_path);
    out << "terrain.variant = flat\ntail.variant = none\nsim.trials = 1\nsim.max_time = 21\n";
  }
  const fs::path out = dir / "out";
  CHECK(run_cli({"run", cfg_path.string(), "--out", out.string(), "--set",
                 "gait.period=1.9"}) == 0);
  const ConditionSummary s = summary_from_json(read_file(out / "summary.json"));
  CHECK(s.config.get_string("gait.period", "") == "1.8999999999999999");
}

TEST_CASE("summary json round-trip") {
  ConditionSummary s;
  s.name = "roundtrip";
  s.config.set("terrain.variant", "flat");
  TrialResult r;
  r.bl_per_cycle = 0.43;
  r.deg_per_cycle = std::nan("");
  r.steps_completed = 3;
  r.success = true;
  r.failure_reason = FailureReason::Stuck;
  r.end_time = 12.5;
  r.cycles = 6;
  s.trials.push_back(r);
  s.aggregate = summarize(s.trials);

  const ConditionSummary back = summary_from_json(summary_to_json(s));
  CHECK(back.name == "roundtrip");
  REQUIRE(back.trials.size() == 1);
  CHECK(back.trials[0].bl_per_cycle == 0.43);
  CHECK(std::isnan(back.trials[0].deg_per_cycle));
  CHECK(back.trials[0].failure_reason == FailureReason::Stuck);
  CHECK(back.trials[0].success);
}
