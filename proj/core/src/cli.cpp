#include "tailsim/cli.hpp"

#include "tailsim/csv_log.hpp"
#include "tailsim/errors.hpp"
#include "tailsim/experiment.hpp"
#include "tailsim/metrics.hpp"
#include "tailsim/summary.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tailsim {

namespace {

namespace fs = std::filesystem;

struct CommonFlags {
  std::vector<std::string> overrides;  // key=value
  std::string out_dir = "tailsim_out";
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> max_time;
};

void apply_flags(ConfigMap& cfg, const CommonFlags& flags) {
  for (const auto& kv : flags.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set expects key=value, got: " + kv);
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (flags.trials) cfg.set("sim.trials", std::to_string(*flags.trials));
  if (flags.seed) cfg.set("sim.seed", std::to_string(*flags.seed));
  if (flags.dt) cfg.set("sim.dt", std::to_string(*flags.dt));
  if (flags.max_time) cfg.set("sim.max_time", std::to_string(*flags.max_time));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write: " + path.string());
  }
  out << text;
}

std::string trial_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "trial_%03d.csv", index);
  return buf;
}

ConditionSummary run_condition(const ExperimentConfig& config, const fs::path& dir) {
  fs::create_directories(dir);
  ConditionSummary summary;
  summary.name = config.name;
  summary.config = resolved_config(config);
  for (int i = 0; i < config.sim.trials; ++i) {
    auto [result, log] = run_trial(config, i);
    write_log_file((dir / trial_file_name(i)).string(), log);
    summary.trials.push_back(result);
  }
  summary.aggregate = summarize(summary.trials);
  write_text(dir / "summary.json", summary_to_json(summary));
  write_text(dir / "summary.txt", summary_table({summary}));
  return summary;
}

// Consume sweep-only keys so a shared config passes strict checking in `run`.
void consume_sweep_keys(const ConfigMap& cfg) {
  cfg.get_list("sweep.tails", {});
  cfg.get_list("sweep.terrains", {});
  for (const char* label : {"flat", "incline", "stairs_up", "stairs_down", "heightfield"}) {
    cfg.get_string(std::string("sweep.policy.") + label, "");
  }
}

struct TerrainChoice {
  std::string label;  // e.g. incline15
  std::string kind;   // flat | incline | stairs_up | stairs_down | heightfield
  double incline_deg = 0.0;
};

TerrainChoice parse_terrain_label(const std::string& s) {
  TerrainChoice t;
  if (s.rfind("incline:", 0) == 0) {
    t.kind = "incline";
    const std::string deg = s.substr(8);
    t.incline_deg = std::stod(deg);
    t.label = "incline" + deg;
    return t;
  }
  if (s == "flat" || s == "stairs_up" || s == "stairs_down" || s == "heightfield") {
    t.kind = s;
    t.label = s;
    return t;
  }
  throw ConfigError("unknown sweep terrain: " + s +
                    " (expected flat, incline:<deg>, stairs_up, stairs_down, heightfield)");
}

int cmd_run(const std::string& config_path, const CommonFlags& flags) {
  ConfigMap cfg = ConfigMap::parse_file(config_path);
  apply_flags(cfg, flags);
  consume_sweep_keys(cfg);
  const ExperimentConfig config = experiment_from_config(cfg);
  cfg.reject_unknown_keys();

  const ConditionSummary summary = run_condition(config, flags.out_dir);
  std::cout << summary_table({summary});
  std::cout << "wrote " << summary.trials.size() << " trial logs to " << flags.out_dir << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const CommonFlags& flags) {
  ConfigMap base = ConfigMap::parse_file(config_path);
  apply_flags(base, flags);
  const auto tails = base.get_list("sweep.tails", {"none", "rigid", "flexible"});
  const auto terrains = base.get_list(
      "sweep.terrains",
      {"flat", "incline:10", "incline:15", "incline:20", "incline:25", "stairs_up", "stairs_down",
       "heightfield"});

  // The flexible tail runs the policy the physical experiments used per
  // terrain unless overridden.
  const std::map<std::string, std::string> default_policy{{"flat", "constant_stiff"},
                                                          {"incline", "constant_stiff"},
                                                          {"stairs_up", "periodic"},
                                                          {"stairs_down", "relaxed"},
                                                          {"heightfield", "periodic"}};

  // Validate the base config once with all keys consumed.
  {
    ConfigMap probe = base;
    consume_sweep_keys(probe);
    (void)experiment_from_config(probe);
    probe.reject_unknown_keys();
  }

  std::vector<ConditionSummary> summaries;
  for (const auto& terrain_label : terrains) {
    const TerrainChoice choice = parse_terrain_label(terrain_label);
    for (const auto& tail : tails) {
      ConfigMap cfg = base;
      consume_sweep_keys(cfg);
      cfg.set("tail.variant", tail);
      if (choice.kind == "incline") {
        cfg.set("terrain.variant", "incline");
        cfg.set("terrain.incline.angle_deg", std::to_string(choice.incline_deg));
      } else if (choice.kind == "stairs_up") {
        cfg.set("terrain.variant", "stairs");
        cfg.set("terrain.stairs.descend", "false");
      } else if (choice.kind == "stairs_down") {
        cfg.set("terrain.variant", "stairs");
        cfg.set("terrain.stairs.descend", "true");
      } else {
        cfg.set("terrain.variant", choice.kind);
      }
      if (tail == "flexible") {
        const std::string policy =
            base.get_string("sweep.policy." + choice.kind, default_policy.at(choice.kind));
        if (!policy.empty()) cfg.set("policy.kind", policy);
      }
      const std::string name = tail + "_" + choice.label;
      cfg.set("name", name);

      const ExperimentConfig config = experiment_from_config(cfg);
      summaries.push_back(run_condition(config, fs::path(flags.out_dir) / name));
      std::cout << "finished " << name << "\n";
    }
  }

  const std::string table = summary_table(summaries);
  write_text(fs::path(flags.out_dir) / "sweep_summary.txt", table);
  std::string all_json = "[\n";
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    all_json += summary_to_json(summaries[i]);
    if (i + 1 < summaries.size()) all_json += ",";
  }
  all_json += "]\n";
  write_text(fs::path(flags.out_dir) / "sweep_summary.json", all_json);
  std::cout << table;
  return 0;
}

int cmd_report(const std::string& dir) {
  std::vector<fs::path> condition_dirs;
  const fs::path root(dir);
  if (fs::exists(root / "summary.json")) {
    condition_dirs.push_back(root);
  } else if (fs::is_directory(root)) {
    for (const auto& entry : fs::directory_iterator(root)) {
      if (entry.is_directory() && fs::exists(entry.path() / "summary.json")) {
        condition_dirs.push_back(entry.path());
      }
    }
    std::sort(condition_dirs.begin(), condition_dirs.end());
  }
  if (condition_dirs.empty()) {
    std::cerr << "error: no logs found in " << dir << "\n";
    return 4;
  }

  std::vector<ConditionSummary> summaries;
  for (const auto& cdir : condition_dirs) {
    std::ifstream in(cdir / "summary.json", std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ConditionSummary summary = summary_from_json(text);
    ExperimentConfig config = experiment_from_config(summary.config);

    // Recompute every metric from the stored trajectory logs; run-time
    // outcomes (success, failure reason) are kept as recorded.
    for (std::size_t i = 0; i < summary.trials.size(); ++i) {
      const fs::path log_path = cdir / trial_file_name(static_cast<int>(i));
      if (!fs::exists(log_path)) {
        throw ConfigError("missing trial log: " + log_path.string());
      }
      const TrajectoryLog log = read_log_file(log_path.string());
      TrialResult& r = summary.trials[i];
      try {
        r.bl_per_cycle = bl_per_cycle(log, config.gait.period, config.morphology.body_length);
        r.deg_per_cycle = deg_per_cycle(log, config.gait.period);
      } catch (const InsufficientCycles&) {
        r.bl_per_cycle = std::nan("");
        r.deg_per_cycle = std::nan("");
      }
      if (config.terrain.variant == TerrainVariant::Stairs) {
        const auto [steps, rate] = stairs_per_cycle(log, config.terrain, config.descend,
                                                    config.gait.period);
        r.steps_completed = steps;
        (config.descend ? r.stairs_down_per_cycle : r.stairs_up_per_cycle) = rate;
      }
    }
    summary.aggregate = summarize(summary.trials);
    write_text(cdir / "summary.json", summary_to_json(summary));
    write_text(cdir / "summary.txt", summary_table({summary}));
    summaries.push_back(std::move(summary));
  }

  const std::string table = summary_table(summaries);
  if (condition_dirs.size() > 1) {
    write_text(root / "sweep_summary.txt", table);
  }
  std::cout << table;
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"sprawling quadruped tail-stiffness locomotion experiments"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string config_path;
  std::string report_dir;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "experiment config file")->required();
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--trials", flags.trials, "trials per condition");
    cmd->add_option("--seed", flags.seed, "master random seed");
    cmd->add_option("--dt", flags.dt, "integration step, s");
    cmd->add_option("--max-time", flags.max_time, "simulated time per trial, s");
    cmd->add_option("--set", flags.overrides, "override any config key, key=value")
        ->take_all();
  };

  CLI::App* run = app.add_subcommand("run", "run one condition");
  add_common(run);
  CLI::App* sweep = app.add_subcommand("sweep", "run the tail x terrain cross product");
  add_common(sweep);
  CLI::App* report = app.add_subcommand("report", "recompute summaries from stored logs");
  report->add_option("dir", report_dir, "output directory of a previous run/sweep")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) return cmd_run(config_path, flags);
    if (sweep->parsed()) return cmd_sweep(config_path, flags);
    if (report->parsed()) return cmd_report(report_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace tailsim
