#include "tailsim/summary.hpp"

#include "tailsim/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>

namespace tailsim {

namespace {

using nlohmann::json;

double json_double(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nan("");
  return it->get<double>();
}

std::string fmt(double v, const char* spec = "%.4f") {
  if (!std::isfinite(v)) return "n/a";
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

std::string summary_to_json(const ConditionSummary& s) {
  json j;
  j["schema"] = "tailsim-summary-v1";
  j["name"] = s.name;
  json cfg = json::object();
  for (const auto& [k, v] : s.config.values()) cfg[k] = v;
  j["config"] = cfg;

  json trials = json::array();
  for (std::size_t i = 0; i < s.trials.size(); ++i) {
    const TrialResult& r = s.trials[i];
    json t;
    t["index"] = i;
    t["bl_per_cycle"] = r.bl_per_cycle;
    t["deg_per_cycle"] = r.deg_per_cycle;
    t["stairs_up_per_cycle"] = r.stairs_up_per_cycle;
    t["stairs_down_per_cycle"] = r.stairs_down_per_cycle;
    t["steps_completed"] = r.steps_completed;
    t["success"] = r.success;
    t["failure_reason"] = failure_reason_name(r.failure_reason);
    t["end_time"] = r.end_time;
    t["cycles"] = r.cycles;
    trials.push_back(t);
  }
  j["trials"] = trials;

  json agg;
  agg["n"] = s.aggregate.n;
  agg["success_count"] = s.aggregate.success_count;
  agg["steps_total"] = s.aggregate.steps_total;
  agg["bl_mean"] = s.aggregate.bl_mean;
  agg["bl_std"] = s.aggregate.bl_std;
  agg["deg_mean"] = s.aggregate.deg_mean;
  agg["deg_std"] = s.aggregate.deg_std;
  agg["stairs_mean"] = s.aggregate.stairs_mean;
  agg["stairs_std"] = s.aggregate.stairs_std;
  j["aggregate"] = agg;
  return j.dump(2) + "\n";
}

ConditionSummary summary_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("summary JSON parse error: ") + e.what());
  }
  if (!j.contains("schema") || j["schema"] != "tailsim-summary-v1") {
    throw ConfigError("summary JSON: unknown schema");
  }
  ConditionSummary s;
  s.name = j.value("name", std::string("condition"));
  for (const auto& [k, v] : j.at("config").items()) {
    s.config.set(k, v.get<std::string>());
  }
  for (const auto& t : j.at("trials")) {
    TrialResult r;
    r.bl_per_cycle = json_double(t, "bl_per_cycle");
    r.deg_per_cycle = json_double(t, "deg_per_cycle");
    r.stairs_up_per_cycle = json_double(t, "stairs_up_per_cycle");
    r.stairs_down_per_cycle = json_double(t, "stairs_down_per_cycle");
    r.steps_completed = t.value("steps_completed", 0);
    r.success = t.value("success", false);
    r.failure_reason = failure_reason_from_name(t.value("failure_reason", std::string("none")));
    r.end_time = json_double(t, "end_time");
    r.cycles = t.value("cycles", 0);
    s.trials.push_back(r);
  }
  if (!s.trials.empty()) {
    s.aggregate = summarize(s.trials);
  }
  return s;
}

std::string summary_table(const std::vector<ConditionSummary>& summaries) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-28s %3s %8s %16s %16s %14s %6s\n", "condition", "n",
                "success", "BL/cycle", "deg/cycle", "stairs/cycle", "steps");
  out += line;
  out += std::string(96, '-') + "\n";
  for (const auto& s : summaries) {
    const auto& a = s.aggregate;
    std::snprintf(line, sizeof(line), "%-28s %3d %5d/%-2d %7s+-%-7s %7s+-%-7s %6s+-%-6s %6d\n",
                  s.name.c_str(), a.n, a.success_count, a.n, fmt(a.bl_mean, "%.3f").c_str(),
                  fmt(a.bl_std, "%.3f").c_str(), fmt(a.deg_mean, "%.2f").c_str(),
                  fmt(a.deg_std, "%.2f").c_str(), fmt(a.stairs_mean, "%.3f").c_str(),
                  fmt(a.stairs_std, "%.3f").c_str(), a.steps_total);
    out += line;
  }
  return out;
}

}  // namespace tailsim
