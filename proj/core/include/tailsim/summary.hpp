#pragma once

// Condition summaries: JSON (machine-readable, embeds the resolved config
// for provenance) and a plain-text comparison table.

#include "tailsim/config.hpp"
#include "tailsim/experiment.hpp"
#include "tailsim/metrics.hpp"

#include <string>
#include <vector>

namespace tailsim {

struct ConditionSummary {
  std::string name;
  ConfigMap config;  // resolved experiment config
  std::vector<TrialResult> trials;
  Aggregate aggregate;
};

std::string summary_to_json(const ConditionSummary& summary);
ConditionSummary summary_from_json(const std::string& json_text);  // throws ConfigError

// One row per condition.
std::string summary_table(const std::vector<ConditionSummary>& summaries);

}  // namespace tailsim
