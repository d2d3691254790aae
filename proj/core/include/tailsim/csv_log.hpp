#pragma once

// Trajectory log CSV. Column order is part of the output contract:
//   time, com_x, com_y, com_z, yaw, pitch, roll,
//   fl, fr, rl, rr, tail_x, tail_y, tail_z, tail_contact, reel_deg, phase
// Contact columns hold 0 when airborne and tread_index + 1 when touching
// (so they read as booleans on flat ground and identify the tread on
// stairs). Doubles round-trip exactly.

#include "tailsim/experiment.hpp"

#include <string>

namespace tailsim {

std::string log_to_csv(const TrajectoryLog& log);
TrajectoryLog log_from_csv(const std::string& csv);  // throws ConfigError on malformed input

void write_log_file(const std::string& path, const TrajectoryLog& log);
TrajectoryLog read_log_file(const std::string& path);

}  // namespace tailsim
