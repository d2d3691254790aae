#pragma once

// Locomotion metrics, all pure functions of a trajectory log so `report`
// can recompute them from stored CSVs bit-exactly.

#include "tailsim/experiment.hpp"

#include <utility>
#include <vector>

namespace tailsim {

// Net displacement along the heading at the start of the measurement window,
// per cycle, normalized by body length. The first cycle is warmup and
// excluded. Throws InsufficientCycles when the log spans < 4 full cycles.
double bl_per_cycle(const TrajectoryLog& log, double period, double body_length = 0.20);

// Mean absolute body-yaw change per cycle, degrees; warmup excluded.
double deg_per_cycle(const TrajectoryLog& log, double period);

// Steps climbed and steps per cycle. A tread counts at the first instant all
// four feet have (each at some point) contacted it: treads above ground for
// up runs, treads below the start for down runs.
std::pair<int, double> stairs_per_cycle(const TrajectoryLog& log, const Terrain& terrain,
                                        bool descend = false, double period = 2.0);

struct Aggregate {
  int n = 0;
  int success_count = 0;
  int steps_total = 0;
  // mean / sample std over trials with a finite value of each metric
  double bl_mean = 0.0, bl_std = 0.0;
  double deg_mean = 0.0, deg_std = 0.0;
  double stairs_mean = 0.0, stairs_std = 0.0;
};

// Mean and sample standard deviation of each metric. Throws
// std::invalid_argument on an empty list.
Aggregate summarize(const std::vector<TrialResult>& results);

}  // namespace tailsim
