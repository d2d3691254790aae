#include "tailsim/metrics.hpp"

#include "tailsim/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace tailsim {

namespace {

constexpr double kTimeEps = 1.0e-9;

// Index of the first record at or after time t.
std::size_t index_at(const TrajectoryLog& log, double t) {
  std::size_t lo = 0, hi = log.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (log[mid].time < t - kTimeEps) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return std::min(lo, log.size() - 1);
}

// Whole cycles spanned by the log.
int whole_cycles(const TrajectoryLog& log, double period) {
  return static_cast<int>(std::floor(log.back().time / period + kTimeEps));
}

double wrap_angle(double a) { return std::atan2(std::sin(a), std::cos(a)); }

struct Stats {
  double mean = 0.0;
  double std_dev = 0.0;
  int n = 0;
};

Stats finite_stats(const std::vector<double>& values) {
  Stats s;
  double sum = 0.0;
  for (const double v : values) {
    if (std::isfinite(v)) {
      sum += v;
      ++s.n;
    }
  }
  if (s.n == 0) return s;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (const double v : values) {
      if (std::isfinite(v)) {
        ss += (v - s.mean) * (v - s.mean);
      }
    }
    s.std_dev = std::sqrt(ss / (s.n - 1));
  }
  return s;
}

}  // namespace

double bl_per_cycle(const TrajectoryLog& log, double period, double body_length) {
  if (log.empty() || whole_cycles(log, period) < 4) {
    throw InsufficientCycles("bl_per_cycle needs at least 4 full cycles");
  }
  const int last_cycle = whole_cycles(log, period);
  const int n_cycles = last_cycle - 1;  // first cycle is warmup
  const TrajectoryRecord& a = log[index_at(log, period)];
  const TrajectoryRecord& b = log[index_at(log, last_cycle * period)];
  const double ux = std::cos(a.yaw);
  const double uy = std::sin(a.yaw);
  const double disp = (b.com.x - a.com.x) * ux + (b.com.y - a.com.y) * uy;
  return disp / (body_length * n_cycles);
}

double deg_per_cycle(const TrajectoryLog& log, double period) {
  if (log.empty() || whole_cycles(log, period) < 4) {
    throw InsufficientCycles("deg_per_cycle needs at least 4 full cycles");
  }
  const int last_cycle = whole_cycles(log, period);
  double sum = 0.0;
  int n = 0;
  for (int c = 1; c < last_cycle; ++c) {
    const double y0 = log[index_at(log, c * period)].yaw;
    const double y1 = log[index_at(log, (c + 1) * period)].yaw;
    sum += std::abs(wrap_angle(y1 - y0));
    ++n;
  }
  return sum / n * 180.0 / 3.14159265358979323846;
}

std::pair<int, double> stairs_per_cycle(const TrajectoryLog& log, const Terrain& terrain,
                                        bool descend, double period) {
  if (terrain.variant != TerrainVariant::Stairs) {
    throw WrongTerrain("stairs_per_cycle requires stairs terrain");
  }
  const int count = terrain.stairs.count;
  const int start_tread = descend ? count : 0;

  // first time each foot touched each tread
  const double never = -1.0;
  std::vector<std::array<double, 4>> first_touch(static_cast<std::size_t>(count) + 1,
                                                 {never, never, never, never});
  std::vector<double> completed(static_cast<std::size_t>(count) + 1, never);
  for (const auto& rec : log) {
    for (int f = 0; f < 4; ++f) {
      const int tread = rec.foot_tread[f];
      if (tread < 0 || tread > count) continue;
      auto& ft = first_touch[static_cast<std::size_t>(tread)];
      if (ft[static_cast<std::size_t>(f)] == never) {
        ft[static_cast<std::size_t>(f)] = rec.time;
        if (completed[static_cast<std::size_t>(tread)] == never &&
            std::all_of(ft.begin(), ft.end(), [&](double t) { return t != never; })) {
          completed[static_cast<std::size_t>(tread)] = rec.time;
        }
      }
    }
  }

  int steps = 0;
  double t_last = 0.0;
  for (int k = 0; k <= count; ++k) {
    const bool counts = descend ? (k < start_tread) : (k >= 1);
    if (counts && completed[static_cast<std::size_t>(k)] != never) {
      ++steps;
      t_last = std::max(t_last, completed[static_cast<std::size_t>(k)]);
    }
  }
  if (steps == 0) {
    return {0, 0.0};
  }
  const double cycles = t_last / period;
  return {steps, cycles > 0.0 ? steps / cycles : 0.0};
}

Aggregate summarize(const std::vector<TrialResult>& results) {
  if (results.empty()) {
    throw std::invalid_argument("summarize: no trial results");
  }
  Aggregate agg;
  agg.n = static_cast<int>(results.size());
  std::vector<double> bl, deg, stairs;
  for (const auto& r : results) {
    if (r.success) ++agg.success_count;
    agg.steps_total += r.steps_completed;
    bl.push_back(r.bl_per_cycle);
    deg.push_back(r.deg_per_cycle);
    stairs.push_back(r.stairs_up_per_cycle != 0.0 ? r.stairs_up_per_cycle : r.stairs_down_per_cycle);
  }
  const Stats sb = finite_stats(bl);
  agg.bl_mean = sb.mean;
  agg.bl_std = sb.std_dev;
  const Stats sd = finite_stats(deg);
  agg.deg_mean = sd.mean;
  agg.deg_std = sd.std_dev;
  const Stats ss = finite_stats(stairs);
  agg.stairs_mean = ss.mean;
  agg.stairs_std = ss.std_dev;
  return agg;
}

}  // namespace tailsim
