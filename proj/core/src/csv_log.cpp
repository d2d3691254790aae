#include "tailsim/csv_log.hpp"

#include "tailsim/errors.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace tailsim {

namespace {

constexpr const char* kHeader =
    "time,com_x,com_y,com_z,yaw,pitch,roll,fl,fr,rl,rr,tail_x,tail_y,tail_z,tail_contact,"
    "reel_deg,phase";

void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void append_flag(std::string& out, int tread) {
  // 0 = no contact, tread index + 1 otherwise
  out += std::to_string(tread < 0 ? 0 : tread + 1);
}

double parse_double(const char*& p, const char* end) {
  double v = 0.0;
  const auto res = std::from_chars(p, end, v);
  if (res.ec != std::errc{}) {
    throw ConfigError("malformed CSV number");
  }
  p = res.ptr;
  if (p < end && *p == ',') ++p;
  return v;
}

int parse_flag(const char*& p, const char* end) {
  int v = 0;
  const auto res = std::from_chars(p, end, v);
  if (res.ec != std::errc{}) {
    throw ConfigError("malformed CSV contact flag");
  }
  p = res.ptr;
  if (p < end && *p == ',') ++p;
  return v - 1;  // back to -1 = none / tread index
}

}  // namespace

std::string log_to_csv(const TrajectoryLog& log) {
  std::string out = kHeader;
  out += '\n';
  for (const auto& r : log) {
    append_double(out, r.time); out += ',';
    append_double(out, r.com.x); out += ',';
    append_double(out, r.com.y); out += ',';
    append_double(out, r.com.z); out += ',';
    append_double(out, r.yaw); out += ',';
    append_double(out, r.pitch); out += ',';
    append_double(out, r.roll); out += ',';
    for (int f = 0; f < 4; ++f) {
      append_flag(out, r.foot_tread[f]);
      out += ',';
    }
    append_double(out, r.tail_tip.x); out += ',';
    append_double(out, r.tail_tip.y); out += ',';
    append_double(out, r.tail_tip.z); out += ',';
    append_flag(out, r.tail_tread); out += ',';
    append_double(out, r.reel_deg); out += ',';
    append_double(out, r.phase);
    out += '\n';
  }
  return out;
}

TrajectoryLog log_from_csv(const std::string& csv) {
  TrajectoryLog log;
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw ConfigError("trajectory CSV: unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    TrajectoryRecord r;
    r.time = parse_double(p, end);
    r.com.x = parse_double(p, end);
    r.com.y = parse_double(p, end);
    r.com.z = parse_double(p, end);
    r.yaw = parse_double(p, end);
    r.pitch = parse_double(p, end);
    r.roll = parse_double(p, end);
    for (int f = 0; f < 4; ++f) r.foot_tread[f] = parse_flag(p, end);
    r.tail_tip.x = parse_double(p, end);
    r.tail_tip.y = parse_double(p, end);
    r.tail_tip.z = parse_double(p, end);
    r.tail_tread = parse_flag(p, end);
    r.reel_deg = parse_double(p, end);
    r.phase = parse_double(p, end);
    log.push_back(r);
  }
  return log;
}

void write_log_file(const std::string& path, const TrajectoryLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write log file: " + path);
  }
  out << log_to_csv(log);
}

TrajectoryLog read_log_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read log file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return log_from_csv(ss.str());
}

}  // namespace tailsim
