#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace simbiped {

struct JointSample {
  double desired = 0.0;
  double actual = 0.0;
  double velocity = 0.0;
  double torque = 0.0;
};

// One physics tick.
struct TelemetryRecord {
  double t = 0.0;
  double com_x = 0.0;
  double com_z = 0.0;
  double com_vx = 0.0;
  double com_vz = 0.0;
  double torso_pitch = 0.0;
  std::vector<JointSample> joints;
  std::array<bool, 2> contact{false, false};
  int step_index = 0;
};

struct Telemetry {
  std::vector<std::string> joint_names;
  std::vector<TelemetryRecord> records;
};

std::string telemetry_header(const std::vector<std::string>& joint_names);

// CSV with a fixed header and 9 significant digits.
void write_telemetry(const Telemetry& telemetry, std::ostream& out);
// Throws IoError when the file cannot be written.
void write_telemetry(const Telemetry& telemetry, const std::string& path);
std::string format_telemetry(const Telemetry& telemetry);

}  // namespace simbiped
