#include "simbiped/telemetry.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "simbiped/errors.hpp"

namespace simbiped {

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  out << ',' << buf;
}

}  // namespace

std::string telemetry_header(const std::vector<std::string>& joint_names) {
  std::string h = "t,com_x,com_z,com_vx,com_vz,torso_pitch";
  for (const std::string& j : joint_names) {
    h += "," + j + "_desired," + j + "_actual," + j + "_velocity," + j + "_torque";
  }
  h += ",contact_left,contact_right,step_index";
  return h;
}

void write_telemetry(const Telemetry& telemetry, std::ostream& out) {
  out << telemetry_header(telemetry.joint_names) << '\n';
  for (const TelemetryRecord& r : telemetry.records) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", r.t);
    out << buf;
    put(out, r.com_x);
    put(out, r.com_z);
    put(out, r.com_vx);
    put(out, r.com_vz);
    put(out, r.torso_pitch);
    for (const JointSample& j : r.joints) {
      put(out, j.desired);
      put(out, j.actual);
      put(out, j.velocity);
      put(out, j.torque);
    }
    out << ',' << int(r.contact[0]) << ',' << int(r.contact[1]) << ',' << r.step_index << '\n';
  }
}

void write_telemetry(const Telemetry& telemetry, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_telemetry(telemetry, out);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string format_telemetry(const Telemetry& telemetry) {
  std::ostringstream out;
  write_telemetry(telemetry, out);
  return out.str();
}

}  // namespace simbiped
