#include "scq/export.hpp"

#include <charconv>
#include <system_error>

#include "scq/errors.hpp"

namespace scq {

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw NumericError("failed to format a floating-point value");
  return std::string(buf, end);
}

void write_trajectory_csv(std::ostream& out, const BlochTrajectory& traj) {
  const bool fock = !traj.leakage.empty();
  out << "t,x,y,z,sx,sy,sz,norm" << (fock ? ",leakage" : "") << '\n';
  const auto& sx = traj.expectations.at("sx");
  const auto& sy = traj.expectations.at("sy");
  const auto& sz = traj.expectations.at("sz");
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const BlochVector& r = traj.bloch[i];
    out << format_double(traj.times[i]) << ',' << format_double(r.x) << ',' << format_double(r.y) << ','
        << format_double(r.z) << ',' << format_double(sx[i]) << ',' << format_double(sy[i]) << ','
        << format_double(sz[i]) << ',' << format_double(traj.norms[i]);
    if (fock) out << ',' << format_double(traj.leakage[i]);
    out << '\n';
  }
  if (!out) throw IoError("failed to write trajectory");
}

nlohmann::json trajectory_to_json(const BlochTrajectory& traj) {
  nlohmann::json j;
  std::vector<double> x, y, z;
  for (const BlochVector& r : traj.bloch) {
    x.push_back(r.x);
    y.push_back(r.y);
    z.push_back(r.z);
  }
  j["t"] = traj.times;
  j["x"] = x;
  j["y"] = y;
  j["z"] = z;
  for (const auto& [name, series] : traj.expectations) j[name] = series;
  j["norm"] = traj.norms;
  if (!traj.leakage.empty()) j["leakage"] = traj.leakage;
  j["max_norm_drift"] = traj.max_norm_drift;
  return j;
}

void write_lyapunov_csv(std::ostream& out, const LyapunovRun& run) {
  out << "t,x,y,z,V,I,gamma\n";
  const BlochTrajectory& traj = run.trajectory;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const BlochVector& r = traj.bloch[i];
    out << format_double(traj.times[i]) << ',' << format_double(r.x) << ',' << format_double(r.y) << ','
        << format_double(r.z) << ',' << format_double(run.voltage[i]) << ',' << format_double(run.current[i])
        << ',' << format_double(run.gamma[i]) << '\n';
  }
  if (!out) throw IoError("failed to write Lyapunov run");
}

nlohmann::json lyapunov_to_json(const LyapunovRun& run) {
  nlohmann::json j = trajectory_to_json(run.trajectory);
  j["V"] = run.voltage;
  j["I"] = run.current;
  j["gamma"] = run.gamma;
  j["converged"] = run.converged;
  j["monotone"] = run.monotone;
  j["final_error"] = run.final_error;
  return j;
}

}  // namespace scq
