#pragma once

// Deterministic text exports: shortest round-trip decimal formatting,
// '.' separator, LF line endings.

#include <ostream>
#include <string>

#include <json.hpp>

#include "scq/evolution.hpp"
#include "scq/lyapunov.hpp"

namespace scq {

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// Header `t,x,y,z,sx,sy,sz,norm` plus `,leakage` for Fock-space runs.
void write_trajectory_csv(std::ostream& out, const BlochTrajectory& traj);
nlohmann::json trajectory_to_json(const BlochTrajectory& traj);

/// Header `t,x,y,z,V,I,gamma`, SI units.
void write_lyapunov_csv(std::ostream& out, const LyapunovRun& run);
nlohmann::json lyapunov_to_json(const LyapunovRun& run);

}  // namespace scq
