#pragma once

// Run configuration. Files are flat INI text:
//
//   # charge qubit, free evolution
//   [simulate]
//   qubit = charge
//   model = exact2
//   psi0 = 1,0;0,0
//   t_final = 2e-10
//
//   [params]
//   V_g = 1e-3
//
// Exactly one command section ([simulate], [design], [drive-run] or
// [lyapunov]) and an optional [params] section. Unknown or duplicate keys are
// rejected with the offending line number.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scq/hamiltonian.hpp"
#include "scq/lyapunov.hpp"
#include "scq/quantum_core.hpp"

namespace scq {

enum class Command { simulate, design, drive_run, lyapunov };
enum class OutputFormat { csv, json };
enum class SimulationMethod { eigen, rk4, master };
enum class DriveRunModels { approximate, exact, both };

std::string_view to_string(Command c);

struct ModelSpec {
  ModelKind kind = ModelKind::exact_two_level;
  int levels = 2;  // Fock truncation when kind == fock
};

/// `approx`, `exact2` or `fock:N`.
ModelSpec parse_model(std::string_view text);

/// `re,im;re,im[;...]`, normalized with a warning if the norm is off by
/// more than 1e-6.
StateVector parse_state(std::string_view text);

/// `x,y,z`.
BlochVector parse_bloch(std::string_view text);

/// Either a complex state (psi*) or a Bloch triple (r*).
struct StateSpec {
  std::optional<StateVector> psi;
  std::optional<BlochVector> bloch;

  StateVector state() const;
  BlochVector bloch_vector() const;
};

struct RunConfig {
  Command command = Command::simulate;
  QubitKind qubit = QubitKind::charge;
  ModelSpec model;
  std::optional<std::filesystem::path> params_file;
  /// Preset for `qubit`, then the params file, then inline overrides.
  QubitParams params;

  std::optional<StateSpec> initial;
  std::optional<StateSpec> target;

  // Grid. dt defaults to t_final / 2000.
  double t_final = 0.0;
  double dt = 0.0;
  int steps = 0;
  int substeps = 1;  // 0 = choose automatically (drive-run)
  SimulationMethod method = SimulationMethod::eigen;

  double tf = 0.0;  // design / drive-run transfer time
  DriveRunModels drive_models = DriveRunModels::both;

  Gains gains;
  LyapunovIntegrator integrator = LyapunovIntegrator::fixed_rk4;

  std::optional<std::filesystem::path> out;
  OutputFormat format = OutputFormat::csv;
};

/// A key with the line it came from (0 for command-line input).
struct ConfigValue {
  std::string value;
  int line = 0;
};
using ConfigSection = std::map<std::string, ConfigValue>;

/// Applies one `[params]` key (E_c, E_J, E_L, C_g, n_g, V_g, I_g, phi_e,
/// E_LJ0, n_zpf, phi_zpf).
void apply_param(QubitParams& p, std::string_view key, const ConfigValue& value);

/// Reads a parameter file containing a single [params] section.
void load_params_file(QubitParams& p, const std::filesystem::path& file);

/// Validates keys of `section` for `command` and fills a RunConfig.
/// Relative paths resolve against `base_dir`.
RunConfig build_run_config(Command command, const ConfigSection& section, const ConfigSection& params,
                           const std::filesystem::path& base_dir);

RunConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir = ".");
RunConfig parse_config(const std::filesystem::path& file);

}  // namespace scq
