#pragma once

// Circuit Hamiltonians for the charge (C-JJ), phase (current-biased JJ),
// flux (L-JJ) and general L-C-JJ qubits, in the approximate two-level form,
// the exact form restricted to two levels by Pauli substitution, and a
// truncated Fock-space form.

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "scq/quantum_core.hpp"

namespace scq {

enum class QubitKind { charge, phase, flux, lcjj };

std::string_view to_string(QubitKind kind);
QubitKind parse_qubit_kind(std::string_view text);

/// Physical drive inputs. Units: volts, amperes, radians.
enum class DriveChannel { voltage, current, flux };

/// The drive each single-control circuit responds to.
DriveChannel native_drive(QubitKind kind);

/// All energies in joules, capacitance in farads, current in amperes.
struct QubitParams {
  QubitKind kind = QubitKind::charge;
  double charging_energy = 0.0;   // E_c
  double josephson_energy = 0.0;  // E_J
  double inductive_energy = 0.0;  // E_L (flux and L-C-JJ circuits)
  double gate_capacitance = 0.0;  // C_g
  double gate_charge = 0.0;       // n_g
  double bias_current = 0.0;      // I_g
  double flux_phase = 0.0;        // phi_e

  /// E_{L_J0}; when set, the zero-point fluctuations are derived from it.
  std::optional<double> junction_inductive_energy;
  /// Supplied values override the derived ones.
  std::optional<double> n_zpf;
  std::optional<double> phi_zpf;
};

struct ZeroPointFluctuations {
  double n = 0.0;
  double phi = 0.0;
};

/// n_zpf = (E_LJ0 / 32 E_c)^(1/4), phi_zpf = (2 E_c / E_LJ0)^(1/4).
ZeroPointFluctuations zero_point_fluctuations(double charging_energy, double junction_inductive_energy);

/// Resolves n_zpf / phi_zpf from supplied values, E_LJ0, or the identity
/// n_zpf * phi_zpf = 1/2 when only one of them is given.
ZeroPointFluctuations resolve_zero_point(const QubitParams& p);

/// Checks finiteness and sign constraints; throws DomainError.
void validate(const QubitParams& p);

/// n_g = C_g V / (2e).
double gate_charge_from_voltage(double gate_capacitance, double volts);

enum class ModelKind { approximate, exact_two_level, fock };

std::string_view to_string(ModelKind model);

class HamiltonianOperator {
 public:
  HamiltonianOperator(CMatrix matrix, ModelKind model, std::map<DriveChannel, CMatrix> drive_dependence = {});

  const CMatrix& matrix() const noexcept { return matrix_; }
  ModelKind model() const noexcept { return model_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }

  /// Tr(H) / dim; only contributes a global phase.
  double identity_offset() const;
  CMatrix traceless() const;

  /// dH/d(drive) per unit of the drive (V, A or rad), identity part excluded.
  /// Null when the Hamiltonian does not depend on the channel.
  const CMatrix* drive_derivative(DriveChannel channel) const;
  const std::map<DriveChannel, CMatrix>& drive_dependence() const noexcept { return drive_dependence_; }

 private:
  CMatrix matrix_;
  ModelKind model_;
  std::map<DriveChannel, CMatrix> drive_dependence_;
};

HamiltonianOperator build_approximate(const QubitParams& p);
HamiltonianOperator build_exact_two_level(const QubitParams& p);
HamiltonianOperator build_fock(const QubitParams& p, int levels);

/// The L-C-JJ Hamiltonian with n_g = C_g V / 2e, I_g = current and
/// phi_e = flux. Two-level unless `fock_levels` is given.
HamiltonianOperator build_general(const QubitParams& p, double volts, double current, double flux,
                                  std::optional<int> fock_levels = std::nullopt);

/// Ladder operator a on an N-level truncation.
CMatrix annihilation_operator(int levels);

/// Unit axis of the Bloch rotation generated by a two-level Hamiltonian.
/// Throws DomainError when the traceless part vanishes.
Vec3 rotation_axis(const HamiltonianOperator& h);

struct FockConvergence {
  int levels_low = 0;
  int levels_high = 0;
  Eigen::Vector2d eigen_low;
  Eigen::Vector2d eigen_high;
  double max_relative_change = 0.0;
  bool converged = false;  // max_relative_change < 1e-6
};

/// Compares the two lowest eigenvalues of build_fock at two truncations.
FockConvergence fock_convergence(const QubitParams& p, int levels_low, int levels_high);

struct QubitProjection {
  StateVector qubit;
  double leakage = 0.0;  // 1 - population in levels {0, 1}
};

/// Projects an N-level state onto its two lowest Fock levels.
QubitProjection project_to_qubit(const StateVector& psi);

/// Parameter sets used for the shipped reproduction runs.
QubitParams preset_params(QubitKind kind);

}  // namespace scq
