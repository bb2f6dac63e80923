#pragma once

// Microwave drive synthesis in the rotating-wave approximation.
//
// Each circuit is driven through its native control (gate voltage, bias
// current or external flux) with signal
//
//     u(t) = A s(t) sin(omega_c t + lambda) + u_dc,
//
// and at zero detuning the rotating-frame Hamiltonian is
//
//     H = k A s(t) (c_x Q sx + c_y I sy + c_z Q sz) + k u_dc sz,
//
// with I = cos(lambda), Q = sin(lambda) and per-kind coefficients
// (c_x, c_y, c_z) = (1/8, -1/4, 1/8) for the charge qubit and
// (1/16, -1/4, -1/4) for the phase and flux qubits.

#include <functional>
#include <optional>

#include <json.hpp>

#include "scq/evolution.hpp"
#include "scq/hamiltonian.hpp"
#include "scq/quantum_core.hpp"

namespace scq {

struct RotationTarget {
  BlochVector r0;
  BlochVector rf;
  Vec3 n_hat = Vec3::UnitZ();
  double alpha = 0.0;
  double tf = 0.0;
  double omega_q = 0.0;  // alpha / tf
};

/// Carrier envelope s(t). The default is s = 1.
struct Envelope {
  std::function<double(double)> shape;

  bool is_constant() const { return !shape; }
  double value(double t) const { return shape ? shape(t) : 1.0; }
  /// gamma(t) = integral of s over [0, t].
  double integral(double t) const;
};

struct DrivePlan {
  QubitKind kind = QubitKind::charge;
  double lambda = 0.0;     // rad
  double amplitude = 0.0;  // V, A or rad depending on kind
  double dc_offset = 0.0;  // same unit as amplitude
  double omega_c = 0.0;    // rad/s
  double k = 0.0;          // J per drive unit
  Envelope envelope;
  double t_f = 0.0;
  Vec3 n_hat = Vec3::UnitZ();
  double omega_q = 0.0;

  /// The physical control signal u(t).
  double signal(double t) const;
};

/// RWA coefficient pattern (c_x, c_y, c_z) for a drive kind.
Vec3 rwa_pattern(QubitKind kind);

/// Drive coupling k: -(C_g E_c)/(2e) for charge, -(hbar/2e) phi_zpf for
/// phase, -E_L phi_zpf for flux.
double drive_coupling(const QubitParams& p);

/// |E_c - E_J| / hbar: the resonant carrier of the undriven approximate
/// Hamiltonian.
double carrier_frequency(const QubitParams& p);

/// Rotation about the normalized bisector of r0 and rf by +pi.
/// Throws DegenerateBisector when r0 and rf are antipodal.
std::pair<Vec3, double> bisector_rotation(const BlochVector& r0, const BlochVector& rf);

/// Full target for a transfer r0 -> rf in time tf.
RotationTarget make_rotation_target(const BlochVector& r0, const BlochVector& rf, double tf);

DrivePlan design_drive(QubitKind kind, const Vec3& n_hat, double omega_q, const QubitParams& params);
DrivePlan design_drive(const RotationTarget& target, const QubitParams& params);

/// The rotation-vector omega_q * n_hat implied by a plan with constant
/// envelope (inverse of design_drive).
Vec3 rotation_vector(const DrivePlan& plan);

/// Amplitude part of the RWA Hamiltonian at detuning delta_omega (no dc term).
HamiltonianOperator rwa_hamiltonian(const DrivePlan& plan, double delta_omega, double t);

/// Rotating-frame Hamiltonian at zero detuning including the dc term.
TimeDependentHamiltonian rotating_frame_hamiltonian(const DrivePlan& plan);

/// U_c(t) = exp(-(i k / hbar)(A gamma(t)(c_x Q sx + c_y I sy + c_z Q sz) + u_dc t sz)).
UnitaryOperator control_propagator(const DrivePlan& plan, double t);

enum class DriveModel { approximate_rotating, exact_lab };

struct ExperimentResult {
  BlochTrajectory trajectory;
  BlochVector target;  // r0 rotated by omega_q t_f about n_hat
  double fidelity = 0.0;
  double final_distance = 0.0;
};

/// (1 + r . rf) / 2.
double bloch_fidelity(const BlochVector& r, const BlochVector& rf);

/// Applies a designed plan either to the rotating-frame model it was
/// designed for, or to the exact two-level circuit in the lab frame with the
/// full physical signal on the kind's drive input.
ExperimentResult closed_loop_experiment(const DrivePlan& plan, const QubitParams& params, const StateVector& psi0,
                                        DriveModel model, const TimeGrid& grid,
                                        const IntegratorOptions& options = {});

nlohmann::json to_json(const DrivePlan& plan);
/// Rebuilds a plan; `k` is recomputed from the parameters.
DrivePlan plan_from_json(const nlohmann::json& j, const QubitParams& params);

}  // namespace scq
