#pragma once

// Lyapunov feedback for the L-C-JJ qubit. The Bloch vector obeys the
// bilinear system
//
//   x' = -c_V V z
//   y' =  (c_phi phi + c_I I) z
//   z' =  c_V V x - (c_phi phi + c_I I) y
//
// with c_V = n_zpf E_c C_g / (2 e hbar), c_I = phi_zpf / e and
// c_phi = 2 E_L phi_zpf / hbar. With gamma = |r - r_f|^2 / 2 the feedback
//
//   V = (alpha / c_V) w,   I = (beta / c_I) u,
//   w = x z_f - x_f z,     u = y_f z - y z_f,
//
// gives gamma' = -alpha w^2 - beta u^2 <= 0 independent of the circuit.

#include <vector>

#include "scq/evolution.hpp"
#include "scq/hamiltonian.hpp"
#include "scq/quantum_core.hpp"

namespace scq {

struct BilinearParams {
  double charging_energy = 0.0;   // J
  double inductive_energy = 0.0;  // J
  double gate_capacitance = 0.0;  // F
  double n_zpf = 0.0;
  double phi_zpf = 0.0;

  static BilinearParams from_qubit(const QubitParams& p);

  /// c_V in 1/(V s).
  double voltage_rate() const;
  /// c_I in 1/(A s).
  double current_rate() const;
  /// c_phi in 1/(rad s).
  double flux_rate() const;
};

struct Gains {
  double alpha = 0.0;
  double beta = 0.0;
};

struct FeedbackControls {
  double voltage = 0.0;  // V
  double current = 0.0;  // A
};

Vec3 bilinear_rhs(const BlochVector& r, double volts, double amperes, double flux, const BilinearParams& p);

FeedbackControls feedback_controls(const BlochVector& r, const BlochVector& rf, const Gains& g,
                                   const BilinearParams& p);

/// |r - rf|^2 / 2.
double lyapunov_value(const BlochVector& r, const BlochVector& rf);

enum class LyapunovIntegrator {
  fixed_rk4,   // `substeps` RK4 steps per sample; fails on |r| drift > 1e-4
  substepped,  // doubles the substep count until |r| drift < 1e-8 per sample
};

struct LyapunovOptions {
  LyapunovIntegrator integrator = LyapunovIntegrator::fixed_rk4;
  int substeps = 1;
  int max_substeps = 1 << 24;
  double drift_tolerance = 1e-8;
};

struct LyapunovRun {
  BlochTrajectory trajectory;
  std::vector<double> voltage;
  std::vector<double> current;
  std::vector<double> gamma;
  bool monotone = true;
  bool converged = false;
  double final_error = 0.0;
  int max_substeps_used = 1;
};

/// Closed loop with phi_e pinned to zero. Throws IntegrationError on
/// instability (fixed_rk4) or when the substep limit is reached.
LyapunovRun simulate_closed_loop(const BlochVector& r0, const BlochVector& rf, const Gains& g,
                                 const BilinearParams& p, const TimeGrid& grid, const LyapunovOptions& options = {});

}  // namespace scq
