#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "scq/hamiltonian.hpp"
#include "scq/quantum_core.hpp"

namespace scq {

/// Sample times t0, t0 + dt, ..., t0 + steps * dt.
struct TimeGrid {
  double t0 = 0.0;
  double dt = 0.0;
  int steps = 0;

  double time(int k) const { return t0 + dt * static_cast<double>(k); }
  double t_final() const { return time(steps); }
  int samples() const { return steps + 1; }
  /// Throws InvalidArgument unless dt > 0 and steps >= 1.
  void validate() const;
};

struct BlochTrajectory {
  std::vector<double> times;
  std::vector<BlochVector> bloch;
  /// Full state per sample; empty when not retained.
  std::vector<StateVector> states;
  /// Density matrix per sample, filled by the master-equation path.
  std::vector<DensityMatrix> densities;
  /// "sx", "sy", "sz" always; other series may be added by callers.
  std::map<std::string, std::vector<double>> expectations;
  /// State norm per sample (1 for density-matrix runs: the trace).
  std::vector<double> norms;
  /// Population outside levels {0, 1}; Fock-space runs only.
  std::vector<double> leakage;
  /// max |norm - 1| over the run.
  double max_norm_drift = 0.0;

  std::size_t size() const noexcept { return times.size(); }
  const BlochVector& final_bloch() const { return bloch.back(); }
};

/// H(t) = H_static + sum_k signal_k(t) G_k.
class TimeDependentHamiltonian {
 public:
  using Signal = std::function<double(double)>;

  explicit TimeDependentHamiltonian(CMatrix static_part);

  TimeDependentHamiltonian& add_drive(CMatrix generator, Signal signal);

  /// Lab-frame Hamiltonian of a circuit driven through `channel`:
  /// H(drive = 0) + signal(t) dH/d(drive).
  static TimeDependentHamiltonian driven(const HamiltonianOperator& undriven, DriveChannel channel, Signal signal);

  CMatrix at(double t) const;
  Eigen::Index dim() const noexcept { return static_part_.rows(); }

 private:
  struct Term {
    CMatrix generator;
    Signal signal;
  };
  CMatrix static_part_;
  std::vector<Term> drives_;
};

struct IntegratorOptions {
  /// Internal RK4 steps per output sample.
  int substeps = 1;
  /// Renormalize after every internal step. Off by default so that drift is
  /// visible in BlochTrajectory::max_norm_drift.
  bool renormalize = false;
  bool retain_states = true;
};

/// Exact propagation under a static Hamiltonian via its eigendecomposition.
BlochTrajectory propagate_static(const HamiltonianOperator& h, const StateVector& psi0, const TimeGrid& grid,
                                 bool retain_states = true);

/// Fixed-step classical RK4 on the Schroedinger equation. Throws
/// IntegrationError when the norm drifts by more than 1e-4.
BlochTrajectory evolve_time_dependent(const TimeDependentHamiltonian& h, const StateVector& psi0,
                                      const TimeGrid& grid, const IntegratorOptions& options = {});

/// drho/dt = (i/hbar)[rho, H] through the exponential of the Liouvillian.
BlochTrajectory evolve_master(const DensityMatrix& rho0, const HamiltonianOperator& h, const TimeGrid& grid);

/// Tr(rho_t X) per sample. For Fock-space trajectories a 2x2 observable is
/// evaluated on the projected qubit state.
std::vector<double> observable_series(const BlochTrajectory& traj, const HermitianObservable& x);

}  // namespace scq
