#include "scq/evolution.hpp"

#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "scq/constants.hpp"
#include "scq/errors.hpp"

namespace scq {

namespace {

using constants::hbar;

constexpr double kMaxNormDrift = 1e-4;

void log_offset_drop_once() {
  static bool logged = false;
  if (!logged) {
    spdlog::debug("identity part of H dropped during propagation (global phase only)");
    logged = true;
  }
}

CMatrix remove_trace(const CMatrix& h) {
  const Eigen::Index n = h.rows();
  return h - (h.trace() / static_cast<double>(n)) * CMatrix::Identity(n, n);
}

// Appends one sample; two-level states map directly, larger ones are
// projected onto levels {0, 1}.
void record_state(BlochTrajectory& traj, double t, const CVector& amplitudes, bool retain) {
  const double norm = amplitudes.norm();
  const StateVector psi = StateVector::normalize(amplitudes);
  traj.times.push_back(t);
  traj.norms.push_back(norm);
  traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(norm - 1.0));
  BlochVector r;
  if (psi.dim() == 2) {
    r = bloch_from_state(psi);
  } else {
    const QubitProjection proj = project_to_qubit(psi);
    r = bloch_from_state(proj.qubit);
    traj.leakage.push_back(proj.leakage);
  }
  traj.bloch.push_back(r);
  traj.expectations["sx"].push_back(r.x);
  traj.expectations["sy"].push_back(r.y);
  traj.expectations["sz"].push_back(r.z);
  if (retain) traj.states.push_back(psi);
}

void reserve(BlochTrajectory& traj, int samples) {
  traj.times.reserve(samples);
  traj.bloch.reserve(samples);
  traj.norms.reserve(samples);
  for (const char* key : {"sx", "sy", "sz"}) traj.expectations[key].reserve(samples);
}

}  // namespace

void TimeGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time grid needs dt > 0");
  if (steps < 1) throw InvalidArgument("time grid needs at least one step");
  if (!std::isfinite(t0)) throw InvalidArgument("time grid start is not finite");
}

TimeDependentHamiltonian::TimeDependentHamiltonian(CMatrix static_part) : static_part_(std::move(static_part)) {
  if (static_part_.rows() != static_part_.cols()) throw ShapeError("Hamiltonian must be square");
}

TimeDependentHamiltonian& TimeDependentHamiltonian::add_drive(CMatrix generator, Signal signal) {
  if (generator.rows() != dim() || generator.cols() != dim()) throw ShapeError("drive generator shape mismatch");
  drives_.push_back({std::move(generator), std::move(signal)});
  return *this;
}

TimeDependentHamiltonian TimeDependentHamiltonian::driven(const HamiltonianOperator& undriven, DriveChannel channel,
                                                          Signal signal) {
  const CMatrix* d = undriven.drive_derivative(channel);
  if (d == nullptr) throw UnsupportedKind("Hamiltonian does not respond to the requested drive channel");
  TimeDependentHamiltonian h(undriven.matrix());
  h.add_drive(*d, std::move(signal));
  return h;
}

CMatrix TimeDependentHamiltonian::at(double t) const {
  CMatrix h = static_part_;
  for (const Term& term : drives_) h += term.signal(t) * term.generator;
  return h;
}

BlochTrajectory propagate_static(const HamiltonianOperator& h, const StateVector& psi0, const TimeGrid& grid,
                                 bool retain_states) {
  grid.validate();
  if (psi0.dim() != h.dim()) throw ShapeError("state and Hamiltonian dimensions differ");
  log_offset_drop_once();

  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.traceless());
  const CMatrix& v = es.eigenvectors();
  const Eigen::VectorXd omega = es.eigenvalues() / hbar;
  const CVector c0 = v.adjoint() * psi0.amplitudes();

  BlochTrajectory traj;
  reserve(traj, grid.samples());
  CVector c(c0.size());
  for (int k = 0; k <= grid.steps; ++k) {
    const double elapsed = grid.dt * static_cast<double>(k);
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = std::polar(1.0, -omega(i) * elapsed) * c0(i);
    record_state(traj, grid.time(k), v * c, retain_states);
  }
  return traj;
}

BlochTrajectory evolve_time_dependent(const TimeDependentHamiltonian& h, const StateVector& psi0,
                                      const TimeGrid& grid, const IntegratorOptions& options) {
  grid.validate();
  if (options.substeps < 1) throw InvalidArgument("substeps must be at least 1");
  if (psi0.dim() != h.dim()) throw ShapeError("state and Hamiltonian dimensions differ");
  log_offset_drop_once();

  // dpsi/dt = -i (H(t) / hbar) psi
  auto rhs = [&](double t, const CVector& psi) -> CVector { return (-kI / hbar) * (remove_trace(h.at(t)) * psi); };

  BlochTrajectory traj;
  reserve(traj, grid.samples());
  CVector psi = psi0.amplitudes();
  record_state(traj, grid.time(0), psi, options.retain_states);

  const double step = grid.dt / options.substeps;
  for (int k = 0; k < grid.steps; ++k) {
    for (int s = 0; s < options.substeps; ++s) {
      // Offsets from the sample time keep t exact at every sample boundary.
      const double t = grid.time(k) + step * static_cast<double>(s);
      const CVector k1 = rhs(t, psi);
      const CVector k2 = rhs(t + 0.5 * step, psi + 0.5 * step * k1);
      const CVector k3 = rhs(t + 0.5 * step, psi + 0.5 * step * k2);
      const CVector k4 = rhs(t + step, psi + step * k3);
      psi += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (options.renormalize) psi.normalize();
    }
    const double norm = psi.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kMaxNormDrift)
      throw IntegrationError("norm drifted to " + std::to_string(norm) + " at t = " + std::to_string(grid.time(k + 1)) +
                             "; reduce dt or increase substeps");
    record_state(traj, grid.time(k + 1), psi, options.retain_states);
  }
  if (traj.max_norm_drift > 1e-8)
    spdlog::warn("RK4 norm drift reached {:.3g}; consider more substeps", traj.max_norm_drift);
  return traj;
}

BlochTrajectory evolve_master(const DensityMatrix& rho0, const HamiltonianOperator& h, const TimeGrid& grid) {
  grid.validate();
  if (rho0.dim() != h.dim()) throw ShapeError("density matrix and Hamiltonian dimensions differ");
  log_offset_drop_once();

  // Column-major vec: vec(A X B) = (B^T kron A) vec(X), so
  // vec((i/hbar)(rho H - H rho)) = (i/hbar)(H^T kron I - I kron H) vec(rho).
  const Eigen::Index n = h.dim();
  const CMatrix hs = h.traceless() / hbar;
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix liouvillian(n * n, n * n);
  const CMatrix ht = hs.transpose();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      liouvillian.block(i * n, j * n, n, n) = kI * (ht(i, j) * id - (i == j ? hs : CMatrix::Zero(n, n)));
  const CMatrix step = matrix_exponential(liouvillian * grid.dt);

  BlochTrajectory traj;
  reserve(traj, grid.samples());
  CVector vec_rho = Eigen::Map<const CVector>(rho0.entries().data(), n * n);
  for (int k = 0; k <= grid.steps; ++k) {
    if (k > 0) vec_rho = step * vec_rho;
    CMatrix rho = Eigen::Map<const CMatrix>(vec_rho.data(), n, n);
    const double trace = rho.trace().real();
    traj.times.push_back(grid.time(k));
    traj.norms.push_back(trace);
    traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(trace - 1.0));
    DensityMatrix d(std::move(rho));
    BlochVector r;
    if (n == 2) {
      r = bloch_from_density(d);
    } else {
      const CMatrix& e = d.entries();
      const double pop = (e(0, 0) + e(1, 1)).real();
      r = pop > 0.0 ? BlochVector(2.0 * e(1, 0).real() / pop, 2.0 * e(1, 0).imag() / pop,
                                  (e(0, 0) - e(1, 1)).real() / pop)
                    : BlochVector();
      traj.leakage.push_back(std::max(0.0, 1.0 - pop));
    }
    traj.bloch.push_back(r);
    traj.expectations["sx"].push_back(r.x);
    traj.expectations["sy"].push_back(r.y);
    traj.expectations["sz"].push_back(r.z);
    traj.densities.push_back(std::move(d));
  }
  return traj;
}

std::vector<double> observable_series(const BlochTrajectory& traj, const HermitianObservable& x) {
  std::vector<double> out;
  if (!traj.states.empty()) {
    out.reserve(traj.states.size());
    for (const StateVector& psi : traj.states) {
      if (x.dim() == psi.dim()) {
        out.push_back(expectation(DensityMatrix::from_state(psi), x));
      } else if (x.dim() == 2) {
        out.push_back(expectation(DensityMatrix::from_state(project_to_qubit(psi).qubit), x));
      } else {
        throw ShapeError("observable dimension does not match the trajectory states");
      }
    }
    return out;
  }
  if (!traj.densities.empty()) {
    out.reserve(traj.densities.size());
    for (const DensityMatrix& rho : traj.densities) out.push_back(expectation(rho, x));
    return out;
  }
  throw MissingData("trajectory does not retain states");
}

}  // namespace scq
