#include "scq/lyapunov.hpp"

#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "scq/constants.hpp"
#include "scq/errors.hpp"

namespace scq {

namespace {

using constants::elementary_charge;
using constants::hbar;

constexpr double kUnitTolerance = 1e-6;
constexpr double kFixedStepDriftLimit = 1e-4;
constexpr double kDescentTolerance = 1e-9;
constexpr double kConvergedError = 1e-3;

Vec3 closed_loop_rhs(const Vec3& r, const BlochVector& rf, const Gains& g, const BilinearParams& p) {
  const BlochVector b(r);
  const FeedbackControls u = feedback_controls(b, rf, g, p);
  return bilinear_rhs(b, u.voltage, u.current, 0.0, p);
}

Vec3 rk4_step(const Vec3& r, double h, const BlochVector& rf, const Gains& g, const BilinearParams& p) {
  const Vec3 k1 = closed_loop_rhs(r, rf, g, p);
  const Vec3 k2 = closed_loop_rhs(r + 0.5 * h * k1, rf, g, p);
  const Vec3 k3 = closed_loop_rhs(r + 0.5 * h * k2, rf, g, p);
  const Vec3 k4 = closed_loop_rhs(r + h * k3, rf, g, p);
  return r + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vec3 integrate_sample(const Vec3& r, double dt, int substeps, const BlochVector& rf, const Gains& g,
                      const BilinearParams& p) {
  const double h = dt / substeps;
  Vec3 out = r;
  for (int i = 0; i < substeps; ++i) out = rk4_step(out, h, rf, g, p);
  return out;
}

void record(LyapunovRun& run, double t, const Vec3& r, const BlochVector& rf, const Gains& g,
            const BilinearParams& p) {
  const BlochVector b(r);
  const FeedbackControls u = feedback_controls(b, rf, g, p);
  BlochTrajectory& traj = run.trajectory;
  traj.times.push_back(t);
  traj.bloch.push_back(b);
  traj.expectations["sx"].push_back(b.x);
  traj.expectations["sy"].push_back(b.y);
  traj.expectations["sz"].push_back(b.z);
  traj.norms.push_back(r.norm());
  run.voltage.push_back(u.voltage);
  run.current.push_back(u.current);
  run.gamma.push_back(lyapunov_value(b, rf));
}

}  // namespace

BilinearParams BilinearParams::from_qubit(const QubitParams& q) {
  const ZeroPointFluctuations zpf = resolve_zero_point(q);
  return {q.charging_energy, q.inductive_energy, q.gate_capacitance, zpf.n, zpf.phi};
}

double BilinearParams::voltage_rate() const {
  return n_zpf * charging_energy * gate_capacitance / (2.0 * elementary_charge * hbar);
}

double BilinearParams::current_rate() const { return phi_zpf / elementary_charge; }

double BilinearParams::flux_rate() const { return 2.0 * inductive_energy * phi_zpf / hbar; }

Vec3 bilinear_rhs(const BlochVector& r, double volts, double amperes, double flux, const BilinearParams& p) {
  const double v = p.voltage_rate() * volts;
  const double c = p.flux_rate() * flux + p.current_rate() * amperes;
  return {-v * r.z, c * r.z, v * r.x - c * r.y};
}

FeedbackControls feedback_controls(const BlochVector& r, const BlochVector& rf, const Gains& g,
                                   const BilinearParams& p) {
  const double w = r.x * rf.z - rf.x * r.z;
  const double u = rf.y * r.z - r.y * rf.z;
  // V = 2 alpha e hbar / (E_c n_zpf C_g) w,  I = beta e / phi_zpf u.
  return {g.alpha * w / p.voltage_rate(), g.beta * u / p.current_rate()};
}

double lyapunov_value(const BlochVector& r, const BlochVector& rf) {
  return 0.5 * (r.vec() - rf.vec()).squaredNorm();
}

LyapunovRun simulate_closed_loop(const BlochVector& r0, const BlochVector& rf, const Gains& g,
                                 const BilinearParams& p, const TimeGrid& grid, const LyapunovOptions& options) {
  grid.validate();
  if (!(g.alpha > 0.0) || !(g.beta > 0.0)) throw InvalidArgument("feedback gains must be positive");
  if (std::abs(r0.norm() - 1.0) > kUnitTolerance || std::abs(rf.norm() - 1.0) > kUnitTolerance)
    throw InvalidBloch("closed-loop states must be unit Bloch vectors");
  if (!(p.voltage_rate() > 0.0) || !(p.current_rate() > 0.0))
    throw DomainError("voltage and current couplings must be positive");
  if (options.substeps < 1) throw InvalidArgument("substeps must be at least 1");

  LyapunovRun run;
  run.trajectory.times.reserve(grid.samples());
  run.gamma.reserve(grid.samples());
  Vec3 r = r0.vec();
  record(run, grid.time(0), r, rf, g, p);

  int substeps = options.substeps;
  for (int k = 0; k < grid.steps; ++k) {
    const double norm_before = r.norm();
    const double gamma_before = run.gamma.back();
    Vec3 next = integrate_sample(r, grid.dt, substeps, rf, g, p);

    if (options.integrator == LyapunovIntegrator::substepped) {
      auto acceptable = [&](const Vec3& candidate) {
        return candidate.allFinite() && std::abs(candidate.norm() - norm_before) < options.drift_tolerance &&
               lyapunov_value(BlochVector(candidate), rf) <= gamma_before + kDescentTolerance;
      };
      while (!acceptable(next)) {
        if (substeps >= options.max_substeps)
          throw IntegrationError("substep limit reached at t = " + std::to_string(grid.time(k)) +
                                 "; use a smaller sample dt");
        substeps *= 2;
        next = integrate_sample(r, grid.dt, substeps, rf, g, p);
      }
    } else if (!next.allFinite() || std::abs(next.norm() - norm_before) > kFixedStepDriftLimit) {
      throw IntegrationError("closed loop unstable at t = " + std::to_string(grid.time(k)) +
                             " (|r| drift); use the substepped integrator or a smaller dt");
    }

    r = next;
    record(run, grid.time(k + 1), r, rf, g, p);
    if (run.gamma.back() > gamma_before + kDescentTolerance) run.monotone = false;
  }

  run.max_substeps_used = substeps;
  for (double n : run.trajectory.norms)
    run.trajectory.max_norm_drift = std::max(run.trajectory.max_norm_drift, std::abs(n - r0.norm()));
  run.final_error = (r - rf.vec()).norm();
  run.converged = run.monotone && run.final_error < kConvergedError;
  if (!run.converged)
    spdlog::info("closed loop not converged: final error {:.3g}, monotone {}", run.final_error, run.monotone);
  return run;
}

}  // namespace scq
