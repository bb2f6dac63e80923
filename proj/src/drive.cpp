#include "scq/drive.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "scq/constants.hpp"
#include "scq/errors.hpp"

namespace scq {

namespace {

using constants::elementary_charge;
using constants::hbar;

constexpr double kRoundTripTolerance = 1e-9;

// Integrator stage times can land an ulp or two past t_f; keep the drive on
// for those.
bool after_window(double t, double t_f) { return t_f > 0.0 && t > t_f * (1.0 + 1e-12); }

void require_single_drive(QubitKind kind) {
  if (kind == QubitKind::lcjj) throw UnsupportedKind("drive design covers charge, phase and flux qubits");
}

void require_unit(const Vec3& n) {
  if (std::abs(n.norm() - 1.0) > 1e-9) throw InvalidAxis("rotation axis must be a unit vector");
}

// Amplitude direction (c_x Q, c_y I, c_z Q) for a plan.
Vec3 amplitude_direction(const DrivePlan& plan) {
  const Vec3 c = rwa_pattern(plan.kind);
  const double q = std::sin(plan.lambda);
  const double i = std::cos(plan.lambda);
  return {c.x() * q, c.y() * i, c.z() * q};
}

QubitParams without_native_drive(QubitParams p) {
  switch (p.kind) {
    case QubitKind::charge: p.gate_charge = 0.0; break;
    case QubitKind::phase: p.bias_current = 0.0; break;
    case QubitKind::flux: p.flux_phase = 0.0; break;
    case QubitKind::lcjj: break;
  }
  return p;
}

}  // namespace

double Envelope::integral(double t) const {
  if (!shape) return t;
  if (t == 0.0) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(shape, 0.0, t, 15, 1e-12);
}

double DrivePlan::signal(double t) const {
  if (t < 0.0 || after_window(t, t_f)) return 0.0;
  return amplitude * envelope.value(t) * std::sin(omega_c * t + lambda) + dc_offset;
}

Vec3 rwa_pattern(QubitKind kind) {
  switch (kind) {
    case QubitKind::charge: return {1.0 / 8.0, -1.0 / 4.0, 1.0 / 8.0};
    case QubitKind::phase:
    case QubitKind::flux: return {1.0 / 16.0, -1.0 / 4.0, -1.0 / 4.0};
    case QubitKind::lcjj: break;
  }
  throw UnsupportedKind("no RWA pattern for the L-C-JJ circuit");
}

double drive_coupling(const QubitParams& p) {
  switch (p.kind) {
    case QubitKind::charge: return -p.gate_capacitance * p.charging_energy / (2.0 * elementary_charge);
    case QubitKind::phase: return -(hbar / (2.0 * elementary_charge)) * resolve_zero_point(p).phi;
    case QubitKind::flux: return -p.inductive_energy * resolve_zero_point(p).phi;
    case QubitKind::lcjj: break;
  }
  throw UnsupportedKind("no single drive coupling for the L-C-JJ circuit");
}

double carrier_frequency(const QubitParams& p) {
  return std::abs(p.charging_energy - p.josephson_energy) / hbar;
}

std::pair<Vec3, double> bisector_rotation(const BlochVector& r0, const BlochVector& rf) {
  if (std::abs(r0.norm() - 1.0) > 1e-6 || std::abs(rf.norm() - 1.0) > 1e-6)
    throw InvalidBloch("bisector rotation needs unit Bloch vectors");
  const Vec3 sum = r0.vec() + rf.vec();
  const double len = sum.norm();
  if (len < 1e-9) throw DegenerateBisector("initial and final states are antipodal; supply a rotation axis");
  return {sum / len, std::numbers::pi};
}

RotationTarget make_rotation_target(const BlochVector& r0, const BlochVector& rf, double tf) {
  if (!(tf > 0.0) || !std::isfinite(tf)) throw InvalidArgument("transfer time must be positive");
  const auto [axis, alpha] = bisector_rotation(r0, rf);
  return {r0, rf, axis, alpha, tf, alpha / tf};
}

DrivePlan design_drive(QubitKind kind, const Vec3& n_hat, double omega_q, const QubitParams& params) {
  require_single_drive(kind);
  require_unit(n_hat);
  if (!std::isfinite(omega_q)) throw InvalidArgument("omega_q is not finite");
  if (params.kind != kind) throw InvalidArgument("parameter set is for a different qubit kind");
  validate(params);
  if (params.charging_energy == params.josephson_energy)
    throw DomainError("omega_z equals omega_x: no resonant carrier");

  DrivePlan plan;
  plan.kind = kind;
  plan.k = drive_coupling(params);
  if (!(std::abs(plan.k) > 0.0)) throw DomainError("drive coupling k is zero");
  plan.omega_c = carrier_frequency(params);
  plan.n_hat = n_hat;
  plan.omega_q = omega_q;

  const Vec3 c = rwa_pattern(kind);
  const double scale = hbar * omega_q / (2.0 * plan.k);  // rotation component -> k-weighted drive units
  const double nx = n_hat.x();
  const double ny = n_hat.y();
  const double nz = n_hat.z();

  if (std::abs(nx) <= 1e-15) {
    // Q = 0: the sigma_y channel alone carries the rotation.
    plan.lambda = 0.0;
    plan.amplitude = scale * ny / c.y();
    plan.dc_offset = scale * nz;
  } else {
    // tan(lambda) = Q / I = (c_y / c_x)(n_x / n_y), principal branch.
    plan.lambda = ny == 0.0 ? std::numbers::pi / 2.0 : std::atan((c.y() / c.x()) * (nx / ny));
    const double q = std::sin(plan.lambda);
    if (std::abs(q) < 1e-12) throw UnreachableAxis("sin(lambda) vanishes while n_x is non-zero");
    plan.amplitude = scale * nx / (c.x() * q);
    plan.dc_offset = scale * nz - plan.amplitude * c.z() * q;
  }

  const Vec3 back = rotation_vector(plan);
  const Vec3 want = omega_q * n_hat;
  if ((back - want).norm() > kRoundTripTolerance * std::max(std::abs(omega_q), 1.0))
    throw NumericError("drive plan does not reproduce the requested rotation");
  return plan;
}

DrivePlan design_drive(const RotationTarget& target, const QubitParams& params) {
  DrivePlan plan = design_drive(params.kind, target.n_hat, target.omega_q, params);
  plan.t_f = target.tf;
  return plan;
}

Vec3 rotation_vector(const DrivePlan& plan) {
  Vec3 h = plan.amplitude * amplitude_direction(plan);
  h.z() += plan.dc_offset;
  return (2.0 * plan.k / hbar) * h;
}

HamiltonianOperator rwa_hamiltonian(const DrivePlan& plan, double delta_omega, double t) {
  const Vec3 c = rwa_pattern(plan.kind);
  const double phase = delta_omega * t + plan.lambda;
  const double s = std::sin(phase);
  const double co = std::cos(phase);
  const double scale = plan.k * plan.amplitude * plan.envelope.value(t);
  return HamiltonianOperator(scale * pauli_dot(Vec3(c.x() * s, c.y() * co, c.z() * s)), ModelKind::approximate);
}

TimeDependentHamiltonian rotating_frame_hamiltonian(const DrivePlan& plan) {
  TimeDependentHamiltonian h(plan.k * plan.dc_offset * sigma_z());
  Envelope env = plan.envelope;
  const double t_f = plan.t_f;
  h.add_drive(plan.k * plan.amplitude * pauli_dot(amplitude_direction(plan)), [env, t_f](double t) {
    return after_window(t, t_f) ? 0.0 : env.value(t);
  });
  return h;
}

UnitaryOperator control_propagator(const DrivePlan& plan, double t) {
  Vec3 exponent = plan.amplitude * plan.envelope.integral(t) * amplitude_direction(plan);
  exponent.z() += plan.dc_offset * t;
  return UnitaryOperator(hermitian_exponential(pauli_dot(exponent), plan.k / hbar));
}

double bloch_fidelity(const BlochVector& r, const BlochVector& rf) { return 0.5 * (1.0 + r.dot(rf)); }

ExperimentResult closed_loop_experiment(const DrivePlan& plan, const QubitParams& params, const StateVector& psi0,
                                        DriveModel model, const TimeGrid& grid, const IntegratorOptions& options) {
  require_single_drive(plan.kind);
  if (psi0.dim() != 2) throw ShapeError("drive experiments run on two-level states");
  if (params.kind != plan.kind) throw InvalidArgument("parameter set is for a different qubit kind");

  ExperimentResult out;
  const BlochVector r0 = bloch_from_state(psi0);
  const double angle = plan.omega_q * (plan.t_f > 0.0 ? plan.t_f : grid.t_final());
  out.target = BlochVector(plan.omega_q != 0.0 ? rotate_vector(r0.vec(), plan.n_hat, angle) : r0.vec());

  if (model == DriveModel::approximate_rotating) {
    out.trajectory = evolve_time_dependent(rotating_frame_hamiltonian(plan), psi0, grid, options);
  } else {
    const HamiltonianOperator undriven = build_exact_two_level(without_native_drive(params));
    const DrivePlan p = plan;
    auto h = TimeDependentHamiltonian::driven(undriven, native_drive(plan.kind),
                                              [p](double t) { return p.signal(t); });
    out.trajectory = evolve_time_dependent(h, psi0, grid, options);
  }
  out.fidelity = bloch_fidelity(out.trajectory.final_bloch(), out.target);
  out.final_distance = out.trajectory.final_bloch().distance(out.target);
  return out;
}

nlohmann::json to_json(const DrivePlan& plan) {
  return {{"kind", std::string(to_string(plan.kind))},
          {"lambda_rad", plan.lambda},
          {"amplitude", plan.amplitude},
          {"dc_offset", plan.dc_offset},
          {"omega_c_rad_s", plan.omega_c},
          {"t_f_s", plan.t_f},
          {"n_hat", {plan.n_hat.x(), plan.n_hat.y(), plan.n_hat.z()}},
          {"omega_q_rad_s", plan.omega_q}};
}

DrivePlan plan_from_json(const nlohmann::json& j, const QubitParams& params) {
  try {
    DrivePlan plan;
    plan.kind = parse_qubit_kind(j.at("kind").get<std::string>());
    if (plan.kind != params.kind) throw InvalidArgument("plan and parameters are for different qubit kinds");
    plan.lambda = j.at("lambda_rad").get<double>();
    plan.amplitude = j.at("amplitude").get<double>();
    plan.dc_offset = j.at("dc_offset").get<double>();
    plan.omega_c = j.at("omega_c_rad_s").get<double>();
    plan.t_f = j.at("t_f_s").get<double>();
    const auto& n = j.at("n_hat");
    plan.n_hat = Vec3(n.at(0).get<double>(), n.at(1).get<double>(), n.at(2).get<double>());
    plan.omega_q = j.at("omega_q_rad_s").get<double>();
    plan.k = drive_coupling(params);
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed drive plan: ") + e.what());
  }
}

}  // namespace scq
