#include "scq/hamiltonian.hpp"

#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "scq/constants.hpp"
#include "scq/errors.hpp"

namespace scq {

namespace {

using constants::elementary_charge;
using constants::hbar;

bool uses_gate(QubitKind k) { return k == QubitKind::charge || k == QubitKind::lcjj; }
bool uses_current(QubitKind k) { return k == QubitKind::phase || k == QubitKind::lcjj; }
bool uses_inductor(QubitKind k) { return k == QubitKind::flux || k == QubitKind::lcjj; }

// hbar / 2e: converts a bias current into an energy per unit phase.
constexpr double kFluxQuantumOver2Pi = hbar / (2.0 * elementary_charge);

void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw DomainError(std::string(name) + " is not finite");
}

void check_non_negative(double v, const char* name) {
  check_finite(v, name);
  if (v < 0.0) throw DomainError(std::string(name) + " must be non-negative");
}

HamiltonianOperator make_hermitian(CMatrix h, ModelKind model, std::map<DriveChannel, CMatrix> drives) {
  h = 0.5 * (h + h.adjoint()).eval();
  return HamiltonianOperator(std::move(h), model, std::move(drives));
}

// Shared by the two-level and Fock representations: n and phi are the
// charge and phase operators, `id` the identity of the same dimension.
CMatrix circuit_hamiltonian(const QubitParams& p, const CMatrix& n, const CMatrix& phi, const CMatrix& cos_phi,
                            const CMatrix& id) {
  const double ng = uses_gate(p.kind) ? p.gate_charge : 0.0;
  const CMatrix dn = n - ng * id;
  CMatrix h = p.charging_energy * dn * dn - p.josephson_energy * cos_phi;
  if (uses_inductor(p.kind)) {
    const CMatrix dphi = phi - p.flux_phase * id;
    h += 0.5 * p.inductive_energy * dphi * dphi;
  }
  if (uses_current(p.kind)) h -= kFluxQuantumOver2Pi * p.bias_current * phi;
  return h;
}

std::map<DriveChannel, CMatrix> circuit_drive_dependence(const QubitParams& p, const CMatrix& n,
                                                         const CMatrix& phi) {
  std::map<DriveChannel, CMatrix> d;
  if (uses_gate(p.kind))
    d.emplace(DriveChannel::voltage,
              -2.0 * p.charging_energy * gate_charge_from_voltage(p.gate_capacitance, 1.0) * n);
  if (uses_current(p.kind)) d.emplace(DriveChannel::current, -kFluxQuantumOver2Pi * phi);
  if (uses_inductor(p.kind)) d.emplace(DriveChannel::flux, -p.inductive_energy * phi);
  return d;
}

}  // namespace

std::string_view to_string(QubitKind kind) {
  switch (kind) {
    case QubitKind::charge: return "charge";
    case QubitKind::phase: return "phase";
    case QubitKind::flux: return "flux";
    case QubitKind::lcjj: return "lcjj";
  }
  return "unknown";
}

QubitKind parse_qubit_kind(std::string_view text) {
  if (text == "charge") return QubitKind::charge;
  if (text == "phase") return QubitKind::phase;
  if (text == "flux") return QubitKind::flux;
  if (text == "lcjj") return QubitKind::lcjj;
  throw InvalidArgument("unknown qubit kind '" + std::string(text) + "'");
}

std::string_view to_string(ModelKind model) {
  switch (model) {
    case ModelKind::approximate: return "approximate";
    case ModelKind::exact_two_level: return "exact_two_level";
    case ModelKind::fock: return "fock";
  }
  return "unknown";
}

DriveChannel native_drive(QubitKind kind) {
  switch (kind) {
    case QubitKind::charge: return DriveChannel::voltage;
    case QubitKind::phase: return DriveChannel::current;
    case QubitKind::flux: return DriveChannel::flux;
    case QubitKind::lcjj: break;
  }
  throw UnsupportedKind("the L-C-JJ circuit has no single native drive");
}

ZeroPointFluctuations zero_point_fluctuations(double charging_energy, double junction_inductive_energy) {
  if (!(charging_energy > 0.0) || !(junction_inductive_energy > 0.0) || !std::isfinite(charging_energy) ||
      !std::isfinite(junction_inductive_energy))
    throw DomainError("zero-point fluctuations need positive finite energies");
  return {std::pow(junction_inductive_energy / (32.0 * charging_energy), 0.25),
          std::pow(2.0 * charging_energy / junction_inductive_energy, 0.25)};
}

ZeroPointFluctuations resolve_zero_point(const QubitParams& p) {
  std::optional<ZeroPointFluctuations> derived;
  if (p.junction_inductive_energy)
    derived = zero_point_fluctuations(p.charging_energy, *p.junction_inductive_energy);

  std::optional<double> n = p.n_zpf;
  std::optional<double> phi = p.phi_zpf;
  if (derived) {
    if (!n) n = derived->n;
    if (!phi) phi = derived->phi;
  }
  if (n && !phi) phi = 0.5 / *n;
  if (phi && !n) n = 0.5 / *phi;
  if (!n || !phi)
    throw DomainError("zero-point fluctuations need E_LJ0, n_zpf or phi_zpf");
  if (!(*n > 0.0) || !(*phi > 0.0) || !std::isfinite(*n) || !std::isfinite(*phi))
    throw DomainError("zero-point fluctuations must be positive and finite");
  return {*n, *phi};
}

void validate(const QubitParams& p) {
  check_non_negative(p.charging_energy, "E_c");
  check_non_negative(p.josephson_energy, "E_J");
  check_non_negative(p.inductive_energy, "E_L");
  check_non_negative(p.gate_capacitance, "C_g");
  check_finite(p.gate_charge, "n_g");
  check_finite(p.bias_current, "I_g");
  check_finite(p.flux_phase, "phi_e");
  if (p.junction_inductive_energy) check_non_negative(*p.junction_inductive_energy, "E_LJ0");
  if (p.kind == QubitKind::charge && p.josephson_energy > 0.1 * p.charging_energy)
    spdlog::warn("charge qubit with E_J/E_c = {:.3g}: the two-level approximation assumes E_c >> E_J",
                 p.josephson_energy / p.charging_energy);
}

double gate_charge_from_voltage(double gate_capacitance, double volts) {
  return gate_capacitance * volts / (2.0 * elementary_charge);
}

HamiltonianOperator::HamiltonianOperator(CMatrix matrix, ModelKind model,
                                         std::map<DriveChannel, CMatrix> drive_dependence)
    : matrix_(std::move(matrix)), model_(model), drive_dependence_(std::move(drive_dependence)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 2) throw ShapeError("Hamiltonian must be square");
  const double scale = std::max(matrix_.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if (!is_hermitian(matrix_, 1e-12 * scale)) throw InvalidArgument("Hamiltonian is not Hermitian");
}

double HamiltonianOperator::identity_offset() const {
  return matrix_.trace().real() / static_cast<double>(dim());
}

CMatrix HamiltonianOperator::traceless() const {
  return matrix_ - identity_offset() * CMatrix::Identity(dim(), dim());
}

const CMatrix* HamiltonianOperator::drive_derivative(DriveChannel channel) const {
  auto it = drive_dependence_.find(channel);
  return it == drive_dependence_.end() ? nullptr : &it->second;
}

HamiltonianOperator build_approximate(const QubitParams& p) {
  validate(p);
  std::map<DriveChannel, CMatrix> drives;
  double cz = 0.0;
  double cx = 0.0;
  switch (p.kind) {
    case QubitKind::charge:
      cz = p.charging_energy * (0.5 - p.gate_charge);
      cx = 0.5 * p.josephson_energy;
      drives.emplace(DriveChannel::voltage,
                     -p.charging_energy * gate_charge_from_voltage(p.gate_capacitance, 1.0) * sigma_z());
      break;
    case QubitKind::phase: {
      const double phi_zpf = resolve_zero_point(p).phi;
      cz = -0.5 * p.charging_energy;
      cx = 0.5 * p.josephson_energy - kFluxQuantumOver2Pi * phi_zpf * p.bias_current;
      drives.emplace(DriveChannel::current, -kFluxQuantumOver2Pi * phi_zpf * sigma_x());
      break;
    }
    case QubitKind::flux: {
      const double phi_zpf = resolve_zero_point(p).phi;
      cz = -0.5 * p.charging_energy;
      cx = 0.5 * p.josephson_energy - p.inductive_energy * phi_zpf * p.flux_phase;
      drives.emplace(DriveChannel::flux, -p.inductive_energy * phi_zpf * sigma_x());
      break;
    }
    case QubitKind::lcjj:
      throw UnsupportedKind("no approximate form for the L-C-JJ circuit; use build_general");
  }
  return make_hermitian(cz * sigma_z() + cx * sigma_x(), ModelKind::approximate, std::move(drives));
}

HamiltonianOperator build_exact_two_level(const QubitParams& p) {
  validate(p);
  const ZeroPointFluctuations zpf = resolve_zero_point(p);
  // With phi = phi_zpf sigma_x, cos(phi) = cos(phi_zpf) I since sigma_x^2 = I.
  const CMatrix n = zpf.n * sigma_y();
  const CMatrix phi = zpf.phi * sigma_x();
  const CMatrix cos_phi = std::cos(zpf.phi) * identity2();
  return make_hermitian(circuit_hamiltonian(p, n, phi, cos_phi, identity2()), ModelKind::exact_two_level,
                        circuit_drive_dependence(p, n, phi));
}

CMatrix annihilation_operator(int levels) {
  CMatrix a = CMatrix::Zero(levels, levels);
  for (int k = 1; k < levels; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

HamiltonianOperator build_fock(const QubitParams& p, int levels) {
  if (levels < 4) throw TruncationError("Fock truncation needs at least 4 levels");
  validate(p);
  const ZeroPointFluctuations zpf = resolve_zero_point(p);
  const CMatrix a = annihilation_operator(levels);
  const CMatrix ad = a.adjoint();
  const CMatrix n = kI * zpf.n * (a - ad);
  const CMatrix phi = zpf.phi * (a + ad);
  const CMatrix e = matrix_exponential(kI * phi);
  const CMatrix cos_phi = 0.5 * (e + e.adjoint());
  const CMatrix id = CMatrix::Identity(levels, levels);
  return make_hermitian(circuit_hamiltonian(p, n, phi, cos_phi, id), ModelKind::fock,
                        circuit_drive_dependence(p, n, phi));
}

HamiltonianOperator build_general(const QubitParams& p, double volts, double current, double flux,
                                  std::optional<int> fock_levels) {
  if (p.kind != QubitKind::lcjj) throw UnsupportedKind("build_general needs the lcjj qubit kind");
  QubitParams q = p;
  q.gate_charge = gate_charge_from_voltage(p.gate_capacitance, volts);
  q.bias_current = current;
  q.flux_phase = flux;
  return fock_levels ? build_fock(q, *fock_levels) : build_exact_two_level(q);
}

Vec3 rotation_axis(const HamiltonianOperator& h) {
  const Vec3 c = pauli_coefficients(h.matrix());
  const double norm = c.norm();
  if (!(norm > 0.0)) throw DomainError("Hamiltonian has no traceless part");
  return c / norm;
}

FockConvergence fock_convergence(const QubitParams& p, int levels_low, int levels_high) {
  auto lowest_two = [&](int levels) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(build_fock(p, levels).matrix(), Eigen::EigenvaluesOnly);
    return Eigen::Vector2d(es.eigenvalues()(0), es.eigenvalues()(1));
  };
  FockConvergence out;
  out.levels_low = levels_low;
  out.levels_high = levels_high;
  out.eigen_low = lowest_two(levels_low);
  out.eigen_high = lowest_two(levels_high);
  for (int i = 0; i < 2; ++i) {
    const double denom = std::max(std::abs(out.eigen_high(i)), std::numeric_limits<double>::min());
    out.max_relative_change = std::max(out.max_relative_change, std::abs(out.eigen_high(i) - out.eigen_low(i)) / denom);
  }
  out.converged = out.max_relative_change < 1e-6;
  return out;
}

QubitProjection project_to_qubit(const StateVector& psi) {
  if (psi.dim() == 2) return {psi, 0.0};
  const CVector sub = psi.amplitudes().head(2);
  const double captured = sub.squaredNorm();
  if (!(captured > 0.0)) throw InvalidState("state has no population in the qubit subspace");
  return {StateVector::normalize(sub), std::max(0.0, 1.0 - captured)};
}

QubitParams preset_params(QubitKind kind) {
  QubitParams p;
  p.kind = kind;
  switch (kind) {
    case QubitKind::charge:
    case QubitKind::lcjj:
      p.charging_energy = 7.55e-23;
      p.josephson_energy = 0.018 * p.charging_energy;
      p.gate_capacitance = 0.68e-15;
      p.junction_inductive_energy = p.josephson_energy;
      if (kind == QubitKind::charge) p.gate_charge = gate_charge_from_voltage(p.gate_capacitance, 1e-3);
      break;
    case QubitKind::phase:
      p.josephson_energy = 3.266e-23;
      p.charging_energy = 1e-4 * p.josephson_energy;
      p.phi_zpf = 0.0398;
      p.bias_current = 1e-3;
      break;
    case QubitKind::flux: {
      p.josephson_energy = 6.017e-23;
      p.charging_energy = 1.711e-23;
      p.junction_inductive_energy = p.josephson_energy;
      p.inductive_energy = 0.5 * p.josephson_energy;
      // Bias where the approximate sigma_x coefficient vanishes, so the
      // approximate dynamics is a pure z rotation.
      const double phi_zpf = resolve_zero_point(p).phi;
      p.flux_phase = p.josephson_energy / (2.0 * p.inductive_energy * phi_zpf);
      break;
    }
  }
  return p;
}

}  // namespace scq
