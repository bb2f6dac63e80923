#include "scq/quantum_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "scq/errors.hpp"

namespace scq {

namespace {

constexpr double kStateNormTolerance = 1e-6;
constexpr double kBlochTolerance = 1e-9;
constexpr double kAxisTolerance = 1e-9;

bool all_finite(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

CMatrix make_pauli(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

StateVector::StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 2) throw InvalidState("state dimension must be at least 2");
  const double n = amplitudes_.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > kStateNormTolerance)
    throw InvalidState("state is not normalized (norm = " + std::to_string(n) + ")");
  amplitudes_ /= n;
}

StateVector StateVector::normalize(const CVector& amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidState("cannot normalize a zero or non-finite state");
  return StateVector(amplitudes / n);
}

StateVector StateVector::basis(Eigen::Index dim, Eigen::Index level) {
  if (level < 0 || level >= dim) throw InvalidState("basis level out of range");
  CVector v = CVector::Zero(dim);
  v(level) = 1.0;
  return StateVector(std::move(v));
}

DensityMatrix::DensityMatrix(CMatrix entries, double tol) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 2)
    throw ShapeError("density matrix must be square with dimension >= 2");
  if (!all_finite(entries_)) throw NumericError("density matrix has non-finite entries");
  if (!is_hermitian(entries_, tol)) throw InvalidState("density matrix is not Hermitian");
  if (std::abs(entries_.trace() - Complex{1.0, 0.0}) > tol)
    throw InvalidState("density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(entries_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) throw InvalidState("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
  const CVector& a = psi.amplitudes();
  return DensityMatrix(a * a.adjoint());
}

HermitianObservable::HermitianObservable(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw ShapeError("observable must be square");
  if (!is_hermitian(entries_, 1e-12 * std::max(1.0, entries_.cwiseAbs().maxCoeff())))
    throw InvalidArgument("observable is not Hermitian");
}

UnitaryOperator::UnitaryOperator(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw ShapeError("operator must be square");
  if (!is_unitary(entries_, 1e-10)) throw NumericError("operator is not unitary");
}

const CMatrix& sigma_x() {
  static const CMatrix m = make_pauli(0.0, 1.0, 1.0, 0.0);
  return m;
}

const CMatrix& sigma_y() {
  static const CMatrix m = make_pauli(0.0, -kI, kI, 0.0);
  return m;
}

const CMatrix& sigma_z() {
  static const CMatrix m = make_pauli(1.0, 0.0, 0.0, -1.0);
  return m;
}

const CMatrix& identity2() {
  static const CMatrix m = CMatrix::Identity(2, 2);
  return m;
}

CMatrix pauli_dot(const Vec3& n) {
  return n.x() * sigma_x() + n.y() * sigma_y() + n.z() * sigma_z();
}

Vec3 pauli_coefficients(const CMatrix& a) {
  if (a.rows() != 2 || a.cols() != 2) throw ShapeError("Pauli decomposition needs a 2x2 matrix");
  return {0.5 * (sigma_x() * a).trace().real(), 0.5 * (sigma_y() * a).trace().real(),
          0.5 * (sigma_z() * a).trace().real()};
}

HermitianObservable observable_x() { return HermitianObservable(sigma_x()); }
HermitianObservable observable_y() { return HermitianObservable(sigma_y()); }
HermitianObservable observable_z() { return HermitianObservable(sigma_z()); }

BlochVector bloch_from_state(const StateVector& psi) {
  if (psi.dim() != 2) throw ShapeError("Bloch vector needs a two-level state");
  const Complex a = psi[0];
  const Complex b = psi[1];
  const Complex ab = std::conj(a) * b;
  return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
}

StateVector state_from_bloch(const BlochVector& r) {
  if (std::abs(r.norm() - 1.0) > kBlochTolerance)
    throw InvalidBloch("pure-state Bloch vector must have unit length");
  const double theta = std::acos(std::clamp(r.z / r.norm(), -1.0, 1.0));
  const double phi = std::atan2(r.y, r.x);
  CVector v(2);
  v << std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi);
  return StateVector(std::move(v));
}

DensityMatrix density_from_bloch(const BlochVector& r) {
  if (!std::isfinite(r.norm()) || r.norm() > 1.0 + kBlochTolerance)
    throw InvalidBloch("Bloch vector lies outside the unit ball");
  CMatrix rho(2, 2);
  rho << 1.0 + r.z, Complex{r.x, -r.y}, Complex{r.x, r.y}, 1.0 - r.z;
  return DensityMatrix(0.5 * rho);
}

double expectation(const DensityMatrix& rho, const HermitianObservable& x) {
  if (rho.dim() != x.dim()) throw ShapeError("observable and density matrix dimensions differ");
  return (rho.entries() * x.entries()).trace().real();
}

BlochVector bloch_from_density(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw ShapeError("Bloch vector needs a 2x2 density matrix");
  const Vec3 c = pauli_coefficients(rho.entries());
  return BlochVector(2.0 * c);
}

CMatrix matrix_exponential(const CMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("matrix exponential needs a square matrix");
  if (!all_finite(a)) throw NumericError("matrix exponential of non-finite matrix");

  // Higham (2005) degree-13 Pade coefficients.
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const Eigen::Index n = a.rows();
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 == 0.0) return CMatrix::Identity(n, n);
  int squarings = 0;
  if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const CMatrix as = a / std::ldexp(1.0, squarings);

  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = as * as;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;
  const CMatrix u =
      as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const CMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  CMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  if (!all_finite(r)) throw NumericError("matrix exponential overflowed");
  return r;
}

CMatrix hermitian_exponential(const CMatrix& h, double scale) {
  if (h.rows() != h.cols()) throw ShapeError("exponential needs a square matrix");
  if (!all_finite(h) || !std::isfinite(scale)) throw NumericError("non-finite generator");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const Eigen::VectorXd& w = es.eigenvalues();
  CVector phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phases(i) = std::polar(1.0, -scale * w(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

UnitaryOperator rotation_operator(const Vec3& axis, double alpha) {
  if (!std::isfinite(alpha)) throw NumericError("non-finite rotation angle");
  if (std::abs(axis.norm() - 1.0) > kAxisTolerance) throw InvalidAxis("rotation axis must be a unit vector");
  return UnitaryOperator(std::cos(alpha / 2.0) * identity2() - kI * std::sin(alpha / 2.0) * pauli_dot(axis));
}

Vec3 rotate_vector(const Vec3& v, const Vec3& axis, double alpha) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  return c * v + s * axis.cross(v) + (1.0 - c) * axis.dot(v) * axis;
}

double phase_insensitive_overlap(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("operator shapes differ");
  return std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

double global_phase_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("operator shapes differ");
  const Complex overlap = (b.adjoint() * a).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0, 0.0};
  return (a - phase * b).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const CMatrix& m, double tol) {
  return m.rows() == m.cols() &&
         (m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace scq
