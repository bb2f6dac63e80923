#pragma once

// Complex linear algebra for qubit-sized problems: states, density matrices,
// Bloch vectors, observables, matrix exponentials and SU(2) rotations.

#include <complex>

#include <Eigen/Dense>

namespace scq {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;

inline constexpr Complex kI{0.0, 1.0};

/// Normalized pure state. Construction rejects amplitudes whose norm is more
/// than 1e-6 away from one and renormalizes the rest exactly.
class StateVector {
 public:
  explicit StateVector(CVector amplitudes);

  /// Normalizes arbitrary non-zero amplitudes.
  static StateVector normalize(const CVector& amplitudes);
  static StateVector basis(Eigen::Index dim, Eigen::Index level);

  const CVector& amplitudes() const noexcept { return amplitudes_; }
  Eigen::Index dim() const noexcept { return amplitudes_.size(); }
  Complex operator[](Eigen::Index i) const { return amplitudes_(i); }

 private:
  CVector amplitudes_;
};

/// Point in (or on) the unit ball.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  BlochVector() = default;
  BlochVector(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}
  explicit BlochVector(const Vec3& v) : x(v.x()), y(v.y()), z(v.z()) {}

  Vec3 vec() const { return {x, y, z}; }
  double norm() const { return vec().norm(); }
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  double distance(const BlochVector& o) const { return (vec() - o.vec()).norm(); }
};

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  /// Validates hermiticity, trace and positivity within `tol`.
  explicit DensityMatrix(CMatrix entries, double tol = 1e-9);

  static DensityMatrix from_state(const StateVector& psi);

  const CMatrix& entries() const noexcept { return entries_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }

 private:
  CMatrix entries_;
};

/// Hermitian matrix used as a measurement operator.
class HermitianObservable {
 public:
  explicit HermitianObservable(CMatrix entries);

  const CMatrix& entries() const noexcept { return entries_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }

 private:
  CMatrix entries_;
};

/// Matrix with U^dagger U = I within 1e-10.
class UnitaryOperator {
 public:
  explicit UnitaryOperator(CMatrix entries);

  const CMatrix& entries() const noexcept { return entries_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }

 private:
  CMatrix entries_;
};

// Pauli matrices.
const CMatrix& sigma_x();
const CMatrix& sigma_y();
const CMatrix& sigma_z();
const CMatrix& identity2();

/// n . sigma for an arbitrary real 3-vector.
CMatrix pauli_dot(const Vec3& n);

/// Pauli coefficients (c_x, c_y, c_z) of the traceless part of a 2x2 matrix,
/// i.e. c_k = Re Tr(sigma_k A) / 2.
Vec3 pauli_coefficients(const CMatrix& a);

HermitianObservable observable_x();
HermitianObservable observable_y();
HermitianObservable observable_z();

BlochVector bloch_from_state(const StateVector& psi);

/// A state whose Bloch vector is `r` (|r| = 1 within 1e-9), with a real,
/// non-negative first amplitude.
StateVector state_from_bloch(const BlochVector& r);

DensityMatrix density_from_bloch(const BlochVector& r);

/// Tr(rho X); throws ShapeError on mismatched dimensions.
double expectation(const DensityMatrix& rho, const HermitianObservable& x);

/// Bloch vector of a 2x2 density matrix.
BlochVector bloch_from_density(const DensityMatrix& rho);

/// exp(A) for a general complex square matrix (scaling and squaring with a
/// degree-13 Pade approximant).
CMatrix matrix_exponential(const CMatrix& a);

/// exp(-i * scale * H) for Hermitian H, through the eigendecomposition of H.
CMatrix hermitian_exponential(const CMatrix& h, double scale);

/// exp(-i alpha/2 n.sigma) = cos(alpha/2) I - i sin(alpha/2) n.sigma.
UnitaryOperator rotation_operator(const Vec3& axis, double alpha);

/// Right-handed rotation of a 3-vector about a unit axis (Rodrigues).
Vec3 rotate_vector(const Vec3& v, const Vec3& axis, double alpha);

/// |Tr(A^dagger B)| / dim; equals one iff A and B agree up to a global phase
/// (for unitary A and B).
double phase_insensitive_overlap(const CMatrix& a, const CMatrix& b);

/// max |(A - e^{i theta} B)_ij| with theta chosen to align the largest-overlap
/// phase; zero iff the matrices agree up to a global phase.
double global_phase_distance(const CMatrix& a, const CMatrix& b);

bool is_hermitian(const CMatrix& m, double tol);
bool is_unitary(const CMatrix& m, double tol);

}  // namespace scq
