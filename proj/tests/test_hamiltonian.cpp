#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "scq/constants.hpp"
#include "scq/errors.hpp"
#include "scq/hamiltonian.hpp"

using namespace scq;
using scq::constants::elementary_charge;
using scq::constants::hbar;

namespace {

QubitParams charge_reference() {
  QubitParams p;
  p.kind = QubitKind::charge;
  p.charging_energy = 7.55e-23;
  p.josephson_energy = 0.018 * p.charging_energy;
  p.gate_capacitance = 0.68e-15;
  p.gate_charge = p.gate_capacitance * 1e-3 / (2.0 * elementary_charge);
  p.junction_inductive_energy = p.josephson_energy;
  return p;
}

double coefficient(const CMatrix& h, const CMatrix& sigma) { return 0.5 * (sigma * h).trace().real(); }

}  // namespace

// ---------- zero-point fluctuations ----------

TEST(ZeroPoint, InductiveTwiceCharging) {
  const auto z = zero_point_fluctuations(1e-23, 2e-23);
  EXPECT_NEAR(z.phi, 1.0, 1e-15);
  EXPECT_NEAR(z.n, 0.5, 1e-15);
}

TEST(ZeroPoint, InductiveThirtyTwoCharging) {
  const auto z = zero_point_fluctuations(1e-23, 32e-23);
  EXPECT_NEAR(z.n, 1.0, 1e-15);
  EXPECT_NEAR(z.phi, 0.5, 1e-15);
}

TEST(ZeroPoint, ProductIsOneHalf) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> exponent(-26.0, -20.0);
  for (int i = 0; i < 500; ++i) {
    const auto z = zero_point_fluctuations(std::pow(10.0, exponent(rng)), std::pow(10.0, exponent(rng)));
    EXPECT_NEAR(z.n * z.phi, 0.5, 1e-12);
  }
}

TEST(ZeroPoint, RejectsNonPositiveEnergy) {
  EXPECT_THROW(zero_point_fluctuations(0.0, 1e-23), DomainError);
  EXPECT_THROW(zero_point_fluctuations(1e-23, -1e-23), DomainError);
}

TEST(ZeroPoint, SuppliedPhaseOverridesDerived) {
  QubitParams p = preset_params(QubitKind::phase);
  p.junction_inductive_energy = p.josephson_energy;
  const auto z = resolve_zero_point(p);
  EXPECT_EQ(z.phi, 0.0398);
  EXPECT_NEAR(z.n, std::pow(p.josephson_energy / (32.0 * p.charging_energy), 0.25), 1e-12);
}

TEST(ZeroPoint, SingleSuppliedValueUsesProductIdentity) {
  QubitParams p;
  p.phi_zpf = 0.0398;
  EXPECT_NEAR(resolve_zero_point(p).n, 0.5 / 0.0398, 1e-12);
  QubitParams none;
  EXPECT_THROW(resolve_zero_point(none), DomainError);
}

// ---------- approximate ----------

TEST(Approximate, ChargeDegeneracyPointIsPureX) {
  QubitParams p = charge_reference();
  p.gate_charge = 0.5;
  const CMatrix h = build_approximate(p).matrix();
  EXPECT_EQ(coefficient(h, sigma_z()), 0.0);
  EXPECT_NEAR(coefficient(h, sigma_x()), 0.5 * p.josephson_energy, 1e-40);
}

TEST(Approximate, ChargeReferenceCoefficients) {
  const QubitParams p = charge_reference();
  // Printed values use e = 1.602e-19 C; CODATA e shifts n_g in the 4th digit.
  EXPECT_NEAR(p.gate_charge, 2.1224, 5e-4);
  const CMatrix h = build_approximate(p).matrix();
  EXPECT_NEAR(coefficient(h, sigma_z()), p.charging_energy * (0.5 - p.gate_charge), 1e-36);
  EXPECT_NEAR(coefficient(h, sigma_z()), -1.2249e-22, 5e-4 * 1.2249e-22);
  EXPECT_NEAR(coefficient(h, sigma_x()), 6.795e-25, 1e-28);
  EXPECT_NEAR(coefficient(h, sigma_y()), 0.0, 1e-40);
}

TEST(Approximate, PhaseCancellationPoint) {
  QubitParams p = preset_params(QubitKind::phase);
  p.bias_current = p.josephson_energy * elementary_charge / (hbar * 0.0398);
  const CMatrix h = build_approximate(p).matrix();
  EXPECT_NEAR(coefficient(h, sigma_x()), 0.0, 1e-12 * p.josephson_energy);
  EXPECT_NEAR(coefficient(h, sigma_z()), -0.5 * p.charging_energy, 1e-40);
}

TEST(Approximate, FluxCoefficients) {
  QubitParams p = preset_params(QubitKind::flux);
  p.flux_phase = 0.3;
  const double phi = resolve_zero_point(p).phi;
  const CMatrix h = build_approximate(p).matrix();
  EXPECT_NEAR(coefficient(h, sigma_x()), 0.5 * p.josephson_energy - p.inductive_energy * phi * 0.3, 1e-36);
  EXPECT_NEAR(coefficient(h, sigma_z()), -0.5 * p.charging_energy, 1e-36);
}

TEST(Approximate, FluxPresetIsPureZ) {
  const CMatrix h = build_approximate(preset_params(QubitKind::flux)).matrix();
  EXPECT_NEAR(coefficient(h, sigma_x()), 0.0, 1e-36);
}

TEST(Approximate, RejectsGeneralCircuit) {
  EXPECT_THROW(build_approximate(preset_params(QubitKind::lcjj)), UnsupportedKind);
}

TEST(Approximate, DriveDerivativeIsLinearResponse) {
  QubitParams p = charge_reference();
  const HamiltonianOperator h0 = build_approximate(p);
  const CMatrix* d = h0.drive_derivative(DriveChannel::voltage);
  ASSERT_NE(d, nullptr);
  EXPECT_EQ(h0.drive_derivative(DriveChannel::current), nullptr);
  p.gate_charge += gate_charge_from_voltage(p.gate_capacitance, 2e-4);
  const CMatrix diff = build_approximate(p).traceless() - h0.traceless();
  EXPECT_LE((diff - 2e-4 * *d).cwiseAbs().maxCoeff(), 1e-12 * d->cwiseAbs().maxCoeff() * 2e-4);
}

// ---------- exact two-level ----------

TEST(ExactTwoLevel, ChargeWithoutGateChargeIsFrozen) {
  QubitParams p = charge_reference();
  p.gate_charge = 0.0;
  EXPECT_LT(build_exact_two_level(p).traceless().norm(), 1e-30);
}

TEST(ExactTwoLevel, ChargeReferenceMatchesHandExpansion) {
  const QubitParams p = charge_reference();
  const double n = resolve_zero_point(p).n;
  const double ng = p.gate_charge;
  // (n sigma_y - n_g)^2 = (n^2 + n_g^2) I - 2 n n_g sigma_y
  const CMatrix expected = p.charging_energy * ((n * n + ng * ng) * identity2() - 2.0 * n * ng * sigma_y()) -
                           p.josephson_energy * std::cos(resolve_zero_point(p).phi) * identity2();
  const HamiltonianOperator h = build_exact_two_level(p);
  EXPECT_LE((h.matrix() - expected).cwiseAbs().maxCoeff(), 1e-12 * expected.cwiseAbs().maxCoeff());
  const CMatrix traceless = -2.0 * 7.55e-23 * ng * n * sigma_y();
  EXPECT_LE((h.traceless() - traceless).cwiseAbs().maxCoeff(), 1e-12 * traceless.cwiseAbs().maxCoeff());
  EXPECT_NEAR(h.identity_offset(), expected.trace().real() / 2.0, 1e-12 * std::abs(h.identity_offset()));
}

TEST(ExactTwoLevel, FluxWithoutBiasIsFrozen) {
  QubitParams p = preset_params(QubitKind::flux);
  p.flux_phase = 0.0;
  EXPECT_LT(build_exact_two_level(p).traceless().norm(), 1e-30);
}

TEST(ExactTwoLevel, DriveFreeIsIdentityForEveryKind) {
  for (QubitKind kind : {QubitKind::charge, QubitKind::phase, QubitKind::flux, QubitKind::lcjj}) {
    QubitParams p = preset_params(kind);
    p.gate_charge = 0.0;
    p.bias_current = 0.0;
    p.flux_phase = 0.0;
    EXPECT_LT(build_exact_two_level(p).traceless().norm(), 1e-30) << to_string(kind);
  }
}

TEST(ExactTwoLevel, TracelessPartsPerKind) {
  const QubitParams phase = preset_params(QubitKind::phase);
  const CMatrix want_phase = -hbar / (2.0 * elementary_charge) * phase.bias_current * 0.0398 * sigma_x();
  EXPECT_LE((build_exact_two_level(phase).traceless() - want_phase).norm(), 1e-12 * want_phase.norm());

  const QubitParams flux = preset_params(QubitKind::flux);
  const double phi = resolve_zero_point(flux).phi;
  const CMatrix want_flux = -flux.inductive_energy * phi * flux.flux_phase * sigma_x();
  EXPECT_LE((build_exact_two_level(flux).traceless() - want_flux).norm(), 1e-12 * want_flux.norm());
}

TEST(ExactTwoLevel, ChargeModelsAreOrthogonal) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> ng(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    QubitParams p = charge_reference();
    p.gate_charge = ng(rng);
    const CMatrix app = build_approximate(p).matrix();
    const CMatrix ex = build_exact_two_level(p).matrix();
    EXPECT_EQ((sigma_y() * app).trace(), Complex(0.0, 0.0));
    EXPECT_LE(std::abs((sigma_x() * ex).trace()), 1e-40);
    EXPECT_LE(std::abs((sigma_z() * ex).trace()), 1e-12 * ex.norm());
  }
}

// ---------- general circuit ----------

TEST(General, NoDriveRemainsAtInitialState) {
  EXPECT_LT(build_general(preset_params(QubitKind::lcjj), 0.0, 0.0, 0.0).traceless().norm(), 1e-30);
}

TEST(General, VoltageOnlyGivesSigmaY) {
  const QubitParams p = preset_params(QubitKind::lcjj);
  const double n = resolve_zero_point(p).n;
  const CMatrix h = build_general(p, 1e-6, 0.0, 0.0).traceless();
  const double want = -2.0 * p.charging_energy * n * (p.gate_capacitance * 1e-6 / (2.0 * elementary_charge));
  EXPECT_NEAR(coefficient(h, sigma_y()), want, 1e-12 * std::abs(want));
  EXPECT_LE(std::abs(coefficient(h, sigma_x())) + std::abs(coefficient(h, sigma_z())), 1e-12 * std::abs(want));
}

TEST(General, CurrentOnlyGivesSigmaX) {
  const QubitParams p = preset_params(QubitKind::lcjj);
  const double phi = resolve_zero_point(p).phi;
  const CMatrix want = -hbar / (2.0 * elementary_charge) * phi * 1e-9 * sigma_x();
  EXPECT_LE((build_general(p, 0.0, 1e-9, 0.0).traceless() - want).norm(), 1e-12 * want.norm());
}

TEST(General, DrivesEnterLinearly) {
  QubitParams p = preset_params(QubitKind::lcjj);
  p.inductive_energy = 0.3 * p.josephson_energy;
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::optional<int> levels : {std::optional<int>{}, std::optional<int>{6}}) {
    const HamiltonianOperator h0 = build_general(p, 0.0, 0.0, 0.0, levels);
    for (int i = 0; i < 10; ++i) {
      const double v = 1e-6 * u(rng), c = 1e-9 * u(rng), f = 0.1 * u(rng);
      // Only the terms linear in the drives survive after removing the trace.
      const CMatrix lhs = build_general(p, v, c, f, levels).traceless() - h0.traceless();
      CMatrix rhs = v * *h0.drive_derivative(DriveChannel::voltage) + c * *h0.drive_derivative(DriveChannel::current) +
                    f * *h0.drive_derivative(DriveChannel::flux);
      const auto dim = rhs.rows();
      rhs -= (rhs.trace() / static_cast<double>(dim)) * CMatrix::Identity(dim, dim);
      EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-9 * std::max(rhs.cwiseAbs().maxCoeff(), 1e-30));
    }
  }
}

TEST(General, RequiresGeneralKind) {
  EXPECT_THROW(build_general(preset_params(QubitKind::charge), 0.0, 0.0, 0.0), UnsupportedKind);
}

// ---------- Fock ----------

TEST(Fock, RejectsSmallTruncation) { EXPECT_THROW(build_fock(charge_reference(), 3), TruncationError); }

TEST(Fock, HermitianForRandomParameters) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (QubitKind kind : {QubitKind::charge, QubitKind::phase, QubitKind::flux, QubitKind::lcjj}) {
    for (int i = 0; i < 5; ++i) {
      QubitParams p = preset_params(kind);
      p.charging_energy *= u(rng);
      p.josephson_energy *= u(rng);
      p.gate_charge = u(rng);
      p.flux_phase = u(rng);
      const CMatrix h = build_fock(p, 10).matrix();
      EXPECT_TRUE(is_hermitian(h, 1e-12 * h.cwiseAbs().maxCoeff()));
    }
  }
}

TEST(Fock, VacuumGroundStateForMatchedOscillator) {
  // E_c n^2 = E_L phi^2 / 2 when E_L = E_LJ0 / 4: the quadratic form is diagonal.
  QubitParams p;
  p.kind = QubitKind::flux;
  p.charging_energy = 1e-23;
  p.junction_inductive_energy = 40e-23;
  p.inductive_energy = 10e-23;
  const CMatrix h = build_fock(p, 12).matrix();
  CMatrix off = h;
  off.diagonal().setZero();
  EXPECT_LE(off.cwiseAbs().maxCoeff(), 1e-12 * h.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  EXPECT_NEAR(std::abs(es.eigenvectors()(0, 0)), 1.0, 1e-12);
}

TEST(Fock, CosinePhaseMatchesSeriesOracle) {
  // E_c = 0 charge circuit: H = -E_J cos(phi), phi = phi_zpf (a + a^dagger).
  QubitParams p;
  p.kind = QubitKind::charge;
  p.josephson_energy = 1.0;
  p.phi_zpf = 0.5;
  const int levels = 24;
  const CMatrix a = annihilation_operator(levels);
  const CMatrix phi = 0.5 * (a + a.adjoint());
  const CMatrix cos_oracle = 0.5 * (oracle::taylor_exp(kI * phi, 60) + oracle::taylor_exp(-kI * phi, 60));
  const CMatrix h = build_fock(p, levels).matrix();
  EXPECT_LE((h + cos_oracle).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(-h(0, 0).real(), std::exp(-0.125), 1e-12);
}

TEST(Fock, ConvergenceReportMatchesDirectDiagonalization) {
  const QubitParams p = charge_reference();
  const FockConvergence c = fock_convergence(p, 4, 8);
  for (int levels : {4, 8}) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(build_fock(p, levels).matrix());
    const Eigen::Vector2d& reported = levels == 4 ? c.eigen_low : c.eigen_high;
    EXPECT_NEAR(reported(0), es.eigenvalues()(0), 1e-12 * std::abs(es.eigenvalues()(0)));
    EXPECT_NEAR(reported(1), es.eigenvalues()(1), 1e-12 * std::abs(es.eigenvalues()(1)));
  }
  EXPECT_EQ(c.converged, c.max_relative_change < 1e-6);
}

TEST(Fock, TransmonRegimeConverges) {
  QubitParams p;
  p.kind = QubitKind::charge;
  p.josephson_energy = 6.017e-23;
  p.charging_energy = 1.711e-23 / 50.0;
  p.junction_inductive_energy = p.josephson_energy;
  const FockConvergence c = fock_convergence(p, 32, 48);
  EXPECT_TRUE(c.converged) << c.max_relative_change;
}

TEST(Fock, ProjectionReportsLeakage) {
  CVector v(4);
  v << 0.6, 0.0, 0.8, 0.0;
  const QubitProjection q = project_to_qubit(StateVector(v));
  EXPECT_NEAR(q.leakage, 0.64, 1e-15);
  EXPECT_NEAR(std::abs(q.qubit[0]), 1.0, 1e-15);
}
