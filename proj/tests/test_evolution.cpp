#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "scq/constants.hpp"
#include "scq/errors.hpp"
#include "scq/evolution.hpp"
#include "scq/hamiltonian.hpp"

using namespace scq;
using scq::constants::hbar;

namespace {

StateVector state(Complex a, Complex b) {
  CVector v(2);
  v << a, b;
  return StateVector::normalize(v);
}

double max_distance(const BlochTrajectory& a, const BlochTrajectory& b) {
  EXPECT_EQ(a.size(), b.size());
  double d = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) d = std::max(d, a.bloch[i].distance(b.bloch[i]));
  return d;
}

QubitParams charge_preset_with_gate(double ng) {
  QubitParams p = preset_params(QubitKind::charge);
  p.gate_charge = ng;
  return p;
}

}  // namespace

TEST(TimeGrid, Validates) {
  EXPECT_THROW((TimeGrid{0.0, 0.0, 10}.validate()), InvalidArgument);
  EXPECT_THROW((TimeGrid{0.0, 1e-12, 0}.validate()), InvalidArgument);
  const TimeGrid g{1.0, 0.5, 4};
  EXPECT_EQ(g.samples(), 5);
  EXPECT_DOUBLE_EQ(g.t_final(), 3.0);
}

// ---------- propagate_static ----------

TEST(PropagateStatic, FrozenWithoutTracelessPart) {
  const HamiltonianOperator h = build_exact_two_level(charge_preset_with_gate(0.0));
  const StateVector psi0 = state(2.0, -kI);
  const BlochTrajectory traj = propagate_static(h, psi0, {0.0, 1e-12, 200});
  for (const auto& r : traj.bloch) {
    EXPECT_NEAR(r.x, 0.0, 1e-12);
    EXPECT_NEAR(r.y, -0.8, 1e-12);
    EXPECT_NEAR(r.z, 0.6, 1e-12);
  }
}

TEST(PropagateStatic, RabiRotationInYZPlane) {
  const double ej = 1.359e-24;
  const HamiltonianOperator h(0.5 * ej * sigma_x(), ModelKind::approximate);
  const double omega = ej / hbar;
  const TimeGrid grid{0.0, 2.0 * std::numbers::pi / omega / 400.0, 1000};
  const BlochTrajectory traj = propagate_static(h, StateVector::basis(2, 0), grid);
  const auto sz = observable_series(traj, observable_z());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double wt = omega * traj.times[i];
    EXPECT_NEAR(traj.bloch[i].x, 0.0, 1e-12);
    EXPECT_NEAR(traj.bloch[i].y, -std::sin(wt), 1e-10);
    EXPECT_NEAR(traj.bloch[i].z, std::cos(wt), 1e-10);
    EXPECT_NEAR(sz[i], std::cos(wt), 1e-10);
    EXPECT_NEAR(traj.norms[i], 1.0, 1e-10);
  }
}

TEST(PropagateStatic, TinyStepLeavesStateUnchanged) {
  const HamiltonianOperator h = build_approximate(preset_params(QubitKind::charge));
  const StateVector psi0 = state(1.0, Complex{2.0, 1.0});
  const BlochTrajectory traj = propagate_static(h, psi0, {0.0, 1e-22, 1});
  EXPECT_LE(traj.final_bloch().distance(bloch_from_state(psi0)), 1e-9);
}

TEST(PropagateStatic, MatchesExponentialPerSample) {
  std::mt19937_64 rng(61);
  const CMatrix hm = 1e-22 * oracle::random_hermitian(rng, 2);
  const HamiltonianOperator h(hm, ModelKind::approximate);
  const StateVector psi0(oracle::random_state(rng, 2));
  const TimeGrid grid{0.0, 5e-14, 50};
  const BlochTrajectory traj = propagate_static(h, psi0, grid);
  for (int k = 0; k <= grid.steps; k += 7) {
    const CMatrix u = oracle::taylor_exp(-kI * hm * (grid.time(k) / hbar), 80);
    const CVector psi = u * psi0.amplitudes();
    const Vec3 want = oracle::bloch_by_trace(psi * psi.adjoint());
    EXPECT_LE((traj.bloch[k].vec() - want).norm(), 1e-9);
  }
}

TEST(PropagateStatic, DimensionMismatch) {
  const HamiltonianOperator h = build_approximate(preset_params(QubitKind::charge));
  EXPECT_THROW(propagate_static(h, StateVector::basis(3, 0), {0.0, 1e-12, 1}), ShapeError);
}

TEST(PropagateStatic, EnergyIsConserved) {
  const HamiltonianOperator h = build_fock(preset_params(QubitKind::flux), 8);
  std::mt19937_64 rng(67);
  const StateVector psi0(oracle::random_state(rng, 8));
  const BlochTrajectory traj = propagate_static(h, psi0, {0.0, 1e-12, 300});
  const HermitianObservable energy(h.matrix());
  const double e0 = expectation(DensityMatrix::from_state(traj.states.front()), energy);
  for (const StateVector& s : traj.states)
    EXPECT_NEAR(expectation(DensityMatrix::from_state(s), energy), e0, 1e-9 * std::abs(e0));
}

TEST(PropagateStatic, FockRunReportsLeakage) {
  const HamiltonianOperator h = build_fock(preset_params(QubitKind::flux), 6);
  const BlochTrajectory traj = propagate_static(h, StateVector::basis(6, 0), {0.0, 1e-12, 50});
  ASSERT_EQ(traj.leakage.size(), traj.size());
  EXPECT_EQ(traj.leakage.front(), 0.0);
  for (double l : traj.leakage) {
    EXPECT_GE(l, 0.0);
    EXPECT_LE(l, 1.0);
  }
}

// ---------- evolve_time_dependent ----------

TEST(EvolveTimeDependent, StaticHamiltonianMatchesExactPath) {
  const HamiltonianOperator h = build_approximate(preset_params(QubitKind::charge));
  const StateVector psi0 = state(2.0, -kI);
  const TimeGrid grid{0.0, 1e-13, 400};
  const BlochTrajectory exact = propagate_static(h, psi0, grid);
  const BlochTrajectory rk4 = evolve_time_dependent(TimeDependentHamiltonian(h.matrix()), psi0, grid, {.substeps = 40});
  EXPECT_LE(max_distance(exact, rk4), 1e-8);
  EXPECT_LE(rk4.max_norm_drift, 1e-8);
}

TEST(EvolveTimeDependent, ZeroAmplitudeDriveIsConstant) {
  const HamiltonianOperator h = build_exact_two_level(charge_preset_with_gate(0.0));
  const auto driven = TimeDependentHamiltonian::driven(h, DriveChannel::voltage, [](double) { return 0.0; });
  const BlochTrajectory traj = evolve_time_dependent(driven, state(1.0, Complex{2.0, 1.0}), {0.0, 1e-12, 100});
  for (const auto& r : traj.bloch) EXPECT_LE(r.distance(traj.bloch.front()), 1e-12);
}

TEST(EvolveTimeDependent, HalvingStepConverges) {
  const QubitParams p = charge_preset_with_gate(0.0);
  const HamiltonianOperator h = build_exact_two_level(p);
  const double omega = 7.03e11;
  const auto driven = TimeDependentHamiltonian::driven(
      h, DriveChannel::voltage, [=](double t) { return 1e-3 * std::cos(omega * t) + 2e-4; });
  const StateVector psi0 = state(2.0, -kI);
  const TimeGrid grid{0.0, 2e-14, 2000};
  const BlochTrajectory coarse = evolve_time_dependent(driven, psi0, grid, {.substeps = 1});
  const BlochTrajectory fine = evolve_time_dependent(driven, psi0, grid, {.substeps = 2});
  EXPECT_LE(coarse.final_bloch().distance(fine.final_bloch()), 1e-6);
  EXPECT_LE(fine.max_norm_drift, 1e-8);
}

TEST(EvolveTimeDependent, RenormalizationRemovesDrift) {
  const HamiltonianOperator h = build_approximate(preset_params(QubitKind::charge));
  const TimeGrid grid{0.0, 1e-12, 200};
  const BlochTrajectory traj =
      evolve_time_dependent(TimeDependentHamiltonian(h.matrix()), StateVector::basis(2, 0), grid,
                            {.substeps = 1, .renormalize = true});
  EXPECT_LE(traj.max_norm_drift, 1e-14);
}

TEST(EvolveTimeDependent, UnstableStepThrows) {
  const HamiltonianOperator h = build_approximate(preset_params(QubitKind::charge));
  EXPECT_THROW(evolve_time_dependent(TimeDependentHamiltonian(h.matrix()), StateVector::basis(2, 0),
                                     {0.0, 1e-10, 100}),
               IntegrationError);
}

TEST(EvolveTimeDependent, UnsupportedChannel) {
  const HamiltonianOperator h = build_exact_two_level(preset_params(QubitKind::charge));
  EXPECT_THROW(TimeDependentHamiltonian::driven(h, DriveChannel::current, [](double) { return 1.0; }),
               UnsupportedKind);
}

// ---------- evolve_master ----------

TEST(EvolveMaster, MaximallyMixedIsStationary) {
  const HamiltonianOperator h = build_approximate(preset_params(QubitKind::charge));
  const BlochTrajectory traj = evolve_master(density_from_bloch({0, 0, 0}), h, {0.0, 1e-12, 100});
  for (const auto& rho : traj.densities)
    EXPECT_LE((rho.entries() - 0.5 * identity2()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(EvolveMaster, EigenstateIsStationary) {
  const double ec = 7.55e-23;
  const HamiltonianOperator h(0.5 * ec * sigma_z(), ModelKind::approximate);
  const BlochTrajectory traj = evolve_master(density_from_bloch({0, 0, 1}), h, {0.0, 1e-12, 100});
  for (const auto& r : traj.bloch) EXPECT_LE(r.distance({0, 0, 1}), 1e-12);
}

TEST(EvolveMaster, AgreesWithSchroedingerPicture) {
  // Fixes the commutator sign of drho/dt = (i/hbar)[rho, H].
  const HamiltonianOperator h = build_approximate(preset_params(QubitKind::charge));
  const StateVector psi0 = state(2.0, -kI);
  const TimeGrid grid{0.0, 2e-13, 500};
  const BlochTrajectory pure = propagate_static(h, psi0, grid);
  const BlochTrajectory mixed = evolve_master(DensityMatrix::from_state(psi0), h, grid);
  EXPECT_LE(max_distance(pure, mixed), 1e-8);
  const BlochTrajectory rk4 = evolve_time_dependent(TimeDependentHamiltonian(h.matrix()), psi0, grid, {.substeps = 64});
  EXPECT_LE(max_distance(pure, rk4), 1e-8);
  for (const auto& rho : mixed.densities) {
    EXPECT_NEAR(rho.entries().trace().real(), 1.0, 1e-10);
    EXPECT_TRUE(is_hermitian(rho.entries(), 1e-10));
  }
}

TEST(EvolveMaster, RandomHamiltoniansAgreeWithPurePath) {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 20; ++i) {
    const int dim = i % 2 == 0 ? 2 : 4;
    const HamiltonianOperator h(1e-22 * oracle::random_hermitian(rng, dim), ModelKind::fock);
    const StateVector psi0(oracle::random_state(rng, dim));
    const TimeGrid grid{0.0, 1e-13, 40};
    const BlochTrajectory pure = propagate_static(h, psi0, grid);
    const BlochTrajectory mixed = evolve_master(DensityMatrix::from_state(psi0), h, grid);
    EXPECT_LE(max_distance(pure, mixed), 1e-8);
  }
}

// ---------- observable_series ----------

TEST(ObservableSeries, SigmaXMatchesBlochX) {
  const HamiltonianOperator h = build_approximate(preset_params(QubitKind::charge));
  const BlochTrajectory traj = propagate_static(h, state(2.0, -kI), {0.0, 1e-12, 100});
  const auto sx = observable_series(traj, observable_x());
  const auto one = observable_series(traj, HermitianObservable(identity2()));
  for (std::size_t i = 0; i < traj.size(); ++i) {
    EXPECT_NEAR(sx[i], traj.bloch[i].x, 1e-10);
    EXPECT_NEAR(one[i], 1.0, 1e-12);
  }
}

TEST(ObservableSeries, WorksFromDensities) {
  const HamiltonianOperator h = build_approximate(preset_params(QubitKind::charge));
  const BlochTrajectory traj = evolve_master(density_from_bloch({0.6, 0.0, 0.8}), h, {0.0, 1e-12, 50});
  const auto sz = observable_series(traj, observable_z());
  for (std::size_t i = 0; i < traj.size(); ++i) EXPECT_NEAR(sz[i], traj.bloch[i].z, 1e-12);
}

TEST(ObservableSeries, MissingStates) {
  const HamiltonianOperator h = build_approximate(preset_params(QubitKind::charge));
  const BlochTrajectory traj = propagate_static(h, StateVector::basis(2, 0), {0.0, 1e-12, 10}, false);
  EXPECT_TRUE(traj.states.empty());
  EXPECT_THROW(observable_series(traj, observable_x()), MissingData);
}
