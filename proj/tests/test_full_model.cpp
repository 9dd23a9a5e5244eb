// Copyright 2026 The cvmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cvmem/full_model.hpp"
#include "cvmem/mapping.hpp"

namespace cvmem {
namespace {

EnsembleParams default_params() { return EnsembleParams::from_cooperativity(100.0, 15.0); }

Matrix2d diag_input(double x, double y) {
  Matrix2d s = Matrix2d::Zero();
  s(0, 0) = x;
  s(1, 1) = y;
  return s;
}

// Random Hurwitz drift in doubled form with matching diffusion.
LinearQuantumSystem random_system(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatrixXcd k(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) k(i, j) = cdouble(0.3 * g(rng), 0.3 * g(rng));
  }
  Eigen::ComplexEigenSolver<MatrixXcd> es(k, false);
  double shift = 0.0;
  for (int i = 0; i < n; ++i) shift = std::max(shift, es.eigenvalues()[i].real());
  k -= (shift + 0.2 + std::abs(g(rng))) * MatrixXcd::Identity(n, n);
  MatrixXcd m = MatrixXcd::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = k;
  m.bottomRightCorner(n, n) = k.conjugate();
  MatrixXcd d = MatrixXcd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) d(i, i) = d(i + n, i + n) = -k(i, i).real();
  MatrixXcd b = MatrixXcd::Zero(2 * n, 2);
  b(n - 1, 0) = b(2 * n - 1, 1) = 1.0;
  MatrixXcd c = MatrixXcd::Zero(2, 2 * n);
  c(0, n - 1) = c(1, 2 * n - 1) = 1.0;
  std::vector<std::string> labels;
  for (int i = 0; i < 2 * n; ++i) labels.push_back("z" + std::to_string(i));
  return LinearQuantumSystem(m, b, d, c, -MatrixXcd::Identity(2, 2), labels);
}

TEST(LinearQuantumSystem, RejectsUnstableDrift) {
  MatrixXcd m = MatrixXcd::Identity(2, 2) * 0.1;
  MatrixXcd b = MatrixXcd::Identity(2, 2);
  MatrixXcd d = MatrixXcd::Zero(2, 2);
  MatrixXcd c = MatrixXcd::Identity(2, 2);
  EXPECT_THROW(LinearQuantumSystem(m, b, d, c, -c, {"a", "a_dag"}), NumericalError);
  m = -m;
  d(0, 0) = -1.0;
  EXPECT_THROW(LinearQuantumSystem(m, b, d, c, -c, {"a", "a_dag"}), std::invalid_argument);
  d(0, 0) = 0.0;
  EXPECT_THROW(LinearQuantumSystem(m, b, d, c, -c, {"a"}), std::invalid_argument);
}

TEST(LinearQuantumSystem, DampedModeRelaxesToInputSpectrum) {
  // da/dt = -k a + sqrt(2k) a_in: the intracavity state follows a flat
  // input exactly.
  const double k = 0.7;
  MatrixXcd m = -k * MatrixXcd::Identity(2, 2);
  MatrixXcd b = std::sqrt(2 * k) * MatrixXcd::Identity(2, 2);
  MatrixXcd c = std::sqrt(2 * k) * MatrixXcd::Identity(2, 2);
  LinearQuantumSystem sys(m, b, MatrixXcd::Zero(2, 2), c, -MatrixXcd::Identity(2, 2), {"a", "a_dag"});
  const auto v = steady_covariance(sys, diag_input(0.3, 1.0 / 0.3));
  EXPECT_NEAR(v.quadrature(0, 0), 0.3, 1e-13);
  EXPECT_NEAR(v.quadrature(1, 1), 1.0 / 0.3, 1e-12);
  // Empty cavity reflects the input unchanged.
  const auto out = output_field_spectrum(sys, diag_input(0.3, 1.0 / 0.3), 0.4);
  EXPECT_NEAR(out(0, 0), 0.3, 1e-12);
  EXPECT_NEAR(out(1, 1), 1.0 / 0.3, 1e-12);
}

TEST(Lyapunov, MatchesFrequencyIntegrationOnRandomSystems) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 20; ++k) {
    const auto sys = random_system(rng, 3);
    const Matrix2d s = diag_input(0.5, 2.0);
    const auto lyap = steady_covariance(sys, s).quadrature;
    const auto spectral = steady_covariance_spectral(sys, [&](double) { return s; }).quadrature;
    EXPECT_LT((lyap - spectral).cwiseAbs().maxCoeff(), 1e-6 * lyap.cwiseAbs().maxCoeff()) << "system " << k;
  }
}

TEST(Lyapunov, ResidualVanishes) {
  std::mt19937_64 rng(29);
  const auto sys = random_system(rng, 4);
  const MatrixXcd d = sys.total_diffusion(Matrix2d::Identity());
  const MatrixXcd v = solve_lyapunov(sys.drift(), d);
  EXPECT_LT((sys.drift() * v + v * sys.drift().adjoint() + d).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ThreeLevel, DriftStableAndCovarianceHeisenbergInRegime) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    EnsembleParams base;
    base.kappa = 1.0 + 9.0 * u(rng);
    const double c = std::pow(10.0, 4.0 * u(rng) - 1.0);
    const auto window = regime_pumping_window(c, base);
    const double pump = window.lower * std::pow(window.upper / window.lower, u(rng));
    const auto p = EnsembleParams::from_cooperativity(c, pump, base);
    const auto sys = build_three_level_system(p);
    for (Eigen::Index i = 0; i < sys.eigenvalues().size(); ++i) EXPECT_LT(sys.eigenvalues()[i].real(), 0.0);
    const auto cov = steady_covariance(sys, diag_input(0.25, 4.0));
    EXPECT_GE(cov.state().symplectic_eigenvalues().minCoeff(), 1.0 - 1e-9);
    const Matrix2d out = output_field_spectrum(sys, diag_input(0.25, 4.0), 0.05);
    EXPECT_GE(out.determinant(), 1.0 - 1e-9);
  }
}

TEST(ThreeLevel, AdiabaticEliminationReproducesReducedRates) {
  for (double c : {1.0, 10.0, 100.0, 1000.0}) {
    const auto p = EnsembleParams::from_cooperativity(c, 0.05 * (1 + 2 * c));
    const auto red = adiabatic_reduction(build_three_level_system(p), p.atom_number);
    const auto rates = derive_rates(p);
    EXPECT_NEAR(red.gamma_tilde0, rates.gamma_tilde0, 1e-2 * rates.gamma_tilde0) << "C = " << c;
    EXPECT_NEAR(red.beta, rates.beta, 1e-2 * rates.beta) << "C = " << c;
    EXPECT_NEAR(red.diffusion, rates.diffusion, 1e-2 * rates.diffusion) << "C = " << c;
  }
}

TEST(ThreeLevel, ApproachesReducedModelForFastCavity) {
  // The gap to the reduced model is set by gamma0~ / kappa.
  double prev = INFINITY;
  for (double kappa : {2.0, 20.0, 200.0}) {
    EnsembleParams base;
    base.kappa = kappa;
    const auto p = EnsembleParams::from_cooperativity(100.0, 15.0, base);
    const double full = full_map_inseparability(p, 0.5).i_at;
    const double simple = map_inseparability(derive_rates(p), 0.5).i_at;
    const double gap = std::abs(full - simple) / simple;
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(ThreeLevel, DefaultParametersFrozen) {
  const auto p = default_params();
  EXPECT_NEAR(full_map_inseparability(p, 2.0).i_at, 2.0, 1e-9);
  const double at_one = full_map_inseparability(p, 1.0).i_at;
  EXPECT_NEAR(at_one, map_inseparability(derive_rates(p), 1.0).i_at, 0.02 * at_one);
}

TEST(ThreeLevel, NoCouplingLeavesSpinsCoherent) {
  auto p = default_params();
  p.coupling = 0.0;
  const auto r = full_map_inseparability(p, 0.3);
  EXPECT_NEAR(r.v_minus, 1.0, 1e-12);
  EXPECT_NEAR(r.v_plus, 1.0, 1e-12);
  // Empty ensemble: the cavity reflects the input unchanged.
  const auto sys = build_three_level_system(p);
  const Matrix2d out = output_field_spectrum(sys, diag_input(0.3, 1 / 0.3), 0.0);
  EXPECT_NEAR(out(0, 0), 0.3, 1e-12);
}

TEST(ThreeLevel, NoControlFieldDecouplesSpins) {
  auto p = default_params();
  p.control_rabi = 0.0;
  const auto r = full_map_inseparability(p, 0.3);
  EXPECT_NEAR(r.i_at, 2.0, 1e-12);
}

TEST(ThreeLevel, RamanSystemIsStable) {
  EnsembleParams base;
  base.scheme = PumpingScheme::Raman;
  base.raman_detuning = 30.0;
  const auto p = EnsembleParams::from_cooperativity(100.0, 1e-3, base);
  const auto r = full_map_inseparability(p, 1.0);
  EXPECT_GT(r.i_at, 0.0);
  EXPECT_LT(r.i_at, 2.0);
}

}  // namespace
}  // namespace cvmem
