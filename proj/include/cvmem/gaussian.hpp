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

// Gaussian states of field modes, the linear optics acting on them, and the
// entanglement measures used throughout the library.
//
// Conventions:
//  * Quadratures X = a + a^dag, Y = i(a^dag - a), so [X, Y] = 2i and the
//    vacuum has Var(X) = Var(Y) = 1.
//  * Covariance matrices are ordered (X1, Y1, X2, Y2, ...) and hold the
//    symmetrized second moments.
//  * With this normalization two separable modes satisfy
//    (Var(X1 - X2) + Var(Y1 + Y2)) / 2 >= 2.

#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace cvmem {

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kHeisenbergTolerance = 1e-9;
inline constexpr double kSymplecticTolerance = 1e-10;

/// Standard symplectic form for `n_modes` modes: block-diagonal [[0, 1], [-1, 0]].
inline Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

/// Symplectic eigenvalues of a 2n x 2n covariance matrix, sorted ascending.
///
/// The eigenvalues of Omega * cov come in purely imaginary pairs +-i nu; the
/// moduli are paired up after sorting.
inline Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
  const auto dim = cov.rows();
  if (dim == 0 || dim % 2 != 0 || cov.cols() != dim) {
    throw std::invalid_argument("covariance must be a non-empty 2n x 2n matrix");
  }
  const int n = static_cast<int>(dim / 2);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(symplectic_form(n) * cov, false);
  std::vector<double> moduli(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    moduli[static_cast<std::size_t>(i)] = std::abs(solver.eigenvalues()[i]);
  }
  std::sort(moduli.begin(), moduli.end());
  Eigen::VectorXd nu(n);
  for (int k = 0; k < n; ++k) {
    nu[k] = 0.5 * (moduli[2 * k] + moduli[2 * k + 1]);
  }
  return nu;
}

/// Covariance matrix of an n-mode Gaussian state.
///
/// Construction checks symmetry (relative 1e-12) and the uncertainty
/// principle (every symplectic eigenvalue >= 1 - 1e-9).
class QuadratureState {
 public:
  explicit QuadratureState(Eigen::MatrixXd cov) : cov_(std::move(cov)) {
    const auto dim = cov_.rows();
    if (dim == 0 || dim % 2 != 0 || cov_.cols() != dim) {
      throw std::invalid_argument("covariance must be a non-empty 2n x 2n matrix");
    }
    if (!cov_.allFinite()) {
      throw std::invalid_argument("covariance has non-finite entries");
    }
    const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
      throw std::invalid_argument("covariance is not symmetric");
    }
    cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
    const double nu_min = cvmem::symplectic_eigenvalues(cov_).minCoeff();
    if (nu_min < 1.0 - kHeisenbergTolerance) {
      std::ostringstream msg;
      msg << "covariance violates the uncertainty principle (smallest symplectic eigenvalue "
          << nu_min << ")";
      throw std::invalid_argument(msg.str());
    }
  }

  int n_modes() const { return static_cast<int>(cov_.rows() / 2); }
  const Eigen::MatrixXd& cov() const { return cov_; }
  Eigen::VectorXd symplectic_eigenvalues() const { return cvmem::symplectic_eigenvalues(cov_); }

  double variance_x(int mode) const { return cov_(2 * check(mode), 2 * mode); }
  double variance_y(int mode) const { return cov_(2 * check(mode) + 1, 2 * mode + 1); }

  /// Two-mode marginal (modes i and j, in that order).
  QuadratureState reduced(int i, int j) const {
    check(i);
    check(j);
    if (i == j) throw std::invalid_argument("reduced state needs two distinct modes");
    const int idx[4] = {2 * i, 2 * i + 1, 2 * j, 2 * j + 1};
    Eigen::MatrixXd sub(4, 4);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) sub(r, c) = cov_(idx[r], idx[c]);
    }
    return QuadratureState(std::move(sub));
  }

 private:
  int check(int mode) const {
    if (mode < 0 || mode >= n_modes()) {
      throw std::out_of_range("mode index " + std::to_string(mode) + " out of range");
    }
    return mode;
  }

  Eigen::MatrixXd cov_;
};

/// Linear optical (Gaussian unitary) action on quadratures.
class SymplecticTransform {
 public:
  explicit SymplecticTransform(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
    const auto dim = matrix_.rows();
    if (dim == 0 || dim % 2 != 0 || matrix_.cols() != dim) {
      throw std::invalid_argument("symplectic matrix must be 2n x 2n");
    }
    const Eigen::MatrixXd omega = symplectic_form(static_cast<int>(dim / 2));
    const double defect = (matrix_ * omega * matrix_.transpose() - omega).cwiseAbs().maxCoeff();
    if (defect > kSymplecticTolerance * std::max(1.0, matrix_.squaredNorm())) {
      throw std::invalid_argument("matrix does not preserve the symplectic form");
    }
    if (std::abs(matrix_.determinant() - 1.0) > kSymplecticTolerance * std::max(1.0, matrix_.squaredNorm())) {
      throw std::invalid_argument("symplectic matrix must have unit determinant");
    }
  }

  static SymplecticTransform identity(int n_modes) {
    return SymplecticTransform(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
  }

  /// Phase shift of one mode: X -> cos(t) X + sin(t) Y, Y -> -sin(t) X + cos(t) Y.
  static SymplecticTransform phase_rotation(int n_modes, int mode, double angle) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    check_mode(n_modes, mode);
    const double c = std::cos(angle);
    const double sn = std::sin(angle);
    s(2 * mode, 2 * mode) = c;
    s(2 * mode, 2 * mode + 1) = sn;
    s(2 * mode + 1, 2 * mode) = -sn;
    s(2 * mode + 1, 2 * mode + 1) = c;
    return SymplecticTransform(std::move(s));
  }

  /// Real beamsplitter: a_i -> cos(t) a_i - sin(t) a_j, a_j -> sin(t) a_i + cos(t) a_j.
  /// t = pi/4 is the balanced (50:50) mixer.
  static SymplecticTransform beamsplitter(int n_modes, int i, int j, double angle) {
    check_mode(n_modes, i);
    check_mode(n_modes, j);
    if (i == j) throw std::invalid_argument("beamsplitter needs two distinct modes");
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    const double c = std::cos(angle);
    const double sn = std::sin(angle);
    for (int q = 0; q < 2; ++q) {
      s(2 * i + q, 2 * i + q) = c;
      s(2 * i + q, 2 * j + q) = -sn;
      s(2 * j + q, 2 * i + q) = sn;
      s(2 * j + q, 2 * j + q) = c;
    }
    return SymplecticTransform(std::move(s));
  }

  /// Single-mode squeezer: X -> e^{-r} X, Y -> e^{r} Y.
  static SymplecticTransform squeezer(int n_modes, int mode, double r) {
    check_mode(n_modes, mode);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    s(2 * mode, 2 * mode) = std::exp(-r);
    s(2 * mode + 1, 2 * mode + 1) = std::exp(r);
    return SymplecticTransform(std::move(s));
  }

  int n_modes() const { return static_cast<int>(matrix_.rows() / 2); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  /// S^{-1} = -Omega S^T Omega.
  SymplecticTransform inverse() const {
    const Eigen::MatrixXd omega = symplectic_form(n_modes());
    return SymplecticTransform(-omega * matrix_.transpose() * omega);
  }

  /// `(*this) * first` applies `first` and then `*this`.
  SymplecticTransform operator*(const SymplecticTransform& first) const {
    if (first.n_modes() != n_modes()) throw std::invalid_argument("symplectic dimension mismatch");
    return SymplecticTransform(matrix_ * first.matrix_);
  }

 private:
  static void check_mode(int n_modes, int mode) {
    if (n_modes < 1) throw std::invalid_argument("n_modes must be positive");
    if (mode < 0 || mode >= n_modes) {
      throw std::out_of_range("mode index " + std::to_string(mode) + " out of range");
    }
  }

  Eigen::MatrixXd matrix_;
};

inline QuadratureState make_vacuum(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("n_modes must be positive");
  return QuadratureState(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

/// Two-mode squeezed vacuum with squeezing parameter r: amplitude
/// correlations and phase anti-correlations, Var(X1 - X2) = Var(Y1 + Y2) = 2 e^{-2r}.
inline QuadratureState make_epr(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("squeezing parameter must be finite and non-negative");
  }
  const double ch = std::cosh(2.0 * r);
  const double sh = std::sinh(2.0 * r);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(4, 4);
  cov.diagonal().setConstant(ch);
  cov(0, 2) = cov(2, 0) = sh;
  cov(1, 3) = cov(3, 1) = -sh;
  return QuadratureState(std::move(cov));
}

/// Block-diagonal combination of two independent states (modes of `a` first).
inline QuadratureState tensor_product(const QuadratureState& a, const QuadratureState& b) {
  const auto da = a.cov().rows();
  const auto db = b.cov().rows();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(da + db, da + db);
  cov.topLeftCorner(da, da) = a.cov();
  cov.bottomRightCorner(db, db) = b.cov();
  return QuadratureState(std::move(cov));
}

inline QuadratureState apply_transform(const QuadratureState& state, const SymplecticTransform& s) {
  if (state.n_modes() != s.n_modes()) {
    throw std::invalid_argument("transform acts on " + std::to_string(s.n_modes()) +
                                " modes but state has " + std::to_string(state.n_modes()));
  }
  const Eigen::MatrixXd out = s.matrix() * state.cov() * s.matrix().transpose();
  return QuadratureState(0.5 * (out + out.transpose()));
}

/// Polarization optics in front of the two homodyne detectors.
///
/// A balanced mixer (the half-wave plate at 22.5 degrees) followed by a pi/2
/// phase shift of the second output (the quarter-wave plate). The composite
/// maps
///   X1' = (X1 - X2)/sqrt2,  Y1' = (Y1 - Y2)/sqrt2,
///   X2' = (Y1 + Y2)/sqrt2,  Y2' = -(X1 + X2)/sqrt2,
/// so an EPR pair leaves as two modes squeezed on the same quadrature X.
inline SymplecticTransform readout_basis_rotation() {
  const auto mixer = SymplecticTransform::beamsplitter(2, 0, 1, std::numbers::pi / 4);
  const auto quarter_wave = SymplecticTransform::phase_rotation(2, 1, std::numbers::pi / 2);
  return quarter_wave * mixer;
}

struct EprVariances {
  double x_difference;  // Var(X_i - X_j)
  double y_sum;         // Var(Y_i + Y_j)
};

inline EprVariances epr_variances(const QuadratureState& state, int i, int j) {
  if (i == j) throw std::invalid_argument("EPR variances need two distinct modes");
  if (i < 0 || j < 0 || i >= state.n_modes() || j >= state.n_modes()) {
    throw std::out_of_range("mode index out of range");
  }
  const auto& v = state.cov();
  const int xi = 2 * i, yi = 2 * i + 1, xj = 2 * j, yj = 2 * j + 1;
  return {v(xi, xi) + v(xj, xj) - 2.0 * v(xi, xj), v(yi, yi) + v(yj, yj) + 2.0 * v(yi, yj)};
}

/// Inseparability (Var(X_i - X_j) + Var(Y_i + Y_j)) / 2. Values below 2
/// witness entanglement.
inline double duan_inseparability(const QuadratureState& state, int i, int j) {
  const auto [dx, sy] = epr_variances(state, i, j);
  return 0.5 * (dx + sy);
}

/// Entanglement of formation (ebits) of a symmetric Gaussian state with
/// inseparability `inseparability`.
///
/// With v = I/2 and c+- = (v^{-1/2} +- v^{1/2})^2 / 4,
/// EoF = c+ log2 c+ - c- log2 c-, and 0 once v >= 1.
inline double eof_symmetric(double inseparability) {
  if (!(inseparability > 0.0) || !std::isfinite(inseparability)) {
    throw std::invalid_argument("inseparability must be positive and finite");
  }
  const double v = 0.5 * inseparability;
  if (v >= 1.0 - 1e-12) return 0.0;
  const double a = 1.0 / std::sqrt(v);
  const double b = std::sqrt(v);
  const double c_plus = 0.25 * (a + b) * (a + b);
  const double c_minus = 0.25 * (a - b) * (a - b);
  return c_plus * std::log2(c_plus) - c_minus * std::log2(c_minus);
}

// Debug serialization: first line "n_modes,<n>", then the 2n rows.

inline void write_covariance_csv(std::ostream& os, const QuadratureState& state) {
  const auto& v = state.cov();
  const auto flags = os.flags();
  os << "n_modes," << state.n_modes() << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      if (c > 0) os << ',';
      os << v(r, c);
    }
    os << '\n';
  }
  os.flags(flags);
}

inline QuadratureState read_covariance_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("n_modes,", 0) != 0) {
    throw std::invalid_argument("covariance CSV must start with 'n_modes,<n>'");
  }
  int n = 0;
  try {
    n = std::stoi(line.substr(8));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad n_modes header: " + line);
  }
  if (n < 1) throw std::invalid_argument("n_modes must be positive");
  Eigen::MatrixXd cov(2 * n, 2 * n);
  for (int r = 0; r < 2 * n; ++r) {
    if (!std::getline(is, line)) throw std::invalid_argument("covariance CSV truncated");
    std::stringstream row(line);
    std::string cell;
    for (int c = 0; c < 2 * n; ++c) {
      if (!std::getline(row, cell, ',')) {
        throw std::invalid_argument("covariance row " + std::to_string(r) + " too short");
      }
      cov(r, c) = std::stod(cell);
    }
  }
  return QuadratureState(std::move(cov));
}

}  // namespace cvmem
