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

// Linearized three-level cavity model and its exact steady-state covariance.
//
// Level scheme (Lambda): ground states |1>, |2>, excited |3>. The control
// field drives |1> <-> |3>, so optical pumping leaves every atom in |2>; the
// cavity (probe) mode couples the populated transition |2> <-> |3>. Around
// that steady state the collective operators
//
//   b = sum |2><1| / sqrt(N)   (ground-state coherence, i.e. the spin)
//   c = sum |2><3| / sqrt(N)   (optical coherence)
//   a                          (intracavity probe field)
//
// are bosonic to first order and evolve as
//
//   db/dt = -(gamma0 + i delta) b + i Omega c             + F_b
//   dc/dt = -(gamma + i Delta) c + i Omega b + i G a      + F_c
//   da/dt = -kappa a + i G c + sqrt(2 kappa) a_in
//
// with collective coupling G^2 = 2 kappa gamma C and vacuum Langevin forces
// <F_b F_b^dag> = 2 gamma0, <F_c F_c^dag> = 2 gamma. The output field is
// a_out = sqrt(2 kappa) a - a_in.
//
// The variable vector is z = (b, c, a, b^dag, c^dag, a^dag) and covariances
// are V_ij = <{z_i, z_j^dag}>/2. Quadratures X = z + z^dag, Y = i(z^dag - z)
// follow the gaussian.hpp conventions, so the spin quadrature X_b has
// variance 1 in a coherent spin state: Var(X_b) = Var(J_x) / (N/4).

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cvmem/errors.hpp"
#include "cvmem/gaussian.hpp"
#include "cvmem/params.hpp"
#include "cvmem/quadrature.hpp"

namespace cvmem {

using Eigen::Matrix2cd;
using Eigen::Matrix2d;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using cdouble = std::complex<double>;

/// Symmetrized spectral density matrix of the input quadratures (X_in, Y_in)
/// as a function of frequency. Vacuum is the identity.
using InputSpectrum = std::function<Matrix2d(double)>;

namespace detail {

/// (z, z^dag) -> (X, Y) for one mode.
inline Matrix2cd quadrature_block() {
  Matrix2cd q;
  q << 1.0, 1.0, cdouble(0, -1), cdouble(0, 1);
  return q;
}

/// Converts a quadrature spectral matrix into the (z, z^dag) representation.
inline Matrix2cd to_ladder(const Matrix2d& quadrature) {
  const Matrix2cd q_inv = quadrature_block().inverse();
  return q_inv * quadrature.cast<cdouble>() * q_inv.adjoint();
}

inline Matrix2d to_quadrature(const Matrix2cd& ladder) {
  const Matrix2cd q = quadrature_block();
  return (q * ladder * q.adjoint()).real();
}

inline void check_input_spectrum(const Matrix2d& s) {
  if (!s.allFinite() || std::abs(s(0, 1) - s(1, 0)) > 1e-12 * std::max(1.0, s.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("input spectrum must be a finite symmetric 2x2 matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix2d> es(s);
  if (es.eigenvalues().minCoeff() < -1e-12) {
    throw std::invalid_argument("input spectrum must be positive semidefinite");
  }
}

}  // namespace detail

/// Linear Heisenberg-Langevin system dz/dt = M z + B u + noise with a single
/// input field u = (a_in, a_in^dag).
class LinearQuantumSystem {
 public:
  LinearQuantumSystem(MatrixXcd drift, MatrixXcd input_coupling, MatrixXcd diffusion,
                      MatrixXcd output_system, MatrixXcd output_input, std::vector<std::string> labels)
      : drift_(std::move(drift)),
        input_coupling_(std::move(input_coupling)),
        diffusion_(std::move(diffusion)),
        output_system_(std::move(output_system)),
        output_input_(std::move(output_input)),
        labels_(std::move(labels)) {
    const auto d = drift_.rows();
    if (d == 0 || d % 2 != 0 || drift_.cols() != d) throw std::invalid_argument("drift must be 2n x 2n");
    if (input_coupling_.rows() != d || input_coupling_.cols() != 2) {
      throw std::invalid_argument("input coupling must be dim x 2");
    }
    if (diffusion_.rows() != d || diffusion_.cols() != d) throw std::invalid_argument("diffusion must be dim x dim");
    if (output_system_.rows() != 2 || output_system_.cols() != d || output_input_.rows() != 2 ||
        output_input_.cols() != 2) {
      throw std::invalid_argument("output map has wrong shape");
    }
    if (static_cast<Eigen::Index>(labels_.size()) != d) throw std::invalid_argument("need one label per variable");

    Eigen::ComplexEigenSolver<MatrixXcd> es(drift_, false);
    eigenvalues_ = es.eigenvalues();
    for (Eigen::Index i = 0; i < d; ++i) {
      if (!(eigenvalues_[i].real() < 0.0)) {
        std::ostringstream msg;
        msg << "unstable drift: eigenvalue " << eigenvalues_[i] << " has non-negative real part";
        throw NumericalError(msg.str());
      }
    }
    if ((diffusion_ - diffusion_.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, diffusion_.cwiseAbs().maxCoeff())) {
      throw std::invalid_argument("diffusion must be Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> ds(diffusion_, Eigen::EigenvaluesOnly);
    if (ds.eigenvalues().minCoeff() < -1e-9) throw std::invalid_argument("diffusion must be positive semidefinite");
  }

  int dim() const { return static_cast<int>(drift_.rows()); }
  int modes() const { return dim() / 2; }
  const MatrixXcd& drift() const { return drift_; }
  const MatrixXcd& input_coupling() const { return input_coupling_; }
  const MatrixXcd& diffusion() const { return diffusion_; }
  const MatrixXcd& output_system() const { return output_system_; }
  const MatrixXcd& output_input() const { return output_input_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Eigen::VectorXcd& eigenvalues() const { return eigenvalues_; }

  /// Total noise source for a given input spectrum: Langevin diffusion plus
  /// the driven input.
  MatrixXcd total_diffusion(const Matrix2d& input_quadrature_spectrum) const {
    detail::check_input_spectrum(input_quadrature_spectrum);
    return diffusion_ + input_coupling_ * detail::to_ladder(input_quadrature_spectrum) * input_coupling_.adjoint();
  }

  /// (z_1..z_n, z_1^dag..z_n^dag) -> (X_1, Y_1, ..., X_n, Y_n).
  MatrixXcd quadrature_map() const {
    const int n = modes();
    MatrixXcd q = MatrixXcd::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
      q(2 * k, k) = 1.0;
      q(2 * k, k + n) = 1.0;
      q(2 * k + 1, k) = cdouble(0, -1);
      q(2 * k + 1, k + n) = cdouble(0, 1);
    }
    return q;
  }

 private:
  MatrixXcd drift_;
  MatrixXcd input_coupling_;
  MatrixXcd diffusion_;
  MatrixXcd output_system_;
  MatrixXcd output_input_;
  std::vector<std::string> labels_;
  Eigen::VectorXcd eigenvalues_;
};

/// Steady-state covariance in both representations.
struct SystemCovariance {
  MatrixXcd ladder;     // <{z_i, z_j^dag}>/2
  MatrixXd quadrature;  // interleaved (X_1, Y_1, X_2, Y_2, ...)

  double spin_variance_x() const { return quadrature(0, 0); }
  double spin_variance_y() const { return quadrature(1, 1); }
  QuadratureState state() const { return QuadratureState(quadrature); }
};

namespace detail {

inline SystemCovariance finish_covariance(const LinearQuantumSystem& sys, MatrixXcd v) {
  v = (0.5 * (v + v.adjoint())).eval();
  const MatrixXcd q = sys.quadrature_map();
  MatrixXd vq = (q * v * q.adjoint()).real();
  vq = (0.5 * (vq + vq.transpose())).eval();
  return {std::move(v), std::move(vq)};
}

}  // namespace detail

/// Solves M V + V M^dag + D = 0 by vectorization:
/// (I (x) M + conj(M) (x) I) vec(V) = -vec(D).
inline MatrixXcd solve_lyapunov(const MatrixXcd& m, const MatrixXcd& d) {
  const auto n = m.rows();
  const auto n2 = n * n;
  MatrixXcd op = MatrixXcd::Zero(n2, n2);
  const MatrixXcd mc = m.conjugate();
  for (Eigen::Index j = 0; j < n; ++j) {
    // Column j of V occupies entries j*n .. j*n+n-1 of vec(V).
    op.block(j * n, j * n, n, n) += m;
    for (Eigen::Index k = 0; k < n; ++k) {
      op.block(j * n, k * n, n, n).diagonal().array() += mc(j, k);
    }
  }
  Eigen::PartialPivLU<MatrixXcd> lu(op);
  if (!(lu.rcond() > 1e-14)) {
    throw NumericalError("singular Lyapunov system (degenerate drift)");
  }
  const Eigen::VectorXcd rhs = -Eigen::Map<const Eigen::VectorXcd>(d.data(), n2);
  const Eigen::VectorXcd x = lu.solve(rhs);
  MatrixXcd v = Eigen::Map<const MatrixXcd>(x.data(), n, n);
  const double residual = (m * v + v * m.adjoint() + d).cwiseAbs().maxCoeff();
  if (residual > 1e-10 * std::max(d.cwiseAbs().maxCoeff(), 1e-300)) {
    std::ostringstream msg;
    msg << "Lyapunov residual " << residual << " exceeds 1e-10 * |D|";
    throw NumericalError(msg.str());
  }
  return v;
}

/// Steady-state covariance for white (flat) input noise.
inline SystemCovariance steady_covariance(const LinearQuantumSystem& sys,
                                          const Matrix2d& input_spectrum = Matrix2d::Identity()) {
  return detail::finish_covariance(sys, solve_lyapunov(sys.drift(), sys.total_diffusion(input_spectrum)));
}

/// Steady-state covariance from the frequency domain,
/// V = int dw/2pi H(w) D(w) H(w)^dag with H(w) = (-i w - M)^{-1}.
/// Handles colored inputs; for flat inputs it is an independent route to
/// the Lyapunov solution.
inline SystemCovariance steady_covariance_spectral(const LinearQuantumSystem& sys, const InputSpectrum& input,
                                                   double rel_tol = 1e-8) {
  const int d = sys.dim();
  const auto& m = sys.drift();
  std::vector<double> breakpoints;
  double fastest = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    breakpoints.push_back(sys.eigenvalues()[i].imag());
    fastest = std::max(fastest, std::abs(sys.eigenvalues()[i]));
  }
  // Upper triangle (real and imaginary parts) of the Hermitian integrand.
  const int entries = d * (d + 1) / 2;
  auto integrand = [&](double w) {
    const MatrixXcd resolvent = (cdouble(0, -w) * MatrixXcd::Identity(d, d) - m).inverse();
    const MatrixXcd noise = sys.total_diffusion(input(w));
    const MatrixXcd s = resolvent * noise * resolvent.adjoint();
    Eigen::VectorXd packed(2 * entries);
    int k = 0;
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j, ++k) {
        packed[2 * k] = s(i, j).real();
        packed[2 * k + 1] = s(i, j).imag();
      }
    }
    return quadrature::Samples(std::move(packed));
  };
  // Panels end on the resonance frequencies; the tails use the largest rate.
  const auto total = quadrature::integrate_real_line(integrand, breakpoints, fastest, rel_tol);
  const Eigen::VectorXd& packed = total.values();
  MatrixXcd v(d, d);
  int k = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j, ++k) {
      const cdouble x(packed[2 * k], packed[2 * k + 1]);
      v(i, j) = x / (2.0 * std::numbers::pi);
      v(j, i) = std::conj(v(i, j));
    }
  }
  return detail::finish_covariance(sys, std::move(v));
}

/// Symmetrized spectral matrix of the output quadratures at frequency w.
inline Matrix2d output_field_spectrum(const LinearQuantumSystem& sys, const InputSpectrum& input, double omega) {
  const int d = sys.dim();
  const MatrixXcd resolvent =
      (cdouble(0, -omega) * MatrixXcd::Identity(d, d) - sys.drift()).inverse();
  const MatrixXcd through_system = sys.output_system() * resolvent;
  const MatrixXcd from_input = through_system * sys.input_coupling() + sys.output_input();
  const Matrix2d s_in = input(omega);
  detail::check_input_spectrum(s_in);
  const Matrix2cd out = from_input * detail::to_ladder(s_in) * from_input.adjoint() +
                        through_system * sys.diffusion() * through_system.adjoint();
  Matrix2d q = detail::to_quadrature(out);
  return 0.5 * (q + q.transpose());
}

inline Matrix2d output_field_spectrum(const LinearQuantumSystem& sys, const Matrix2d& flat_input, double omega) {
  return output_field_spectrum(sys, [&](double) { return flat_input; }, omega);
}

/// Collective coupling G with G^2 = 2 kappa gamma C, the normalization under
/// which adiabatic elimination reproduces the reduced-model rates.
inline double collective_coupling(const EnsembleParams& p) {
  return std::sqrt(2.0 * p.kappa * p.gamma * p.cooperativity());
}

/// Builds the linearized cavity + ensemble system. EIT operation uses
/// one_photon_detuning = two_photon_detuning = 0.
inline LinearQuantumSystem build_three_level_system(const EnsembleParams& p, double one_photon_detuning = 0.0,
                                                    double two_photon_detuning = 0.0) {
  p.validate();
  const double g_coll = collective_coupling(p);
  const double omega = p.control_rabi;
  const cdouble i(0, 1);
  Eigen::Matrix3cd k;
  k << -(p.gamma0 + i * two_photon_detuning), i * omega, 0.0,
       i * omega, -(p.gamma + i * one_photon_detuning), i * g_coll,
       0.0, i * g_coll, -p.kappa;

  MatrixXcd drift = MatrixXcd::Zero(6, 6);
  drift.topLeftCorner(3, 3) = k;
  drift.bottomRightCorner(3, 3) = k.conjugate();

  MatrixXcd diffusion = MatrixXcd::Zero(6, 6);
  diffusion(0, 0) = diffusion(3, 3) = p.gamma0;
  diffusion(1, 1) = diffusion(4, 4) = p.gamma;

  const double port = std::sqrt(2.0 * p.kappa);
  MatrixXcd input = MatrixXcd::Zero(6, 2);
  input(2, 0) = port;
  input(5, 1) = port;

  MatrixXcd out_sys = MatrixXcd::Zero(2, 6);
  out_sys(0, 2) = port;
  out_sys(1, 5) = port;
  const MatrixXcd out_in = -MatrixXcd::Identity(2, 2);

  std::vector<std::string> labels = {"spin", "optical_coherence", "cavity",
                                     "spin_dag", "optical_coherence_dag", "cavity_dag"};
  return LinearQuantumSystem(std::move(drift), std::move(input), std::move(diffusion), std::move(out_sys),
                             out_in, std::move(labels));
}

/// Detuning used for a parameter set: zero for EIT, the Raman detuning
/// otherwise.
inline double scheme_detuning(const EnsembleParams& p) {
  return p.scheme == PumpingScheme::Raman ? p.raman_detuning : 0.0;
}

/// Reduced-model rates recovered by eliminating the optical coherence and the
/// cavity mode at zero frequency (Schur complement of the drift).
struct AdiabaticReduction {
  double gamma_tilde0 = 0.0;
  double beta = 0.0;
  double diffusion = 0.0;  // spin units, per component per ensemble
};

inline AdiabaticReduction adiabatic_reduction(const LinearQuantumSystem& sys, double atom_number) {
  const int n = sys.modes();
  const MatrixXcd k = sys.drift().topLeftCorner(n, n);
  const MatrixXcd k_sf = k.block(0, 1, 1, n - 1);
  const MatrixXcd k_ff = k.block(1, 1, n - 1, n - 1);
  const MatrixXcd k_fs = k.block(1, 0, n - 1, 1);
  const MatrixXcd elim = -k_sf * k_ff.inverse();  // 1 x (n-1)
  const cdouble k_eff = k(0, 0) + (elim * k_fs)(0, 0);
  const cdouble b_eff = sys.input_coupling()(0, 0) + (elim * sys.input_coupling().block(1, 0, n - 1, 1))(0, 0);
  MatrixXcd l(1, n);
  l(0, 0) = 1.0;
  l.block(0, 1, 1, n - 1) = elim;
  const double d_eff = (l * sys.diffusion().topLeftCorner(n, n) * l.adjoint())(0, 0).real();

  AdiabaticReduction r;
  r.gamma_tilde0 = -k_eff.real();
  // J_x = sqrt(N) X_b / 2, and the ladder input enters X_in with the same gain.
  r.beta = 0.5 * std::sqrt(atom_number) * std::abs(b_eff);
  // S_{F + F^dag} = 2 d_eff in X_b units; J_x carries a factor N/4.
  r.diffusion = 0.5 * atom_number * d_eff;
  return r;
}

struct FullMappingResult {
  double i_at = 2.0;
  double v_minus = 1.0;
  double v_plus = 1.0;
};

/// Atomic inseparability from the full model with symmetric broadband EPR
/// input of inseparability `field_inseparability`.
///
/// The two identical cavities decouple into the combinations
/// (a_1 -+ a_2)/sqrt2. The minus mode carries X1 - X2 with density I_f/2 in
/// X and the conjugate 2/I_f in Y (minimum uncertainty, as for a two-mode
/// squeezed source); the plus mode is the mirror image. Each combination is
/// one single-cavity solve.
inline FullMappingResult full_map_inseparability(const EnsembleParams& p, double field_inseparability) {
  if (!(field_inseparability > 0.0) || !std::isfinite(field_inseparability)) {
    throw std::invalid_argument("field inseparability must be positive");
  }
  const auto sys = build_three_level_system(p, scheme_detuning(p), 0.0);
  const double s = 0.5 * field_inseparability;
  Matrix2d minus_input = Matrix2d::Zero();
  minus_input(0, 0) = s;
  minus_input(1, 1) = 1.0 / s;
  Matrix2d plus_input = Matrix2d::Zero();
  plus_input(0, 0) = 1.0 / s;
  plus_input(1, 1) = s;
  FullMappingResult r;
  r.v_minus = steady_covariance(sys, minus_input).spin_variance_x();
  r.v_plus = steady_covariance(sys, plus_input).spin_variance_y();
  r.i_at = r.v_minus + r.v_plus;
  return r;
}

}  // namespace cvmem
