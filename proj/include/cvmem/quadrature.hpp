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

// Numerical integration helpers shared by the spectral, full-model and
// readout code. Adaptive work is delegated to Boost.Math's Gauss-Kronrod
// rule; fixed rules use Boost's Legendre zeros.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "cvmem/errors.hpp"

namespace cvmem::quadrature {

/// Vector-valued integrand sample that Boost's Gauss-Kronrod can accumulate.
///
/// Boost builds its accumulators from the literal 0, so an empty vector acts
/// as the additive identity. `abs` is the max-norm and drives the error test.
class Samples {
 public:
  Samples(int zero = 0) { (void)zero; }  // NOLINT(google-explicit-constructor)
  explicit Samples(Eigen::VectorXd values) : values_(std::move(values)) {}

  const Eigen::VectorXd& values() const { return values_; }

  Samples& operator+=(const Samples& other) {
    if (other.values_.size() == 0) return *this;
    if (values_.size() == 0) {
      values_ = other.values_;
    } else {
      values_ += other.values_;
    }
    return *this;
  }
  friend Samples operator+(Samples a, const Samples& b) { return a += b; }
  friend Samples operator-(Samples a, const Samples& b) {
    if (b.values_.size() == 0) return a;
    if (a.values_.size() == 0) return Samples(Eigen::VectorXd(-b.values_));
    a.values_ -= b.values_;
    return a;
  }
  friend Samples operator-(Samples a) {
    a.values_ = -a.values_;
    return a;
  }
  friend Samples operator*(Samples a, double w) {
    a.values_ *= w;
    return a;
  }
  friend Samples operator*(double w, Samples a) { return a * w; }
  friend double abs(const Samples& s) {
    return s.values_.size() == 0 ? 0.0 : s.values_.cwiseAbs().maxCoeff();
  }

 private:
  Eigen::VectorXd values_;
};

inline constexpr unsigned kMaxDepth = 20;

/// Adaptive Gauss-Kronrod (31 points) of a scalar or `Samples` integrand on
/// a finite interval. Throws NumericalError when the error estimate exceeds
/// `rel_tol` times the L1 norm of the integrand by more than a factor 10.
template <class F>
auto integrate(F&& f, double a, double b, double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  double error = 0.0;
  double l1 = 0.0;
  auto result = gauss_kronrod<double, 31>::integrate(f, a, b, kMaxDepth, rel_tol, &error, &l1);
  if (!(error <= 10.0 * rel_tol * l1 + 1e-300)) {
    std::ostringstream msg;
    msg << "adaptive quadrature on [" << a << ", " << b << "] did not converge (error " << error
        << ", L1 " << l1 << ", tolerance " << rel_tol << ")";
    throw NumericalError(msg.str());
  }
  return result;
}

/// Integral over the whole real line of an integrand decaying at least like
/// 1/w^2.
///
/// The line is cut at +-`breakpoints` (resonance positions) into finite
/// panels; each tail beyond the outermost cut uses w = w_max + scale * tan(t),
/// which turns Lorentzian decay into a bounded integrand.
template <class F>
auto integrate_real_line(F&& f, std::vector<double> breakpoints, double scale, double rel_tol) {
  if (!(scale > 0.0)) throw std::invalid_argument("integration scale must be positive");
  for (double& b : breakpoints) b = std::abs(b);
  breakpoints.push_back(0.0);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end(),
                                [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, y); }),
                    breakpoints.end());

  using Result = decltype(f(0.0));
  Result total = 0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    total += integrate(f, breakpoints[k], breakpoints[k + 1], rel_tol);
    total += integrate(f, -breakpoints[k + 1], -breakpoints[k], rel_tol);
  }
  const double edge = breakpoints.back();
  const double half_pi = 0.5 * std::numbers::pi;
  auto tail = [&](double sign) {
    return [&, sign](double t) -> Result {
      if (t >= half_pi) return Result(0);
      const double c = std::cos(t);
      const double w = edge + scale * std::tan(t);
      return f(sign * w) * (scale / (c * c));
    };
  };
  total += integrate(tail(1.0), 0.0, half_pi, rel_tol);
  total += integrate(tail(-1.0), 0.0, half_pi, rel_tol);
  return total;
}

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
inline Rule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  Rule rule;
  auto add = [&](double x) {
    const double dp = boost::math::legendre_p_prime(n, x);
    rule.nodes.push_back(x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  };
  // Boost returns the non-negative zeros in ascending order; zero itself is
  // included for odd n.
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it != 0.0) add(-*it);
  }
  for (double z : zeros) add(z);
  return rule;
}

/// Composite rule on [a, b]: `panels` equal panels of `per_panel` nodes each.
inline Rule composite_gauss_legendre(double a, double b, int panels, int per_panel) {
  if (panels < 1) throw std::invalid_argument("need at least one panel");
  const Rule base = gauss_legendre(per_panel);
  Rule rule;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      rule.nodes.push_back(lo + 0.5 * width * (base.nodes[i] + 1.0));
      rule.weights.push_back(0.5 * width * base.weights[i]);
    }
  }
  return rule;
}

}  // namespace cvmem::quadrature
