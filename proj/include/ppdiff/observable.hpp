// Copyright 2026 The ppdiff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "ppdiff/atomic_measure.hpp"
#include "ppdiff/test_function.hpp"

#include <algorithm>
#include <vector>

namespace ppdiff {

/// Bounded scalar map g applied to f_phi values: the identity, or
/// clamp(p(Re z), lo, hi) for a real polynomial p (a bounded Lipschitz map
/// on the range of any translation bounded orbit).
template <typename Scalar = double>
class ScalarMap {
 public:
  static ScalarMap identity() { return ScalarMap(); }

  /// coefficients[k] multiplies x^k.
  static ScalarMap clamped_polynomial(std::vector<Scalar> coefficients, Scalar lo, Scalar hi) {
    if (!(lo <= hi)) throw PreconditionError("measure-core", "clamp bounds must satisfy lo <= hi");
    ScalarMap g;
    g.identity_ = false;
    g.coefficients_ = std::move(coefficients);
    g.lo_ = lo;
    g.hi_ = hi;
    return g;
  }

  /// clamp(x, lo, hi)
  static ScalarMap clamp(Scalar lo, Scalar hi) { return clamped_polynomial({Scalar(0), Scalar(1)}, lo, hi); }

  bool is_identity() const { return identity_; }

  Complex<Scalar> operator()(const Complex<Scalar>& z) const {
    if (identity_) return z;
    Scalar p(0);
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) p = p * z.real() + *it;
    return Complex<Scalar>(std::clamp(p, lo_, hi_), Scalar(0));
  }

 private:
  bool identity_ = true;
  std::vector<Scalar> coefficients_;
  Scalar lo_ = Scalar(0), hi_ = Scalar(0);
};

/// Observables on measures of the form c * prod_j g_j(f_{phi_j}(omega)):
/// sampling functions f_phi, composites g o f_phi, finite products, constants.
template <typename Scalar = double>
class Observable {
 public:
  using PointType = Point<Scalar>;

  struct Factor {
    TestFunction<Scalar> phi;
    ScalarMap<Scalar> g;
  };

  static Observable constant(int dim, Complex<Scalar> c) {
    Observable h;
    h.dim_ = dim;
    h.constant_ = c;
    return h;
  }

  /// f_phi
  static Observable sampling(const TestFunction<Scalar>& phi) { return composed(ScalarMap<Scalar>::identity(), phi); }

  /// g o f_phi
  static Observable composed(const ScalarMap<Scalar>& g, const TestFunction<Scalar>& phi) {
    Observable h;
    h.dim_ = phi.dim();
    h.factors_.push_back({phi, g});
    return h;
  }

  Observable operator*(const Observable& o) const {
    if (dim_ != o.dim_) throw PreconditionError("measure-core", "dimension mismatch in observable product");
    Observable h = *this;
    h.constant_ *= o.constant_;
    h.factors_.insert(h.factors_.end(), o.factors_.begin(), o.factors_.end());
    return h;
  }

  int dim() const { return dim_; }
  const std::vector<Factor>& factors() const { return factors_; }
  const Complex<Scalar>& constant_factor() const { return constant_; }

  /// Per-axis distance beyond which atoms cannot influence h(alpha_{-t} omega).
  PointType reach() const {
    PointType r = PointType::Zero(dim_);
    for (const auto& f : factors_) r = r.cwiseMax(f.phi.reach());
    return r;
  }

  /// h(alpha_{-t} omega) = (T^t h)(omega); f_phi(alpha_{-t} omega) = sum_x w_x phi(t - x).
  Complex<Scalar> on_orbit(const AtomicMeasure<Scalar>& omega, const PointType& t) const {
    Complex<Scalar> value = constant_;
    for (const auto& f : factors_) {
      const Box<Scalar> source(t - f.phi.shift(), f.phi.half_widths());
      const auto [first, last] = omega.axis0_range(source.lower(0), source.upper(0));
      Complex<Scalar> s(0);
      for (Eigen::Index i = first; i < last; ++i) s += omega.weight(i) * f.phi(t - omega.position(i));
      value *= f.g(s);
    }
    return value;
  }

  Complex<Scalar> operator()(const AtomicMeasure<Scalar>& omega) const {
    return on_orbit(omega, PointType::Zero(omega.dim()));
  }

  /// Sorted kinks of t -> h(alpha_{-t} omega) along `axis` inside [lo, hi]:
  /// t_axis = x_axis + shift_axis + {-w, 0, w} for every factor and atom.
  std::vector<Scalar> orbit_breakpoints(const AtomicMeasure<Scalar>& omega, int axis, Scalar lo, Scalar hi) const {
    std::vector<Scalar> bp;
    for (const auto& f : factors_) {
      const Scalar c = f.phi.shift()[axis], w = f.phi.half_widths()[axis];
      for (Eigen::Index i = 0; i < omega.size(); ++i) {
        const Scalar x = omega.positions()(axis, i) + c;
        for (const Scalar k : {x - w, x, x + w})
          if (k > lo && k < hi) bp.push_back(k);
      }
    }
    return sorted_unique_values(std::move(bp));
  }

 private:
  static std::vector<Scalar> sorted_unique_values(std::vector<Scalar> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  int dim_ = 1;
  Complex<Scalar> constant_{1};
  std::vector<Factor> factors_;
};

using Observabled = Observable<double>;

}  // namespace ppdiff
