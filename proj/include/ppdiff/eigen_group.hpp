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

#include "ppdiff/diffraction.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <vector>

namespace ppdiff {

/// Finitely generated subgroup of R^d spanned by tolerance-reduced Bragg
/// frequencies, with membership up to a coefficient bound.
template <typename Scalar = double>
class EigenvalueGroup {
 public:
  EigenvalueGroup(int dim, Scalar tolerance, int coefficient_bound)
      : dim_(dim), tolerance_(tolerance), bound_(coefficient_bound) {}

  int dim() const { return dim_; }
  const std::vector<Character<Scalar>>& basis() const { return basis_; }
  Scalar tolerance() const { return tolerance_; }
  int coefficient_bound() const { return bound_; }

  /// Integer coefficients with |c_i| <= bound and |sum c_i b_i - lambda| <= tolerance, if any.
  std::optional<std::vector<long>> coefficients(const Character<Scalar>& lambda) const {
    if (lambda.cwiseAbs().maxCoeff() <= tolerance_) return std::vector<long>(basis_.size(), 0);
    const auto k = basis_.size();
    if (k == 0) return std::nullopt;
    // Free coefficients on the first k - r generators, a linear solve for the rest.
    const std::size_t r = std::min<std::size_t>(k, static_cast<std::size_t>(dim_));
    const std::size_t free = k - r;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> tail(dim_, static_cast<Eigen::Index>(r));
    for (std::size_t j = 0; j < r; ++j) tail.col(static_cast<Eigen::Index>(j)) = basis_[free + j];
    const auto solver = tail.colPivHouseholderQr();
    std::vector<long> c(k, -bound_);
    while (true) {
      Character<Scalar> rest = lambda;
      for (std::size_t j = 0; j < free; ++j) rest -= Scalar(c[j]) * basis_[j];
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x = solver.solve(rest);
      bool ok = true;
      Character<Scalar> fit = Character<Scalar>::Zero(dim_);
      for (std::size_t j = 0; j < r; ++j) {
        const Scalar v = std::round(x[static_cast<Eigen::Index>(j)]);
        if (std::abs(v) > Scalar(bound_)) ok = false;
        c[free + j] = static_cast<long>(v);
        fit += v * basis_[free + j];
      }
      if (ok && (rest - fit).cwiseAbs().maxCoeff() <= tolerance_) return c;
      std::size_t j = 0;
      while (j < free && c[j] == bound_) c[j++] = -bound_;
      if (j == free) return std::nullopt;
      ++c[j];
    }
  }

  bool contains(const Character<Scalar>& lambda) const { return coefficients(lambda).has_value(); }

  /// Adds lambda: ignored if already a member, merged with a generator it is
  /// commensurate with, appended otherwise.
  void add(const Character<Scalar>& lambda) {
    if (contains(lambda)) return;
    for (auto& b : basis_) {
      if (auto g = common_generator(b, lambda)) {
        b = *g;
        return;
      }
    }
    basis_.push_back(lambda);
  }

 private:
  /// Tolerance Euclid on collinear a, b: the generator g with a, b in gZ
  /// (coefficients within bound), if any.
  std::optional<Character<Scalar>> common_generator(const Character<Scalar>& a, const Character<Scalar>& b) const {
    const Eigen::Index axis = [&] {
      Eigen::Index i;
      a.cwiseAbs().maxCoeff(&i);
      return i;
    }();
    if (std::abs(a[axis]) <= tolerance_) return std::nullopt;
    const Scalar ratio = b[axis] / a[axis];
    if ((b - ratio * a).cwiseAbs().maxCoeff() > tolerance_) return std::nullopt;
    // Euclid on the scalars x = 1, y = ratio tracking x = p0 a, y = p1 a.
    Scalar x = a[axis], y = b[axis];
    long xa = 1, xb = 0, ya = 0, yb = 1;  // x = xa a + xb b, y = ya a + yb b
    for (int iter = 0; iter < 64; ++iter) {
      if (std::abs(y) <= tolerance_) {
        Character<Scalar> g = Scalar(xa) * a + Scalar(xb) * b;
        if (g[axis] < Scalar(0)) g = -g;
        for (const auto& v : {a, b}) {
          const Scalar q = std::round(v[axis] / g[axis]);
          if (std::abs(q) > Scalar(bound_) || (v - q * g).cwiseAbs().maxCoeff() > tolerance_) return std::nullopt;
        }
        return g;
      }
      const Scalar q = std::round(x / y);
      const Scalar rem = x - q * y;
      const long qa = xa - static_cast<long>(q) * ya, qb = xb - static_cast<long>(q) * yb;
      if (std::abs(qa) > bound_ || std::abs(qb) > bound_) return std::nullopt;
      x = y;
      xa = ya;
      xb = yb;
      y = rem;
      ya = qa;
      yb = qb;
    }
    return std::nullopt;
  }

  int dim_;
  Scalar tolerance_;
  int bound_;
  std::vector<Character<Scalar>> basis_;
};

/// Group generated by the refined Bragg peaks of `peaks`, strongest first.
template <typename Scalar>
EigenvalueGroup<Scalar> eigenvalue_group(const PeakList<Scalar>& peaks, Scalar tolerance = Scalar(kFrequencyTolerance),
                                         int coefficient_bound = 50) {
  auto bragg = peaks.bragg();
  std::erase_if(bragg, [](const auto& p) { return !p.refined; });
  if (bragg.empty()) throw PreconditionError("diffraction", "eigenvalue group needs at least one refined bragg peak");
  std::stable_sort(bragg.begin(), bragg.end(), [](const auto& a, const auto& b) { return a.intensity > b.intensity; });
  EigenvalueGroup<Scalar> group(bragg.front().frequency.size(), tolerance, coefficient_bound);
  for (const auto& p : bragg) group.add(p.frequency);
  return group;
}

/// Same, from bare frequencies in the given order.
template <typename Scalar>
EigenvalueGroup<Scalar> eigenvalue_group(const std::vector<Character<Scalar>>& frequencies,
                                         Scalar tolerance = Scalar(kFrequencyTolerance), int coefficient_bound = 50) {
  if (frequencies.empty()) throw PreconditionError("diffraction", "eigenvalue group needs at least one frequency");
  EigenvalueGroup<Scalar> group(static_cast<int>(frequencies.front().size()), tolerance, coefficient_bound);
  for (const auto& f : frequencies) group.add(f);
  return group;
}

}  // namespace ppdiff
