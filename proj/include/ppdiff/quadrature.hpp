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

#include "ppdiff/box.hpp"
#include "ppdiff/core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ppdiff {

/// Gauss-Legendre rule on [-1, 1] from the Golub-Welsch eigenproblem.
template <typename Scalar>
struct GaussLegendre {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;

  explicit GaussLegendre(int order) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> jacobi =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(order, order);
    for (int k = 1; k < order; ++k) {
      const Scalar b = Scalar(k) / std::sqrt(Scalar(4 * k * k - 1));
      jacobi(k, k - 1) = b;
      jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<decltype(jacobi)> solver(jacobi);
    nodes = solver.eigenvalues();
    weights = Scalar(2) * solver.eigenvectors().row(0).transpose().cwiseAbs2();
  }

  static const GaussLegendre& get() {
    static const GaussLegendre rule(8);
    return rule;
  }
};

namespace internal {

template <typename Scalar, typename F>
auto gauss_panel(const F& f, Scalar a, Scalar b) {
  const auto& rule = GaussLegendre<Scalar>::get();
  const Scalar mid = (a + b) / Scalar(2), half = (b - a) / Scalar(2);
  decltype(f(a)) sum(0);
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

template <typename Scalar, typename F, typename Value>
Value adaptive_panel(const F& f, Scalar a, Scalar b, Value whole, Scalar tol, int depth) {
  const Scalar m = (a + b) / Scalar(2);
  const Value left = gauss_panel(f, a, m);
  const Value right = gauss_panel(f, m, b);
  const Value refined = left + right;
  const Scalar diff = std::abs(refined - whole);
  if (depth <= 0 || diff <= tol || diff <= Scalar(64) * std::numeric_limits<Scalar>::epsilon() * std::abs(refined))
    return refined;
  return adaptive_panel(f, a, m, left, tol / Scalar(2), depth - 1) +
         adaptive_panel(f, m, b, right, tol / Scalar(2), depth - 1);
}

}  // namespace internal

/// Integral of f over [a, b], split at the given breakpoints. Each panel runs
/// an 8-point Gauss-Legendre rule with bisection until two levels agree to
/// the panel's share of `tol`; polynomial pieces of degree <= 15 are exact
/// on the first pass.
template <typename Scalar, typename F>
auto integrate_1d(const F& f, Scalar a, Scalar b, const std::vector<Scalar>& breakpoints, Scalar tol) {
  using Value = decltype(f(a));
  Value total(0);
  if (!(b > a)) return total;
  std::vector<Scalar> cuts{a};
  auto first = std::upper_bound(breakpoints.begin(), breakpoints.end(), a);
  for (auto it = first; it != breakpoints.end() && *it < b; ++it) cuts.push_back(*it);
  cuts.push_back(b);
  const Scalar length = b - a;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const Scalar lo = cuts[k], hi = cuts[k + 1];
    if (!(hi > lo)) continue;
    const Value whole = internal::gauss_panel(f, lo, hi);
    total += internal::adaptive_panel(f, lo, hi, whole, tol * (hi - lo) / length, 30);
  }
  return total;
}

/// Integral of f over a box (d <= 2) with per-axis breakpoint lists, as an
/// iterated integral.
template <typename Scalar, typename F>
auto integrate_box(const F& f, const Box<Scalar>& box, const std::vector<std::vector<Scalar>>& breakpoints,
                   Scalar tol) {
  if (box.dim() == 1) {
    Point<Scalar> x(1);
    auto g = [&](Scalar s) {
      x[0] = s;
      return f(x);
    };
    return integrate_1d(g, box.lower(0), box.upper(0), breakpoints[0], tol);
  }
  auto outer = [&](Scalar y) {
    auto inner = [&](Scalar x) {
      Point<Scalar> p(2);
      p << x, y;
      return f(p);
    };
    return integrate_1d(inner, box.lower(0), box.upper(0), breakpoints[0], tol / std::max(box.diameter(1), Scalar(1)));
  };
  return integrate_1d(outer, box.lower(1), box.upper(1), breakpoints[1], tol);
}

/// Sorted, de-duplicated copy.
template <typename Scalar>
std::vector<Scalar> sorted_unique(std::vector<Scalar> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace ppdiff
