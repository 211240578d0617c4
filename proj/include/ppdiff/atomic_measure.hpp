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

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace ppdiff {

template <typename Scalar = double>
struct Atom {
  Point<Scalar> position;
  Complex<Scalar> weight;
};

/// Finite weighted Dirac comb sum_x w_x delta_x on R^d.
///
/// Atoms are kept sorted lexicographically by position and are pairwise
/// further apart than the merge tolerance (max-norm). Positions live in the
/// columns of a d x N matrix, weights in a length-N complex vector.
template <typename Scalar = double>
class AtomicMeasure {
 public:
  using Real = Scalar;
  using ComplexType = Complex<Scalar>;
  using PointType = Point<Scalar>;
  using PositionMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using WeightVector = Eigen::Matrix<ComplexType, Eigen::Dynamic, 1>;

  explicit AtomicMeasure(int dim = 1) : dim_(dim), positions_(dim, 0), weights_(0) {
    check_dim(dim);
  }

  /// Sorts and merges atoms within merge_tol of each other (weights add,
  /// the lexicographically first position is kept).
  AtomicMeasure(int dim, std::vector<Atom<Scalar>> atoms, Scalar merge_tol = Scalar(kMergeTolerance))
      : dim_(dim) {
    check_dim(dim);
    for (const auto& a : atoms)
      if (a.position.size() != dim)
        throw PreconditionError("measure-core", "atom dimension differs from measure dimension");
    std::sort(atoms.begin(), atoms.end(),
              [](const auto& a, const auto& b) { return lex_less<Scalar>(a.position, b.position); });

    std::vector<char> merged(atoms.size(), 0);
    std::vector<Atom<Scalar>> out;
    out.reserve(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (merged[i]) continue;
      Atom<Scalar> acc = atoms[i];
      for (std::size_t j = i + 1; j < atoms.size(); ++j) {
        if (atoms[j].position[0] - atoms[i].position[0] > merge_tol) break;
        if (merged[j]) continue;
        if ((atoms[j].position - atoms[i].position).cwiseAbs().maxCoeff() <= merge_tol) {
          acc.weight += atoms[j].weight;
          merged[j] = 1;
        }
      }
      out.push_back(std::move(acc));
    }
    assign(out);
  }

  static AtomicMeasure dirac(const PointType& x, ComplexType w = ComplexType(1)) {
    return AtomicMeasure(static_cast<int>(x.size()), {{x, w}});
  }

  int dim() const { return dim_; }
  Eigen::Index size() const { return weights_.size(); }
  bool empty() const { return size() == 0; }

  const PositionMatrix& positions() const { return positions_; }
  const WeightVector& weights() const { return weights_; }
  PointType position(Eigen::Index i) const { return positions_.col(i); }
  const ComplexType& weight(Eigen::Index i) const { return weights_[i]; }

  std::vector<Atom<Scalar>> atoms() const {
    std::vector<Atom<Scalar>> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (Eigen::Index i = 0; i < size(); ++i) out.push_back({position(i), weight(i)});
    return out;
  }

  /// Sum of |w_x|.
  Scalar total_variation() const { return weights_.cwiseAbs().sum(); }

  /// Index range [first, last) of atoms whose first coordinate lies in [lo, hi].
  std::pair<Eigen::Index, Eigen::Index> axis0_range(Scalar lo, Scalar hi) const {
    const Scalar* begin = positions_.data();
    const auto n = size();
    auto at = [&](Eigen::Index i) { return begin[i * dim_]; };
    Eigen::Index a = 0, b = n;
    while (a < b) {
      const Eigen::Index m = (a + b) / 2;
      if (at(m) < lo) a = m + 1; else b = m;
    }
    const Eigen::Index first = a;
    b = n;
    while (a < b) {
      const Eigen::Index m = (a + b) / 2;
      if (at(m) <= hi) a = m + 1; else b = m;
    }
    return {first, a};
  }

  /// Weight of the atom within tol of x, or 0.
  ComplexType weight_at(const PointType& x, Scalar tol = Scalar(kMergeTolerance)) const {
    const auto [first, last] = axis0_range(x[0] - tol, x[0] + tol);
    for (Eigen::Index i = first; i < last; ++i)
      if ((position(i) - x).cwiseAbs().maxCoeff() <= tol) return weight(i);
    return ComplexType(0);
  }

  /// Atom-for-atom comparison with position and weight tolerances.
  bool approx_equal(const AtomicMeasure& o, Scalar pos_tol = Scalar(kMergeTolerance),
                    Scalar weight_tol = Scalar(1e-12)) const {
    if (dim_ != o.dim_ || size() != o.size()) return false;
    for (Eigen::Index i = 0; i < size(); ++i) {
      if ((position(i) - o.position(i)).cwiseAbs().maxCoeff() > pos_tol) return false;
      if (std::abs(weight(i) - o.weight(i)) > weight_tol) return false;
    }
    return true;
  }

  bool operator==(const AtomicMeasure& o) const {
    return dim_ == o.dim_ && positions_ == o.positions_ && weights_ == o.weights_;
  }

 private:
  static void check_dim(int dim) {
    if (dim < 1 || dim > 2) throw PreconditionError("measure-core", "dimension must be 1 or 2");
  }

  void assign(const std::vector<Atom<Scalar>>& atoms) {
    const auto n = static_cast<Eigen::Index>(atoms.size());
    positions_.resize(dim_, n);
    weights_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      positions_.col(i) = atoms[static_cast<std::size_t>(i)].position;
      weights_[i] = atoms[static_cast<std::size_t>(i)].weight;
    }
  }

  template <typename S>
  friend AtomicMeasure<S> restrict(const AtomicMeasure<S>&, const Box<S>&);

  int dim_ = 1;
  PositionMatrix positions_;
  WeightVector weights_;
};

using AtomicMeasured = AtomicMeasure<double>;

/// A realization known on a window: atoms outside `window` are unknown, not absent.
template <typename Scalar = double>
struct Patch {
  AtomicMeasure<Scalar> measure;
  Box<Scalar> window;

  /// Throws unless the data window covers `required`.
  void require_covers(const Box<Scalar>& required, const char* module) const {
    if (!window.contains(required))
      throw PreconditionError(module, "window too small to cover the required region");
  }
};

/// alpha_t(mu) = delta_t * mu: every atom moves by +t.
template <typename Scalar>
AtomicMeasure<Scalar> translate(const AtomicMeasure<Scalar>& mu, const Point<Scalar>& t) {
  if (t.size() != mu.dim()) throw PreconditionError("measure-core", "dimension mismatch in translate");
  auto atoms = mu.atoms();
  for (auto& a : atoms) a.position += t;
  return AtomicMeasure<Scalar>(mu.dim(), std::move(atoms), Scalar(0));
}

/// mu~: atoms at -x with conjugated weights.
template <typename Scalar>
AtomicMeasure<Scalar> reflect(const AtomicMeasure<Scalar>& mu) {
  auto atoms = mu.atoms();
  for (auto& a : atoms) {
    a.position = -a.position;
    a.weight = std::conj(a.weight);
  }
  return AtomicMeasure<Scalar>(mu.dim(), std::move(atoms), Scalar(0));
}

/// Restriction to a closed window.
template <typename Scalar>
AtomicMeasure<Scalar> restrict(const AtomicMeasure<Scalar>& mu, const Box<Scalar>& window) {
  if (window.dim() != mu.dim()) throw PreconditionError("measure-core", "dimension mismatch in restrict");
  const auto [first, last] = mu.axis0_range(window.lower(0), window.upper(0));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = first; i < last; ++i)
    if (window.contains(mu.position(i))) keep.push_back(i);
  AtomicMeasure<Scalar> out(mu.dim());
  const auto n = static_cast<Eigen::Index>(keep.size());
  out.positions_.resize(mu.dim(), n);
  out.weights_.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.positions_.col(k) = mu.positions().col(keep[static_cast<std::size_t>(k)]);
    out.weights_[k] = mu.weights()[keep[static_cast<std::size_t>(k)]];
  }
  return out;
}

/// Default cap on atom pairs formed by a convolution.
inline constexpr std::uint64_t kDefaultPairLimit = 50'000'000;

/// mu * nu: atoms at x + y with weights w_x v_y, merged within the merge tolerance.
template <typename Scalar>
AtomicMeasure<Scalar> convolve_atomic(const AtomicMeasure<Scalar>& mu, const AtomicMeasure<Scalar>& nu,
                                      std::uint64_t pair_limit = kDefaultPairLimit) {
  if (mu.dim() != nu.dim()) throw PreconditionError("measure-core", "dimension mismatch in convolution");
  const auto pairs = static_cast<std::uint64_t>(mu.size()) * static_cast<std::uint64_t>(nu.size());
  if (pairs > pair_limit)
    throw ResourceLimitError("measure-core", "convolution pair count " + std::to_string(pairs) +
                                                 " exceeds limit " + std::to_string(pair_limit));
  std::vector<Atom<Scalar>> atoms;
  atoms.reserve(static_cast<std::size_t>(pairs));
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    for (Eigen::Index j = 0; j < nu.size(); ++j)
      atoms.push_back({mu.position(i) + nu.position(j), mu.weight(i) * nu.weight(j)});
  return AtomicMeasure<Scalar>(mu.dim(), std::move(atoms));
}

/// mu(f) = sum_x w_x f(x) for any f exposing operator() and support().
template <typename Scalar, typename Function>
Complex<Scalar> integrate(const AtomicMeasure<Scalar>& mu, const Function& f) {
  const auto support = f.support();
  const auto [first, last] = mu.axis0_range(support.lower(0), support.upper(0));
  Complex<Scalar> sum(0);
  for (Eigen::Index i = first; i < last; ++i) sum += mu.weight(i) * f(mu.position(i));
  return sum;
}

}  // namespace ppdiff
