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
#include "ppdiff/box.hpp"
#include "ppdiff/observable.hpp"
#include "ppdiff/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ppdiff {

/// Nested, origin-symmetric boxes B_1 \subset B_2 \subset ... with strictly
/// increasing half-widths. Indices are 1-based like the sequence itself.
template <typename Scalar = double>
class BoxSequence {
 public:
  explicit BoxSequence(std::vector<Box<Scalar>> boxes) : boxes_(std::move(boxes)) {
    for (std::size_t i = 0; i < boxes_.size(); ++i) {
      if (!boxes_[i].center().isZero()) throw PreconditionError("averaging", "box sequence must be origin-symmetric");
      if (i > 0 && !(boxes_[i].half_widths().array() > boxes_[i - 1].half_widths().array()).all())
        throw PreconditionError("averaging", "box half-widths must increase strictly");
    }
  }

  /// B_n = [-n, n]^d for n = 1..count.
  static BoxSequence cubes(int dim, int count) {
    std::vector<Box<Scalar>> boxes;
    for (int n = 1; n <= count; ++n) boxes.push_back(Box<Scalar>::centered(dim, Scalar(n)));
    return BoxSequence(std::move(boxes));
  }

  /// B_n = [-n, n]^d for the listed half-widths.
  static BoxSequence cubes(int dim, const std::vector<Scalar>& half_widths) {
    std::vector<Box<Scalar>> boxes;
    for (Scalar n : half_widths) boxes.push_back(Box<Scalar>::centered(dim, n));
    return BoxSequence(std::move(boxes));
  }

  std::size_t size() const { return boxes_.size(); }
  const Box<Scalar>& operator[](std::size_t n) const {
    if (n < 1 || n > boxes_.size()) throw PreconditionError("averaging", "box index out of range");
    return boxes_[n - 1];
  }
  const std::vector<Box<Scalar>>& boxes() const { return boxes_; }

 private:
  std::vector<Box<Scalar>> boxes_;
};

/// K-boundary closure((B+K) \ B) u [(closure(G \ B) - K) n B]. For boxes it is
/// (B + K) minus the open erosion {x : x + K \subset int B}; its volume is
/// |B + K| - |erosion|.
template <typename Scalar>
Region<Scalar> k_boundary(const Box<Scalar>& b, const Box<Scalar>& k) {
  if (!k.contains(Point<Scalar>::Zero(k.dim()))) throw PreconditionError("averaging", "K must contain 0");
  const Box<Scalar> outer = b + k;
  // x + K inside int B  <=>  lower(B) - lower(K) < x < upper(B) - upper(K)
  const Point<Scalar> lo = b.lower() - k.lower();
  const Point<Scalar> hi = b.upper() - k.upper();
  if ((hi.array() <= lo.array()).any()) return Region<Scalar>{{outer}};
  return box_difference(outer, Box<Scalar>::from_bounds(lo, hi));
}

/// |B symmetric-difference (B + K)| / |B|
template <typename Scalar>
Scalar folner_ratio(const Box<Scalar>& b, const Box<Scalar>& k) {
  const Box<Scalar> bk = b + k;
  const Scalar sym = b.volume() + bk.volume() - Scalar(2) * intersection_volume(b, bk);
  return sym / b.volume();
}

/// |K-boundary of B| / |B|
template <typename Scalar>
Scalar van_hove_ratio(const Box<Scalar>& b, const Box<Scalar>& k) {
  return k_boundary(b, k).volume() / b.volume();
}

/// Ratio |union_{k<n} (-B_k + B_n)| / |B_n| at a single n >= 2.
template <typename Scalar>
Scalar tempered_ratio(const BoxSequence<Scalar>& seq, std::size_t n) {
  if (n < 2 || n > seq.size()) throw PreconditionError("averaging", "tempered ratio needs 2 <= n <= length");
  std::vector<Box<Scalar>> pieces;
  for (std::size_t k = 1; k < n; ++k) pieces.push_back(-seq[k] + seq[n]);
  return union_volume(pieces) / seq[n].volume();
}

/// max_{n >= 2} |union_{k<n} (-B_k + B_n)| / |B_n|
template <typename Scalar>
Scalar tempered_constant(const BoxSequence<Scalar>& seq) {
  if (seq.size() < 2) throw PreconditionError("averaging", "tempered constant needs at least two boxes");
  Scalar c(0);
  for (std::size_t n = 2; n <= seq.size(); ++n) c = std::max(c, tempered_ratio(seq, n));
  return c;
}

namespace internal {

template <typename Scalar>
std::vector<std::vector<Scalar>> orbit_breakpoints(const Observable<Scalar>& h, const AtomicMeasure<Scalar>& omega,
                                                   const Box<Scalar>& box) {
  std::vector<std::vector<Scalar>> bp;
  for (int i = 0; i < box.dim(); ++i) bp.push_back(h.orbit_breakpoints(omega, i, box.lower(i), box.upper(i)));
  return bp;
}

}  // namespace internal

/// (1 / |B|) integral_B h(alpha_{-t} omega) dt. The data window must cover
/// B grown by the observable's reach.
template <typename Scalar>
Complex<Scalar> birkhoff_average(const Observable<Scalar>& h, const Patch<Scalar>& omega, const Box<Scalar>& b,
                                 Scalar tol = Scalar(kQuadratureTolerance)) {
  omega.require_covers(b.expanded(h.reach()), "averaging");
  const auto local = restrict(omega.measure, b.expanded(h.reach()));
  auto f = [&](const Point<Scalar>& t) { return h.on_orbit(local, t); };
  return integrate_box(f, b, internal::orbit_breakpoints(h, local, b), tol * b.volume()) / b.volume();
}

template <typename Scalar>
Complex<Scalar> birkhoff_average(const Observable<Scalar>& h, const Patch<Scalar>& omega,
                                 const BoxSequence<Scalar>& seq, std::size_t n,
                                 Scalar tol = Scalar(kQuadratureTolerance)) {
  return birkhoff_average(h, omega, seq[n], tol);
}

/// (1 / |B|) integral over the K-boundary of B of |h(alpha_t omega)| dt.
template <typename Scalar>
Scalar boundary_term(const Observable<Scalar>& h, const Patch<Scalar>& omega, const Box<Scalar>& b,
                     const Box<Scalar>& k, Scalar tol = Scalar(kQuadratureTolerance)) {
  const Region<Scalar> region = k_boundary(b, k);
  // alpha_t = alpha_{-u} with u = -t: integrate |h(alpha_{-u} omega)| over -region.
  const Box<Scalar> reach_box = (-(b + k)).expanded(h.reach());
  omega.require_covers(reach_box, "averaging");
  const auto local = restrict(omega.measure, reach_box);
  auto f = [&](const Point<Scalar>& u) { return std::abs(h.on_orbit(local, u)); };
  Scalar total(0);
  for (const auto& piece : region.boxes) {
    const Box<Scalar> reflected = -piece;
    total += integrate_box(f, reflected, internal::orbit_breakpoints(h, local, reflected), tol * b.volume());
  }
  return total / b.volume();
}

template <typename Scalar>
Scalar boundary_term(const Observable<Scalar>& h, const Patch<Scalar>& omega, const BoxSequence<Scalar>& seq,
                     std::size_t n, const Box<Scalar>& k, Scalar tol = Scalar(kQuadratureTolerance)) {
  return boundary_term(h, omega, seq[n], k, tol);
}

}  // namespace ppdiff
