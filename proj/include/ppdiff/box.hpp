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

#include "ppdiff/core.hpp"

#include <algorithm>
#include <vector>

namespace ppdiff {

/// Closed axis-aligned box center + [-h, h]^d. Degenerate axes (h = 0) are
/// allowed for boxes used as Minkowski summands, e.g. K = {0}.
template <typename Scalar = double>
class Box {
 public:
  using PointType = Point<Scalar>;

  Box() = default;
  Box(PointType center, PointType half_widths)
      : center_(std::move(center)), half_widths_(std::move(half_widths)) {
    if (center_.size() != half_widths_.size() || center_.size() < 1 || center_.size() > 2)
      throw PreconditionError("box", "dimension must be 1 or 2 and consistent");
    if ((half_widths_.array() < Scalar(0)).any())
      throw PreconditionError("box", "negative half-width");
  }

  /// [-n, n]^d
  static Box centered(int dim, Scalar n) {
    return Box(PointType::Zero(dim), PointType::Constant(dim, n));
  }

  /// Box from per-axis lower/upper corners.
  static Box from_bounds(const PointType& lower, const PointType& upper) {
    if ((upper.array() < lower.array()).any())
      throw PreconditionError("box", "upper corner below lower corner");
    return Box((lower + upper) / Scalar(2), (upper - lower) / Scalar(2));
  }

  int dim() const { return static_cast<int>(center_.size()); }
  const PointType& center() const { return center_; }
  const PointType& half_widths() const { return half_widths_; }
  PointType lower() const { return center_ - half_widths_; }
  PointType upper() const { return center_ + half_widths_; }
  Scalar lower(int axis) const { return center_[axis] - half_widths_[axis]; }
  Scalar upper(int axis) const { return center_[axis] + half_widths_[axis]; }

  Scalar volume() const { return (Scalar(2) * half_widths_).prod(); }
  Scalar diameter(int axis) const { return Scalar(2) * half_widths_[axis]; }

  /// Closed membership.
  bool contains(const PointType& x) const {
    return ((x - center_).cwiseAbs().array() <= half_widths_.array()).all();
  }

  bool contains(const Box& other) const {
    return (lower().array() <= other.lower().array()).all() &&
           (other.upper().array() <= upper().array()).all();
  }

  /// Minkowski sum B + K.
  Box operator+(const Box& k) const {
    return Box(center_ + k.center_, half_widths_ + k.half_widths_);
  }

  /// Reflection -B.
  Box operator-() const { return Box(-center_, half_widths_); }

  Box translated(const PointType& t) const { return Box(center_ + t, half_widths_); }

  /// Box grown by a per-axis margin on both sides.
  Box expanded(const PointType& margin) const { return Box(center_, half_widths_ + margin); }
  Box expanded(Scalar margin) const {
    return expanded(PointType::Constant(dim(), margin));
  }

  bool operator==(const Box& o) const {
    return center_ == o.center_ && half_widths_ == o.half_widths_;
  }

 private:
  PointType center_;
  PointType half_widths_;
};

/// Volume of the intersection of two boxes (zero when disjoint).
template <typename Scalar>
Scalar intersection_volume(const Box<Scalar>& a, const Box<Scalar>& b) {
  Scalar v(1);
  for (int i = 0; i < a.dim(); ++i) {
    const Scalar lo = std::max(a.lower(i), b.lower(i));
    const Scalar hi = std::min(a.upper(i), b.upper(i));
    if (hi <= lo) return Scalar(0);
    v *= hi - lo;
  }
  return v;
}

/// Finite union of boxes with pairwise disjoint interiors.
template <typename Scalar = double>
struct Region {
  std::vector<Box<Scalar>> boxes;

  Scalar volume() const {
    Scalar v(0);
    for (const auto& b : boxes) v += b.volume();
    return v;
  }

  bool contains(const Point<Scalar>& x) const {
    return std::any_of(boxes.begin(), boxes.end(), [&](const auto& b) { return b.contains(x); });
  }
};

/// outer \ inner as a union of at most 2d slabs; inner is treated as open, so
/// the slabs are closed and share only boundaries with each other.
template <typename Scalar>
Region<Scalar> box_difference(const Box<Scalar>& outer, const Box<Scalar>& inner) {
  Region<Scalar> region;
  const int d = outer.dim();
  Point<Scalar> lo = outer.lower();
  Point<Scalar> hi = outer.upper();
  for (int i = 0; i < d; ++i) {
    const Scalar in_lo = std::max(inner.lower(i), lo[i]);
    const Scalar in_hi = std::min(inner.upper(i), hi[i]);
    if (in_hi <= in_lo) {
      // No overlap on this axis: everything left over is outside inner.
      region.boxes.push_back(Box<Scalar>::from_bounds(lo, hi));
      return region;
    }
    if (lo[i] < in_lo) {
      Point<Scalar> slab_hi = hi;
      slab_hi[i] = in_lo;
      region.boxes.push_back(Box<Scalar>::from_bounds(lo, slab_hi));
    }
    if (in_hi < hi[i]) {
      Point<Scalar> slab_lo = lo;
      slab_lo[i] = in_hi;
      region.boxes.push_back(Box<Scalar>::from_bounds(slab_lo, hi));
    }
    lo[i] = in_lo;
    hi[i] = in_hi;
  }
  return region;
}

/// Exact volume of a union of boxes by coordinate compression (d <= 2).
template <typename Scalar>
Scalar union_volume(const std::vector<Box<Scalar>>& boxes) {
  if (boxes.empty()) return Scalar(0);
  const int d = boxes.front().dim();
  std::vector<Scalar> xs;
  for (const auto& b : boxes) {
    xs.push_back(b.lower(0));
    xs.push_back(b.upper(0));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  Scalar total(0);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const Scalar x0 = xs[i], x1 = xs[i + 1];
    const Scalar mid = (x0 + x1) / Scalar(2);
    if (d == 1) {
      const bool covered = std::any_of(boxes.begin(), boxes.end(), [&](const auto& b) {
        return b.lower(0) <= mid && mid <= b.upper(0);
      });
      if (covered) total += x1 - x0;
      continue;
    }
    // 1d union of the y-intervals of boxes spanning this x-slab.
    std::vector<std::pair<Scalar, Scalar>> spans;
    for (const auto& b : boxes)
      if (b.lower(0) <= mid && mid <= b.upper(0)) spans.emplace_back(b.lower(1), b.upper(1));
    std::sort(spans.begin(), spans.end());
    Scalar length(0);
    Scalar cur_lo(0), cur_hi(0);
    bool open = false;
    for (const auto& [a, b] : spans) {
      if (!open || a > cur_hi) {
        if (open) length += cur_hi - cur_lo;
        cur_lo = a;
        cur_hi = b;
        open = true;
      } else {
        cur_hi = std::max(cur_hi, b);
      }
    }
    if (open) length += cur_hi - cur_lo;
    total += (x1 - x0) * length;
  }
  return total;
}

}  // namespace ppdiff
