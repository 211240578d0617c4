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
#include "ppdiff/parallel.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

namespace ppdiff {

/// Samples g(i / m) for i = -M..M, stored at index i + M.
template <typename Scalar = double>
struct SampledFunction {
  std::vector<Complex<Scalar>> values;
  int per_unit = 1;

  long half_count() const { return (static_cast<long>(values.size()) - 1) / 2; }
  Scalar range() const { return Scalar(half_count()) / Scalar(per_unit); }
  const Complex<Scalar>& at(long i) const { return values[static_cast<std::size_t>(i + half_count())]; }
};

template <typename Scalar = double>
struct AlmostPeriodResult {
  std::vector<Scalar> periods;
  Scalar max_gap = std::numeric_limits<Scalar>::infinity();
  Scalar epsilon = Scalar(0);
  Scalar scan_range = Scalar(0);
  Scalar overlap_range = Scalar(0);

  bool relatively_dense(Scalar gap_bound) const { return !periods.empty() && max_gap <= gap_bound; }

  /// Accepted periods with |t| >= r.
  std::size_t count_beyond(Scalar r) const {
    std::size_t c = 0;
    for (Scalar t : periods)
      if (std::abs(t) >= r) ++c;
    return c;
  }
};

/// Grid points t in [-scan, scan] with sup_{|s| <= overlap} |g(t + s) - g(s)| < epsilon.
/// max_gap is the largest gap between consecutive accepted t, the end gaps to
/// +-scan included. overlap defaults to range - scan.
template <typename Scalar>
AlmostPeriodResult<Scalar> almost_periods(const SampledFunction<Scalar>& g, Scalar scan, Scalar epsilon,
                                          Scalar overlap = Scalar(-1)) {
  if (g.values.empty() || g.values.size() % 2 == 0)
    throw PreconditionError("diffraction", "samples must be symmetric about 0");
  if (!(epsilon > Scalar(0))) throw PreconditionError("diffraction", "epsilon must be positive");
  if (overlap < Scalar(0)) overlap = g.range() - scan;
  const auto m = static_cast<Scalar>(g.per_unit);
  const auto scan_k = static_cast<long>(std::floor(scan * m + Scalar(1e-9)));
  const auto overlap_k = static_cast<long>(std::floor(overlap * m + Scalar(1e-9)));
  if (scan < Scalar(0) || overlap_k < 0 || scan_k + overlap_k > g.half_count())
    throw PreconditionError("diffraction", "insufficient sample range for the scan and overlap");

  std::vector<char> accepted(static_cast<std::size_t>(2 * scan_k + 1), 0);
  parallel_for(accepted.size(), [&](std::size_t idx) {
    const long k = static_cast<long>(idx) - scan_k;
    for (long s = -overlap_k; s <= overlap_k; ++s)
      if (!(std::abs(g.at(k + s) - g.at(s)) < epsilon)) return;
    accepted[idx] = 1;
  });

  AlmostPeriodResult<Scalar> result;
  result.epsilon = epsilon;
  result.scan_range = Scalar(scan_k) / m;
  result.overlap_range = Scalar(overlap_k) / m;
  for (long k = -scan_k; k <= scan_k; ++k)
    if (accepted[static_cast<std::size_t>(k + scan_k)]) result.periods.push_back(Scalar(k) / m);
  if (!result.periods.empty()) {
    Scalar gap = result.periods.front() + result.scan_range;
    for (std::size_t i = 1; i < result.periods.size(); ++i)
      gap = std::max(gap, result.periods[i] - result.periods[i - 1]);
    result.max_gap = std::max(gap, result.scan_range - result.periods.back());
  }
  return result;
}

}  // namespace ppdiff
