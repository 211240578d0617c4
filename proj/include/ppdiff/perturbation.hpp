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

#include "ppdiff/almost_periods.hpp"
#include "ppdiff/atomic_measure.hpp"
#include "ppdiff/averaging.hpp"
#include "ppdiff/diffraction.hpp"
#include "ppdiff/eigen_group.hpp"
#include "ppdiff/generators.hpp"
#include "ppdiff/observable.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace ppdiff {

enum class RuleKind { thinning, weight_map, deterministic_shift };

enum class CountPredicate {
  count_le,     ///< keep iff local count <= m
  count_eq,     ///< keep iff local count == m
  right_gap_gt  ///< keep iff the next atom to the right (axis 0) is further than `gap` (d = 1)
};

inline const char* to_string(RuleKind k) {
  switch (k) {
    case RuleKind::thinning: return "thinning";
    case RuleKind::weight_map: return "weight_map";
    case RuleKind::deterministic_shift: return "deterministic_shift";
  }
  return "unknown";
}

inline const char* to_string(CountPredicate p) {
  switch (p) {
    case CountPredicate::count_le: return "count_le";
    case CountPredicate::count_eq: return "count_eq";
    case CountPredicate::right_gap_gt: return "right_gap_gt";
  }
  return "unknown";
}

inline RuleKind rule_kind_from_string(const std::string& s) {
  for (auto k : {RuleKind::thinning, RuleKind::weight_map, RuleKind::deterministic_shift})
    if (s == to_string(k)) return k;
  throw ConfigError("perturbation", "unknown rule kind '" + s + "'");
}

inline CountPredicate count_predicate_from_string(const std::string& s) {
  for (auto p : {CountPredicate::count_le, CountPredicate::count_eq, CountPredicate::right_gap_gt})
    if (s == to_string(p)) return p;
  throw ConfigError("perturbation", "unknown predicate '" + s + "'");
}

/// Deterministic local rule Phi. The decision at an atom x reads only the
/// atoms in x + [-radius, radius]^d, through relative positions.
template <typename Scalar = double>
struct LocalRule {
  RuleKind kind = RuleKind::thinning;
  Scalar radius = Scalar(1);
  CountPredicate predicate = CountPredicate::count_le;
  long count = 1000;          ///< m of the count predicates
  Scalar gap = Scalar(1.3);   ///< threshold of right_gap_gt
  ScalarMap<Scalar> weight = ScalarMap<Scalar>::identity();  ///< w -> w * weight(count)
  std::map<long, Point<Scalar>> shifts;  ///< local count -> displacement

  void validate(int dim) const {
    if (!(radius > Scalar(0))) throw ConfigError("perturbation", "rule radius must be positive");
    if (predicate == CountPredicate::right_gap_gt) {
      if (dim != 1) throw ConfigError("perturbation", "right_gap_gt requires dim = 1");
      if (!(gap > Scalar(0) && gap <= radius)) throw ConfigError("perturbation", "gap must lie in (0, radius]");
    }
    for (const auto& [c, v] : shifts)
      if (v.size() != dim) throw ConfigError("perturbation", "shift vector dimension differs from dim");
  }

  /// Largest displacement of an atom (max-norm).
  Scalar max_shift() const {
    Scalar s(0);
    for (const auto& [c, v] : shifts) s = std::max(s, v.cwiseAbs().maxCoeff());
    return s;
  }

  /// Data margin needed around a target window.
  Scalar margin() const { return radius + max_shift() + Scalar(kMergeTolerance); }
};

namespace internal {

/// Atoms within max-norm distance r of atom i; distances within kMergeTolerance
/// of r count as inside.
template <typename Scalar>
long local_count(const AtomicMeasure<Scalar>& omega, Eigen::Index i, Scalar r) {
  r += Scalar(kMergeTolerance);
  const Point<Scalar> x = omega.position(i);
  const auto [first, last] = omega.axis0_range(x[0] - r, x[0] + r);
  long c = 0;
  for (Eigen::Index j = first; j < last; ++j)
    if ((omega.position(j) - x).cwiseAbs().maxCoeff() <= r) ++c;
  return c;
}

template <typename Scalar>
bool keep(const LocalRule<Scalar>& rule, const AtomicMeasure<Scalar>& omega, Eigen::Index i, long count) {
  switch (rule.predicate) {
    case CountPredicate::count_le: return count <= rule.count;
    case CountPredicate::count_eq: return count == rule.count;
    case CountPredicate::right_gap_gt: {
      const Scalar x = omega.positions()(0, i);
      if (i + 1 < omega.size() && omega.positions()(0, i + 1) - x <= rule.radius)
        return omega.positions()(0, i + 1) - x > rule.gap;
      return true;  // no atom within the radius
    }
  }
  return false;
}

}  // namespace internal

/// Phi(omega) restricted to `target`. The patch must cover target grown by the
/// rule margin.
template <typename Scalar>
AtomicMeasure<Scalar> apply_rule(const LocalRule<Scalar>& rule, const Patch<Scalar>& omega, const Box<Scalar>& target) {
  rule.validate(omega.measure.dim());
  if (!omega.window.contains(target.expanded(rule.margin())))
    throw PreconditionError("perturbation", "insufficient margin around the target window");
  const auto source = restrict(omega.measure, target.expanded(rule.max_shift()));
  const auto& data = omega.measure;
  std::vector<Atom<Scalar>> out(static_cast<std::size_t>(source.size()));
  std::vector<char> present(out.size(), 0);
  parallel_for(out.size(), [&](std::size_t k) {
    const auto idx = static_cast<Eigen::Index>(k);
    // index of the same atom in the full data, for neighbourhood queries
    const Point<Scalar> x = source.position(idx);
    const auto [first, last] = data.axis0_range(x[0], x[0]);
    Eigen::Index i = first;
    while (i < last && data.position(i) != x) ++i;
    const long count = internal::local_count(data, i, rule.radius);
    Atom<Scalar> a{x, source.weight(idx)};
    switch (rule.kind) {
      case RuleKind::thinning:
        if (!internal::keep(rule, data, i, count)) return;
        break;
      case RuleKind::weight_map:
        a.weight *= rule.weight(Complex<Scalar>(Scalar(count)));
        break;
      case RuleKind::deterministic_shift:
        if (auto it = rule.shifts.find(count); it != rule.shifts.end()) a.position += it->second;
        break;
    }
    if (!target.contains(a.position)) return;
    out[k] = a;
    present[k] = 1;
  });
  std::vector<Atom<Scalar>> atoms;
  for (std::size_t k = 0; k < out.size(); ++k)
    if (present[k]) atoms.push_back(out[k]);
  return AtomicMeasure<Scalar>(data.dim(), std::move(atoms));
}

/// Box shrunk by `by` on every side (empty boxes are rejected).
template <typename Scalar>
Box<Scalar> shrunk(const Box<Scalar>& b, Scalar by) {
  if ((b.half_widths().array() <= by).any()) throw PreconditionError("perturbation", "window too small for the margin");
  return Box<Scalar>(b.center(), b.half_widths().array() - by);
}

/// Phi(alpha_t omega) == alpha_t Phi(omega) atom for atom on the common valid
/// window, for every sampled t. Works for any rule type accepted by `apply`.
template <typename Scalar, typename Rule, typename Apply>
bool equivariance_check(const Rule& rule, Scalar margin, const Patch<Scalar>& omega,
                        const std::vector<Point<Scalar>>& t_samples, Apply&& apply) {
  for (const auto& t : t_samples) {
    const Scalar tn = t.cwiseAbs().maxCoeff();
    const Scalar slack = Scalar(1e-9) * (Scalar(1) + omega.window.half_widths().maxCoeff() + tn);
    const Box<Scalar> target = shrunk(omega.window, margin + tn + slack);
    const Patch<Scalar> moved{translate(omega.measure, t), omega.window.translated(t)};
    const auto lhs = apply(rule, moved, target);
    const auto rhs = translate(apply(rule, omega, target.translated(Point<Scalar>(-t))), t);
    if (!lhs.approx_equal(rhs, Scalar(kMergeTolerance), Scalar(1e-12))) return false;
  }
  return true;
}

template <typename Scalar>
bool equivariance_check(const LocalRule<Scalar>& rule, const GeneratorSpec& spec, const Box<Scalar>& window,
                        const std::vector<Point<Scalar>>& t_samples) {
  const auto omega = generate_patch(spec, window);
  return equivariance_check(rule, rule.margin(), omega, t_samples,
                            [](const auto& r, const auto& w, const auto& b) { return apply_rule(r, w, b); });
}

template <typename Scalar = double>
struct PerturbationOptions {
  PeakThresholds<Scalar> thresholds;
  Scalar theta_pp = Scalar(0.9);        ///< gate on the original system
  Scalar theta_pp_after = Scalar(0.9);  ///< required of the perturbed system
  Scalar freq_tol = Scalar(kFrequencyTolerance);
  int coefficient_bound = 50;
  Scalar ap_scan = Scalar(20);     ///< almost-period scan range T
  Scalar ap_overlap = Scalar(10);  ///< overlap range
  int ap_per_unit = 20;
  Scalar ap_epsilon_factor = Scalar(0.1);  ///< epsilon = factor * C(0)
};

template <typename Scalar = double>
struct PerturbationReport {
  PeakList<Scalar> peaks_before;
  PeakList<Scalar> peaks_after;
  std::vector<Character<Scalar>> group_basis;
  std::vector<Character<Scalar>> nonmembers;  ///< refined bragg peaks after, outside the group
  std::vector<Character<Scalar>> unresolved;  ///< bragg peaks after too blended to test
  bool flag_support = false;
  bool flag_pp = false;
  Scalar ratio_before = Scalar(0);
  Scalar ratio_after = Scalar(0);
  AlmostPeriodResult<Scalar> ap_before;
  AlmostPeriodResult<Scalar> ap_after;
};

namespace internal {

template <typename Scalar>
AlmostPeriodResult<Scalar> orbit_almost_periods(const Patch<Scalar>& omega, const TestFunction<Scalar>& phi, Scalar n,
                                                const PerturbationOptions<Scalar>& opt) {
  const auto h = Observable<Scalar>::sampling(phi);
  SampledFunction<Scalar> g{orbit_autocovariance_grid(omega, h, n, opt.ap_scan + opt.ap_overlap, opt.ap_per_unit),
                            opt.ap_per_unit};
  const Scalar eps = opt.ap_epsilon_factor * std::abs(g.at(0));
  if (!(eps > Scalar(0))) return AlmostPeriodResult<Scalar>{};
  return almost_periods(g, opt.ap_scan, eps, opt.ap_overlap);
}

}  // namespace internal

/// Peaks, group S of the original system, and the checks that Phi keeps the
/// spectrum pure point and inside S.
template <typename Scalar>
PerturbationReport<Scalar> perturbation_experiment(const LocalRule<Scalar>& rule, const GeneratorSpec& spec,
                                                   const BoxSequence<Scalar>& seq, std::size_t n_small,
                                                   std::size_t n_large, const TestFunction<Scalar>& phi,
                                                   const ScanGrid<Scalar>& grid,
                                                   const PerturbationOptions<Scalar>& opt = {}) {
  const Box<Scalar>& large = seq[n_large];
  const Scalar n = large.half_widths().maxCoeff();
  const Scalar lag = opt.ap_scan + opt.ap_overlap;
  const Scalar reach = phi.reach().maxCoeff();
  const Box<Scalar> data = large.expanded(lag + reach + rule.margin() + Scalar(1));
  const auto before = generate_patch(spec, data);
  const Box<Scalar> trusted = shrunk(data, rule.margin());
  const Patch<Scalar> after{apply_rule(rule, before, trusted), trusted};

  PerturbationReport<Scalar> r;
  r.peaks_before = detect_peaks(before, seq, n_small, n_large, grid, opt.thresholds, opt.freq_tol);
  r.ratio_before = pure_point_ratio(before, seq, n_large, phi, r.peaks_before);
  if (r.ratio_before < opt.theta_pp)
    throw PreconditionError("perturbation", "original system fails the pure point gate (ratio " +
                                                std::to_string(r.ratio_before) + ")");
  const auto group = eigenvalue_group(r.peaks_before, opt.freq_tol, opt.coefficient_bound);
  r.group_basis = group.basis();
  r.peaks_after = detect_peaks(after, seq, n_small, n_large, grid, opt.thresholds, opt.freq_tol);
  for (const auto& p : r.peaks_after.bragg()) {
    if (!p.refined)
      r.unresolved.push_back(p.frequency);
    else if (!group.contains(p.frequency))
      r.nonmembers.push_back(p.frequency);
  }
  r.flag_support = r.nonmembers.empty();
  r.ratio_after = pure_point_ratio(after, seq, n_large, phi, r.peaks_after);
  r.flag_pp = r.ratio_after >= opt.theta_pp_after;
  if (large.dim() == 1) {
    r.ap_before = internal::orbit_almost_periods(before, phi, n, opt);
    r.ap_after = internal::orbit_almost_periods(after, phi, n, opt);
  }
  return r;
}

}  // namespace ppdiff
