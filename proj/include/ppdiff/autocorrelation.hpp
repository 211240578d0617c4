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
#include "ppdiff/generators.hpp"
#include "ppdiff/observable.hpp"
#include "ppdiff/parallel.hpp"
#include "ppdiff/test_function.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace ppdiff {

/// Default retained difference range R_max.
inline constexpr double kDefaultRetainedRange = 20.0;

/// Empirical autocorrelation gamma_n = omega~_B * omega_B / |B|, truncated to
/// differences with max-norm <= r_max. Weights are already divided by |B|.
template <typename Scalar = double>
struct AutocorrEstimate {
  AtomicMeasure<Scalar> differences;
  Scalar norm_volume = Scalar(1);
  int window_index = 0;
  Scalar r_max = Scalar(kDefaultRetainedRange);
};

using AutocorrEstimated = AutocorrEstimate<double>;

/// Pairs (x, y) of omega_B with y - x inside [-r_max, r_max]^d contribute
/// conj(w_x) w_y at y - x. Only the lexicographically positive half is
/// enumerated (sorted sliding window); the negative half is its exact mirror,
/// so the estimate is hermitian bit for bit.
template <typename Scalar>
AutocorrEstimate<Scalar> empirical_autocorr(const AtomicMeasure<Scalar>& omega, const Box<Scalar>& b,
                                            Scalar r_max = Scalar(kDefaultRetainedRange), int window_index = 0,
                                            std::uint64_t pair_limit = kDefaultPairLimit) {
  const auto local = restrict(omega, b);
  const int d = local.dim();
  std::vector<Atom<Scalar>> positive;
  Complex<Scalar> zero_weight(0);
  std::uint64_t pairs = 0;
  for (Eigen::Index i = 0; i < local.size(); ++i) {
    zero_weight += std::norm(local.weight(i));
    const Complex<Scalar> wi = std::conj(local.weight(i));
    for (Eigen::Index j = i + 1; j < local.size(); ++j) {
      const Point<Scalar> z = local.position(j) - local.position(i);
      if (z[0] > r_max) break;
      if (z.cwiseAbs().maxCoeff() > r_max) continue;
      if (++pairs > pair_limit)
        throw ResourceLimitError("autocorrelation", "pair count exceeds limit " + std::to_string(pair_limit));
      positive.push_back({z, wi * local.weight(j)});
    }
  }
  const AtomicMeasure<Scalar> half(d, std::move(positive));
  std::vector<Atom<Scalar>> all;
  all.reserve(static_cast<std::size_t>(2 * half.size() + 1));
  const Scalar volume = b.volume();
  for (Eigen::Index i = 0; i < half.size(); ++i) {
    const Complex<Scalar> w = half.weight(i) / volume;
    all.push_back({half.position(i), w});
    all.push_back({Point<Scalar>(-half.position(i)), std::conj(w)});
  }
  if (!local.empty()) all.push_back({Point<Scalar>::Zero(d), zero_weight / volume});
  return AutocorrEstimate<Scalar>{AtomicMeasure<Scalar>(d, std::move(all), Scalar(0)), volume, window_index, r_max};
}

/// (phi~ * psi * gamma_n)(t) = sum_z gamma_n(z) k(t - z) for a precomputed kernel k.
template <typename Scalar>
Complex<Scalar> smoothed_autocorr(const AutocorrEstimate<Scalar>& gamma, const SeparableKernel<Scalar>& kernel,
                                  const Point<Scalar>& t) {
  const Point<Scalar> needed = t.cwiseAbs() + kernel.reach();
  if (needed.maxCoeff() > gamma.r_max)
    throw PreconditionError("autocorrelation", "kernel exceeds the retained difference range");
  // z must satisfy t - z in support(k)  <=>  z in t - support(k)
  const Box<Scalar> s = kernel.support();
  const auto& g = gamma.differences;
  const auto [first, last] = g.axis0_range(t[0] - s.upper(0), t[0] - s.lower(0));
  Complex<Scalar> sum(0);
  for (Eigen::Index i = first; i < last; ++i) sum += g.weight(i) * kernel(t - g.position(i));
  return sum;
}

template <typename Scalar>
Complex<Scalar> smoothed_autocorr(const AutocorrEstimate<Scalar>& gamma, const TestFunction<Scalar>& phi,
                                  const TestFunction<Scalar>& psi, const Point<Scalar>& t) {
  return smoothed_autocorr(gamma, correlation_kernel(phi, psi), t);
}

/// Samples t -> (phi~ * psi * gamma_n)(t) at t = k * spacing, |k| <= count (1d).
template <typename Scalar>
std::vector<Complex<Scalar>> sample_smoothed_autocorr(const AutocorrEstimate<Scalar>& gamma,
                                                      const SeparableKernel<Scalar>& kernel, Scalar spacing,
                                                      long count) {
  std::vector<Complex<Scalar>> out(static_cast<std::size_t>(2 * count + 1));
  parallel_for(out.size(), [&](std::size_t i) {
    Point<Scalar> t(1);
    t[0] = Scalar(static_cast<long>(i) - count) * spacing;
    out[i] = smoothed_autocorr(gamma, kernel, t);
  });
  return out;
}

/// [(omega~ * omega_B)(k) - (omega~_B * omega_B)(k)] / |B| with k = phi~ * psi,
/// where the first estimator lets x range over the whole data window.
template <typename Scalar>
Complex<Scalar> mixed_autocorr_difference(const Patch<Scalar>& omega, const Box<Scalar>& b, const Box<Scalar>& k,
                                          const TestFunction<Scalar>& phi, const TestFunction<Scalar>& psi) {
  if (!k.contains(phi.support()) || !k.contains(psi.support()))
    throw PreconditionError("autocorrelation", "test function supports must lie inside K");
  omega.require_covers(b + k + k, "autocorrelation");
  const auto kernel = correlation_kernel(phi, psi);
  const Box<Scalar> ks = kernel.support();
  const auto all = restrict(omega.measure, b + k + k);
  const auto inner = restrict(all, b);

  auto evaluate = [&](const AtomicMeasure<Scalar>& xs) {
    Complex<Scalar> sum(0);
    for (Eigen::Index j = 0; j < inner.size(); ++j) {
      const Point<Scalar> y = inner.position(j);
      // y - x in support(k)  <=>  x in y - support(k)
      const auto [first, last] = xs.axis0_range(y[0] - ks.upper(0), y[0] - ks.lower(0));
      for (Eigen::Index i = first; i < last; ++i)
        sum += std::conj(xs.weight(i)) * inner.weight(j) * kernel(Point<Scalar>(y - xs.position(i)));
    }
    return sum;
  };
  return (evaluate(all) - evaluate(inner)) / b.volume();
}

/// Sum_{i,j} conj(c_i) c_j g(t_i - t_j) with g = phi~ * phi * gamma_n.
template <typename Scalar>
Complex<Scalar> positive_definiteness_check(const AutocorrEstimate<Scalar>& gamma, const TestFunction<Scalar>& phi,
                                            const std::vector<Point<Scalar>>& points,
                                            const std::vector<Complex<Scalar>>& coeffs) {
  if (points.size() != coeffs.size()) throw PreconditionError("autocorrelation", "points and coeffs differ in length");
  if (points.size() > 50) throw PreconditionError("autocorrelation", "at most 50 points");
  const auto kernel = correlation_kernel(phi, phi);
  Complex<Scalar> q(0);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j)
      q += std::conj(coeffs[i]) * coeffs[j] * smoothed_autocorr(gamma, kernel, Point<Scalar>(points[i] - points[j]));
  return q;
}

/// How the ensemble draws omega from the invariant measure.
enum class Phase {
  fixed,   ///< realizations as generated
  uniform  ///< realizations translated by a uniform phase over one period cell
};

template <typename Scalar = double>
struct EnsembleResult {
  Complex<Scalar> mean;
  Scalar standard_error;
};

/// Phase cell over which a uniform translation makes the realization law
/// translation invariant (exactly for lattice kinds and Poisson, asymptotically
/// for the Fibonacci hull).
inline double phase_period(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::poisson: return 1.0;
    case GeneratorKind::fibonacci: return 1000.0;
    default: return spec.a;
  }
}

/// Monte Carlo estimate of <f_phi, T^t f_psi> = E[conj(f_phi(omega)) f_psi(alpha_{-t} omega)]
/// over `replicates` seeds, with omega generated on `window`.
template <typename Scalar>
EnsembleResult<Scalar> ensemble_correlation(const GeneratorSpec& spec, const TestFunction<Scalar>& phi,
                                            const TestFunction<Scalar>& psi, const Point<Scalar>& t,
                                            int replicates, const Box<Scalar>& window, Phase phase = Phase::fixed) {
  if (replicates < 2) throw PreconditionError("autocorrelation", "ensemble needs at least 2 replicates");
  const Box<Scalar> need_phi = -phi.support();
  const Box<Scalar> need_psi = (-psi.support()).translated(t);
  if (!window.contains(need_phi) || !window.contains(need_psi))
    throw PreconditionError("autocorrelation", "ensemble window must cover both test function supports");
  const auto f_phi = Observable<Scalar>::sampling(phi);
  const auto f_psi = Observable<Scalar>::sampling(psi);

  std::vector<Complex<Scalar>> samples(static_cast<std::size_t>(replicates));
  parallel_for(samples.size(), [&](std::size_t r) {
    GeneratorSpec s = spec;
    s.seed = mix64(spec.seed ^ mix64(0x5eedULL + r));
    Point<Scalar> u = Point<Scalar>::Zero(spec.dim);
    if (phase == Phase::uniform) {
      SiteEngine eng(mix64(s.seed ^ 0xa5a5a5a5ULL));
      for (int i = 0; i < spec.dim; ++i) u[i] = Scalar(phase_period(spec) * eng.uniform());
    }
    // omega' = alpha_{-u} omega on the window
    const auto omega = translate(generate(s, window.translated(u)), Point<Scalar>(-u));
    samples[r] = std::conj(f_phi(omega)) * f_psi.on_orbit(omega, t);
  });
  Complex<Scalar> mean(0);
  for (const auto& v : samples) mean += v;
  mean /= Scalar(replicates);
  Scalar ss(0);
  for (const auto& v : samples) ss += std::norm(v - mean);
  const Scalar se = std::sqrt(ss / Scalar(replicates - 1) / Scalar(replicates));
  return {mean, se};
}

}  // namespace ppdiff
