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
#include "ppdiff/autocorrelation.hpp"
#include "ppdiff/averaging.hpp"
#include "ppdiff/box.hpp"
#include "ppdiff/observable.hpp"
#include "ppdiff/parallel.hpp"
#include "ppdiff/quadrature.hpp"
#include "ppdiff/test_function.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace ppdiff {

/// A character lambda of R^d, paired with t as e^{2 pi i lambda.t}.
template <typename Scalar>
using Character = Point<Scalar>;

/// e^{2 pi i lambda.t}
template <typename Scalar>
Complex<Scalar> character_pairing(const Character<Scalar>& lambda, const Point<Scalar>& t) {
  return std::polar(Scalar(1), Scalar(2) * kPi<Scalar> * lambda.dot(t));
}

/// Regular frequency grid lower + k * spacing inside [lower, upper] per axis.
template <typename Scalar = double>
struct ScanGrid {
  Point<Scalar> lower;
  Point<Scalar> upper;
  Scalar spacing;

  int dim() const { return static_cast<int>(lower.size()); }

  Eigen::Index count(int axis) const {
    return static_cast<Eigen::Index>(std::floor((upper[axis] - lower[axis]) / spacing + Scalar(1e-9))) + 1;
  }

  Eigen::Index size() const {
    Eigen::Index n = 1;
    for (int i = 0; i < dim(); ++i) n *= count(i);
    return n;
  }

  /// Grid point with flat index k (axis 0 fastest).
  Character<Scalar> operator[](Eigen::Index k) const {
    Character<Scalar> lambda(dim());
    for (int i = 0; i < dim(); ++i) {
      lambda[i] = lower[i] + Scalar(k % count(i)) * spacing;
      k /= count(i);
    }
    return lambda;
  }

  void validate() const {
    if (lower.size() != upper.size() || lower.size() < 1 || lower.size() > 2)
      throw ConfigError("diffraction", "scan grid dimension must be 1 or 2");
    if (!(spacing > Scalar(0))) throw ConfigError("diffraction", "scan spacing must be positive");
    if ((upper.array() < lower.array()).any()) throw ConfigError("diffraction", "scan upper bound below lower bound");
  }
};

enum class PeakClass { bragg, diffuse, undecided };

inline const char* to_string(PeakClass c) {
  switch (c) {
    case PeakClass::bragg: return "bragg";
    case PeakClass::diffuse: return "diffuse";
    case PeakClass::undecided: return "undecided";
  }
  return "unknown";
}

template <typename Scalar = double>
struct Peak {
  Character<Scalar> frequency;
  Scalar intensity;  ///< |c_{n_large}(lambda)|^2
  PeakClass classification;
  bool refined;  ///< ascent converged and uncertainty <= freq_tol
  Scalar uncertainty = Scalar(0);  ///< offset of an ideal Hann lobe with the observed asymmetry
};

template <typename Scalar = double>
struct PeakThresholds {
  Scalar bragg = Scalar(0.5);
  Scalar diffuse = Scalar(2.0);
  Scalar margin = Scalar(4.0);  ///< widening factor of the diffuse band

  void validate() const {
    if (!(bragg > Scalar(0))) throw ConfigError("diffraction", "theta_bragg must be positive");
    if (!(diffuse > Scalar(0))) throw ConfigError("diffraction", "theta_diffuse must be positive");
    if (!(margin >= Scalar(1))) throw ConfigError("diffraction", "margin must be at least 1");
  }
};

template <typename Scalar = double>
struct PeakList {
  std::vector<Peak<Scalar>> peaks;  ///< lambda = 0 first, then by decreasing intensity
  std::size_t n_small = 0;
  std::size_t n_large = 0;
  PeakThresholds<Scalar> thresholds;

  std::vector<Peak<Scalar>> bragg() const {
    std::vector<Peak<Scalar>> out;
    for (const auto& p : peaks)
      if (p.classification == PeakClass::bragg) out.push_back(p);
    return out;
  }
};

template <typename Scalar = double>
struct SpectralEstimate {
  std::vector<Character<Scalar>> grid;
  std::vector<Scalar> values;
  std::string observable;
};

/// c_B(lambda) = (1 / |B|) sum_{x in B} w_x e^{-2 pi i lambda.x}
template <typename Scalar>
Complex<Scalar> bragg_amplitude(const AtomicMeasure<Scalar>& omega, const Box<Scalar>& b,
                                const Character<Scalar>& lambda) {
  const auto local = restrict(omega, b);
  Complex<Scalar> sum(0);
  for (Eigen::Index i = 0; i < local.size(); ++i)
    sum += local.weight(i) * std::polar(Scalar(1), Scalar(-2) * kPi<Scalar> * lambda.dot(local.position(i)));
  return sum / b.volume();
}

namespace internal {

/// Hann weight prod_i (1 + cos(pi (x_i - c_i) / h_i)) / 2; its mean over B is 2^-d.
template <typename Scalar>
Scalar hann(const Box<Scalar>& b, const Point<Scalar>& x) {
  Scalar v(1);
  for (int i = 0; i < b.dim(); ++i)
    v *= (Scalar(1) + std::cos(kPi<Scalar> * (x[i] - b.center()[i]) / b.half_widths()[i])) / Scalar(2);
  return v;
}

/// Hann-tapered amplitude, normalized so that an atom of the diffraction at
/// lambda gives the same limit as the plain amplitude.
template <typename Scalar>
class TaperedAmplitude {
 public:
  TaperedAmplitude(const AtomicMeasure<Scalar>& omega, const Box<Scalar>& b)
      : local_(restrict(omega, b)), tapered_(local_.size()) {
    for (Eigen::Index i = 0; i < local_.size(); ++i) tapered_[i] = local_.weight(i) * hann(b, local_.position(i));
    norm_ = b.volume() / Scalar(1 << b.dim());
  }

  Complex<Scalar> operator()(const Character<Scalar>& lambda) const {
    Complex<Scalar> sum(0);
    for (Eigen::Index i = 0; i < local_.size(); ++i)
      sum += tapered_[i] * std::polar(Scalar(1), Scalar(-2) * kPi<Scalar> * lambda.dot(local_.position(i)));
    return sum / norm_;
  }

  Scalar intensity(const Character<Scalar>& lambda) const { return std::norm((*this)(lambda)); }

  /// Intensities along axis 0 at lambda0 + k * step, k < count, by a
  /// phase recurrence restarted exactly every block.
  std::vector<Scalar> intensities_1d(Scalar lambda0, Scalar step, Eigen::Index count) const {
    std::vector<Scalar> out(static_cast<std::size_t>(count));
    constexpr Eigen::Index kBlock = 64;
    const Eigen::Index blocks = (count + kBlock - 1) / kBlock;
    parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t blk) {
      const Eigen::Index k0 = static_cast<Eigen::Index>(blk) * kBlock;
      const Eigen::Index k1 = std::min(count, k0 + kBlock);
      std::vector<Complex<Scalar>> acc(static_cast<std::size_t>(k1 - k0), Complex<Scalar>(0));
      for (Eigen::Index i = 0; i < local_.size(); ++i) {
        const Scalar x = local_.positions()(0, i);
        Complex<Scalar> phase = std::polar(Scalar(1), Scalar(-2) * kPi<Scalar> * (lambda0 + Scalar(k0) * step) * x);
        const Complex<Scalar> rot = std::polar(Scalar(1), Scalar(-2) * kPi<Scalar> * step * x);
        Complex<Scalar> term = tapered_[i] * phase;
        for (Eigen::Index k = k0; k < k1; ++k) {
          acc[static_cast<std::size_t>(k - k0)] += term;
          term *= rot;
        }
      }
      for (Eigen::Index k = k0; k < k1; ++k)
        out[static_cast<std::size_t>(k)] = std::norm(acc[static_cast<std::size_t>(k - k0)] / norm_);
    });
    return out;
  }

 private:
  AtomicMeasure<Scalar> local_;
  Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1> tapered_;
  Scalar norm_;
};

/// Sub-boxes congruent to `small` spread evenly over `large`.
template <typename Scalar>
std::vector<Box<Scalar>> tiles(const Box<Scalar>& large, const Box<Scalar>& small) {
  const int d = large.dim();
  std::vector<std::vector<Scalar>> centers(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const Scalar ratio = large.half_widths()[i] / small.half_widths()[i];
    const auto m = std::max<long>(1, static_cast<long>(std::floor(ratio + Scalar(1e-9))));
    const Scalar span = large.half_widths()[i] - small.half_widths()[i];
    for (long j = 0; j < m; ++j)
      centers[static_cast<std::size_t>(i)].push_back(
          m == 1 ? large.center()[i] : large.center()[i] - span + Scalar(2 * j) * span / Scalar(m - 1));
  }
  std::vector<Box<Scalar>> out;
  for (Scalar c0 : centers[0]) {
    if (d == 1) {
      out.emplace_back(make_point<Scalar>({c0}), small.half_widths());
      continue;
    }
    for (Scalar c1 : centers[1]) out.emplace_back(make_point<Scalar>({c0, c1}), small.half_widths());
  }
  return out;
}

/// Maximizes f on [a, b] by golden-section search; returns {argmax, converged}.
template <typename Scalar, typename F>
std::pair<Scalar, bool> golden_section_max(const F& f, Scalar a, Scalar b, Scalar tol, int max_iter = 200) {
  const Scalar r = Scalar(1) / kGolden<Scalar>;
  Scalar c = b - r * (b - a), d = a + r * (b - a);
  Scalar fc = f(c), fd = f(d);
  int iter = 0;
  while (b - a > tol && iter++ < max_iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return {(a + b) / Scalar(2), b - a <= tol};
}

}  // namespace internal

/// I_B(lambda) = |B| |c_B(lambda)|^2 on every grid point.
template <typename Scalar>
SpectralEstimate<Scalar> diffraction_profile(const AtomicMeasure<Scalar>& omega, const Box<Scalar>& b,
                                             const ScanGrid<Scalar>& grid) {
  grid.validate();
  const auto local = restrict(omega, b);
  SpectralEstimate<Scalar> est;
  est.observable = "diffraction";
  est.grid.resize(static_cast<std::size_t>(grid.size()));
  est.values.resize(est.grid.size());
  parallel_for(est.grid.size(), [&](std::size_t k) {
    est.grid[k] = grid[static_cast<Eigen::Index>(k)];
    est.values[k] = b.volume() * std::norm(bragg_amplitude(local, b, est.grid[k]));
  });
  return est;
}

/// Two-scale peak search. Candidates are local maxima of the Hann-tapered
/// |c|^2 over B_{n_large} on the grid that dominate a +-1/diam(B_{n_small})
/// neighbourhood; each is refined by golden-section ascent. The small scale is
/// the mean tapered |c|^2 over copies of B_{n_small} tiling B_{n_large}.
/// With r the large to small ratio at a peak: bragg if r >= theta_bragg,
/// diffuse if r <= theta_diffuse margin |B_small| / |B_large|, undecided
/// otherwise. The two bands must not overlap.
/// lambda = 0 is always examined and listed first.
template <typename Scalar>
PeakList<Scalar> detect_peaks(const Patch<Scalar>& omega, const BoxSequence<Scalar>& seq, std::size_t n_small,
                              std::size_t n_large, const ScanGrid<Scalar>& grid,
                              const PeakThresholds<Scalar>& thresholds = {},
                              Scalar freq_tol = Scalar(kFrequencyTolerance)) {
  grid.validate();
  thresholds.validate();
  if (!(n_small < n_large)) throw PreconditionError("diffraction", "n_small must be below n_large");
  const Box<Scalar>& large = seq[n_large];
  const Box<Scalar>& small = seq[n_small];
  omega.require_covers(large, "diffraction");
  const int d = large.dim();
  if (grid.dim() != d) throw PreconditionError("diffraction", "scan grid dimension differs from the window");
  const Scalar width_large = large.diameter(0), width_small = small.diameter(0);
  if (grid.spacing > Scalar(1) / width_large)
    throw PreconditionError("diffraction", "scan spacing exceeds the peak width 1/diam(B_n_large)");
  // Diffuse mass scales like 1/|B|, so its two-scale ratio is about |B_small| / |B_large|.
  const Scalar volume_ratio = small.volume() / large.volume();
  const Scalar diffuse_band = thresholds.diffuse * thresholds.margin * volume_ratio;
  if (!(diffuse_band < thresholds.bragg))
    throw PreconditionError("diffraction", "B_n_small and B_n_large too close for the thresholds: need |B_small| / "
                                           "|B_large| < theta_bragg / (margin * theta_diffuse)");

  const internal::TaperedAmplitude<Scalar> amp_large(omega.measure, large);
  std::vector<internal::TaperedAmplitude<Scalar>> amp_small;
  for (const auto& tile : internal::tiles(large, small)) amp_small.emplace_back(omega.measure, tile);
  auto small_mean = [&](const Character<Scalar>& lambda) {
    Scalar s(0);
    for (const auto& a : amp_small) s += a.intensity(lambda);
    return s / Scalar(amp_small.size());
  };

  // Tapered intensity on the grid.
  std::vector<Scalar> values;
  if (d == 1) {
    values = amp_large.intensities_1d(grid.lower[0], grid.spacing, grid.count(0));
  } else {
    values.resize(static_cast<std::size_t>(grid.size()));
    parallel_for(values.size(), [&](std::size_t k) { values[k] = amp_large.intensity(grid[static_cast<Eigen::Index>(k)]); });
  }

  // Candidates: grid maxima dominating their +-1/width_small neighbourhood.
  const auto radius = static_cast<Eigen::Index>(std::ceil(Scalar(1) / (width_small * grid.spacing)));
  const Eigen::Index nx = grid.count(0), ny = d == 2 ? grid.count(1) : 1;
  std::vector<Eigen::Index> candidates;
  for (Eigen::Index iy = 0; iy < ny; ++iy) {
    for (Eigen::Index ix = 0; ix < nx; ++ix) {
      const Eigen::Index k = ix + nx * iy;
      const Scalar v = values[static_cast<std::size_t>(k)];
      if (!(v > Scalar(0))) continue;
      bool dominant = true;
      for (Eigen::Index jy = std::max<Eigen::Index>(0, iy - (d == 2 ? radius : 0));
           dominant && jy <= std::min(ny - 1, iy + (d == 2 ? radius : 0)); ++jy)
        for (Eigen::Index jx = std::max<Eigen::Index>(0, ix - radius); jx <= std::min(nx - 1, ix + radius); ++jx) {
          const Eigen::Index j = jx + nx * jy;
          const Scalar u = values[static_cast<std::size_t>(j)];
          if (u > v || (u == v && j < k)) {
            dominant = false;
            break;
          }
        }
      if (dominant) candidates.push_back(k);
    }
  }

  const Scalar lobe = Scalar(2) / width_large;
  // An ideal Hann lobe shifted by e has (I(+h) - I(-h)) / I(0) = 1.5 e W at h = 1/W.
  auto uncertainty = [&](const Character<Scalar>& lambda) {
    const Scalar centre = amp_large.intensity(lambda);
    Scalar u(0);
    for (int axis = 0; axis < d; ++axis) {
      const Scalar w = large.diameter(axis);
      Character<Scalar> up = lambda, down = lambda;
      up[axis] += Scalar(1) / w;
      down[axis] -= Scalar(1) / w;
      const Scalar asym = (amp_large.intensity(up) - amp_large.intensity(down)) / centre;
      u = std::max(u, std::abs(asym) / (Scalar(1.5) * w));
    }
    return u;
  };
  auto classify = [&](const Character<Scalar>& lambda, bool refined) {
    const Scalar tapered = amp_large.intensity(lambda);
    const Scalar reference = small_mean(lambda);
    PeakClass cls = PeakClass::undecided;
    if (tapered >= thresholds.bragg * reference)
      cls = PeakClass::bragg;
    else if (tapered <= diffuse_band * reference)
      cls = PeakClass::diffuse;
    const Scalar u = uncertainty(lambda);
    return Peak<Scalar>{lambda, std::norm(bragg_amplitude(omega.measure, large, lambda)), cls,
                        refined && u <= freq_tol, u};
  };

  std::vector<Peak<Scalar>> found(candidates.size());
  std::vector<char> keep(candidates.size(), 1);
  parallel_for(candidates.size(), [&](std::size_t c) {
    Character<Scalar> lambda = grid[candidates[c]];
    if (lambda.cwiseAbs().maxCoeff() < lobe) {
      keep[c] = 0;
      return;
    }
    bool refined = true;
    for (int sweep = 0; sweep < (d == 1 ? 1 : 3); ++sweep)
      for (int axis = 0; axis < d; ++axis) {
        auto f = [&](Scalar x) {
          Character<Scalar> l = lambda;
          l[axis] = x;
          return amp_large.intensity(l);
        };
        const auto [x, ok] = internal::golden_section_max(f, lambda[axis] - grid.spacing, lambda[axis] + grid.spacing,
                                                          freq_tol * Scalar(1e-3));
        refined = refined && ok && std::abs(x - lambda[axis]) < grid.spacing * Scalar(0.999);
        lambda[axis] = x;
      }
    found[c] = classify(lambda, refined);
  });

  std::vector<Peak<Scalar>> peaks;
  for (std::size_t c = 0; c < found.size(); ++c)
    if (keep[c]) peaks.push_back(found[c]);
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const auto& a, const auto& b) { return a.intensity > b.intensity; });
  std::vector<Peak<Scalar>> unique;
  for (const auto& p : peaks) {
    const bool duplicate = std::any_of(unique.begin(), unique.end(), [&](const auto& q) {
      return (p.frequency - q.frequency).cwiseAbs().maxCoeff() < Scalar(0.5) / width_large;
    });
    if (!duplicate) unique.push_back(p);
  }

  PeakList<Scalar> list;
  list.n_small = n_small;
  list.n_large = n_large;
  list.thresholds = thresholds;
  list.peaks.push_back(classify(Character<Scalar>::Zero(d), true));
  list.peaks.insert(list.peaks.end(), unique.begin(), unique.end());
  return list;
}

/// Atom of rho_{f_phi} at lambda: |phi^(lambda)|^2 times the diffraction atom.
template <typename Scalar>
Scalar observable_spectral_mass(const TestFunction<Scalar>& phi, const Character<Scalar>& lambda,
                                Scalar peak_intensity) {
  return std::norm(tent_fourier(phi, lambda)) * peak_intensity;
}

/// A(lambda) = (1 / |B|) integral_B conj((lambda, t)) f_phi(alpha_{-t} omega) dt
template <typename Scalar>
Complex<Scalar> eigen_average(const Patch<Scalar>& omega, const TestFunction<Scalar>& phi,
                              const Character<Scalar>& lambda, const Box<Scalar>& b,
                              Scalar tol = Scalar(kQuadratureTolerance)) {
  const auto h = Observable<Scalar>::sampling(phi);
  const Box<Scalar> need = b.expanded(h.reach());
  omega.require_covers(need, "diffraction");
  const auto local = restrict(omega.measure, need);
  auto f = [&](const Point<Scalar>& t) { return std::conj(character_pairing(lambda, t)) * h.on_orbit(local, t); };
  return integrate_box(f, b, internal::orbit_breakpoints(h, local, b), tol * b.volume()) / b.volume();
}

template <typename Scalar>
Complex<Scalar> eigen_average(const Patch<Scalar>& omega, const TestFunction<Scalar>& phi,
                              const Character<Scalar>& lambda, const BoxSequence<Scalar>& seq, std::size_t n,
                              Scalar tol = Scalar(kQuadratureTolerance)) {
  return eigen_average(omega, phi, lambda, seq[n], tol);
}

/// C_h(t) = (1 / |B|) integral_B conj(h(alpha_{-s} omega)) h(alpha_{-s-t} omega) ds
template <typename Scalar>
Complex<Scalar> orbit_autocovariance(const Patch<Scalar>& omega, const Observable<Scalar>& h, const Box<Scalar>& b,
                                     const Point<Scalar>& t, Scalar tol = Scalar(kQuadratureTolerance)) {
  const Box<Scalar> need = Box<Scalar>(b.center() + t / Scalar(2), b.half_widths() + t.cwiseAbs() / Scalar(2))
                               .expanded(h.reach());
  omega.require_covers(need, "diffraction");
  const auto local = restrict(omega.measure, need);
  auto f = [&](const Point<Scalar>& s) {
    return std::conj(h.on_orbit(local, s)) * h.on_orbit(local, Point<Scalar>(s + t));
  };
  std::vector<std::vector<Scalar>> bp;
  for (int i = 0; i < b.dim(); ++i) {
    auto own = h.orbit_breakpoints(local, i, b.lower(i), b.upper(i));
    for (Scalar x : h.orbit_breakpoints(local, i, b.lower(i) + t[i], b.upper(i) + t[i])) own.push_back(x - t[i]);
    bp.push_back(sorted_unique(std::move(own)));
  }
  return integrate_box(f, b, bp, tol * b.volume()) / b.volume();
}

template <typename Scalar>
Complex<Scalar> orbit_autocovariance(const Patch<Scalar>& omega, const Observable<Scalar>& h,
                                     const BoxSequence<Scalar>& seq, std::size_t n, const Point<Scalar>& t,
                                     Scalar tol = Scalar(kQuadratureTolerance)) {
  return orbit_autocovariance(omega, h, seq[n], t, tol);
}

/// C_h(k / m) for |k| <= range * m on B = [-n, n] (d = 1), from trapezoid
/// sums of the orbit sampled with spacing 1 / m, correlated by FFT.
template <typename Scalar>
std::vector<Complex<Scalar>> orbit_autocovariance_grid(const Patch<Scalar>& omega, const Observable<Scalar>& h,
                                                       Scalar n, Scalar range, int m) {
  if (omega.measure.dim() != 1) throw PreconditionError("diffraction", "sampled autocovariance is one-dimensional");
  if (m < 1) throw PreconditionError("diffraction", "samples per unit must be positive");
  const auto inner = static_cast<long>(std::llround(n * Scalar(m)));
  const auto lag = static_cast<long>(std::llround(range * Scalar(m)));
  if (std::abs(Scalar(inner) - n * Scalar(m)) > Scalar(1e-9) || std::abs(Scalar(lag) - range * Scalar(m)) > Scalar(1e-9))
    throw PreconditionError("diffraction", "n and range must be multiples of the sample spacing");
  omega.require_covers(Box<Scalar>::centered(1, n + range).expanded(h.reach()), "diffraction");
  const auto local = restrict(omega.measure, Box<Scalar>::centered(1, n + range).expanded(h.reach()));

  const long total = inner + lag;  // samples s_j = j / m, |j| <= total
  const auto count = static_cast<std::size_t>(2 * total + 1);
  std::vector<Complex<Scalar>> orbit(count);
  parallel_for(count, [&](std::size_t i) {
    Point<Scalar> s(1);
    s[0] = Scalar(static_cast<long>(i) - total) / Scalar(m);
    orbit[i] = h.on_orbit(local, s);
  });

  std::size_t fft_size = 1;
  while (fft_size < count + static_cast<std::size_t>(2 * lag + 1)) fft_size <<= 1;
  std::vector<Complex<Scalar>> a(fft_size, Complex<Scalar>(0)), b(fft_size, Complex<Scalar>(0));
  for (long j = -inner; j <= inner; ++j) {
    const Scalar weight = (j == -inner || j == inner) ? Scalar(0.5) : Scalar(1);
    a[static_cast<std::size_t>(j + total)] = weight * orbit[static_cast<std::size_t>(j + total)];
  }
  std::copy(orbit.begin(), orbit.end(), b.begin());
  Eigen::FFT<Scalar> fft;
  std::vector<Complex<Scalar>> fa, fb, prod(fft_size), corr;
  fft.fwd(fa, a);
  fft.fwd(fb, b);
  for (std::size_t i = 0; i < fft_size; ++i) prod[i] = std::conj(fa[i]) * fb[i];
  fft.inv(corr, prod);
  // corr[k] = sum_j conj(a_j) b_{j+k} (cyclic)
  std::vector<Complex<Scalar>> out(static_cast<std::size_t>(2 * lag + 1));
  const Scalar norm = Scalar(1) / Scalar(2 * inner);
  for (long k = -lag; k <= lag; ++k)
    out[static_cast<std::size_t>(k + lag)] =
        corr[static_cast<std::size_t>((k + static_cast<long>(fft_size)) % static_cast<long>(fft_size))] * norm;
  return out;
}

/// [sum over bragg peaks of |phi^(lambda)|^2 I(lambda)] / (phi~ * phi * gamma_n)(0)
template <typename Scalar>
Scalar pure_point_ratio(const AutocorrEstimate<Scalar>& gamma, const TestFunction<Scalar>& phi,
                        const PeakList<Scalar>& peaks, Scalar tol = Scalar(1e-12)) {
  const Scalar total = smoothed_autocorr(gamma, phi, phi, Point<Scalar>(Point<Scalar>::Zero(phi.dim()))).real();
  if (!(total > tol)) throw PreconditionError("diffraction", "total mass (phi~ * phi * gamma)(0) vanishes");
  Scalar mass(0);
  for (const auto& p : peaks.peaks)
    if (p.classification == PeakClass::bragg) mass += observable_spectral_mass(phi, p.frequency, p.intensity);
  return mass / total;
}

template <typename Scalar>
Scalar pure_point_ratio(const Patch<Scalar>& omega, const BoxSequence<Scalar>& seq, std::size_t n,
                        const TestFunction<Scalar>& phi, const PeakList<Scalar>& peaks) {
  omega.require_covers(seq[n], "diffraction");
  const Scalar reach = correlation_kernel(phi, phi).reach().maxCoeff();
  return pure_point_ratio(empirical_autocorr(omega.measure, seq[n], reach), phi, peaks);
}

}  // namespace ppdiff
