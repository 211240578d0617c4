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

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace ppdiff {

enum class GeneratorKind { lattice, bernoulli_lattice, random_displacement, poisson, fibonacci };

inline const char* to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::lattice: return "lattice";
    case GeneratorKind::bernoulli_lattice: return "bernoulli_lattice";
    case GeneratorKind::random_displacement: return "random_displacement";
    case GeneratorKind::poisson: return "poisson";
    case GeneratorKind::fibonacci: return "fibonacci";
  }
  return "unknown";
}

inline GeneratorKind generator_kind_from_string(const std::string& s) {
  for (auto k : {GeneratorKind::lattice, GeneratorKind::bernoulli_lattice, GeneratorKind::random_displacement,
                 GeneratorKind::poisson, GeneratorKind::fibonacci})
    if (s == to_string(k)) return k;
  if (s == "bernoulli") return GeneratorKind::bernoulli_lattice;
  throw ConfigError("generators", "unknown generator kind '" + s + "'");
}

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::lattice;
  int dim = 1;
  double a = 1.0;    ///< lattice spacing
  double p = 0.5;    ///< occupation probability
  double eta = 0.0;  ///< displacement half-width, clamped below a/2
  double rho = 1.0;  ///< Poisson intensity
  std::uint64_t seed = 0;

  void validate() const {
    if (dim < 1 || dim > 2) throw ConfigError("generators", "dim must be 1 or 2");
    if (kind == GeneratorKind::fibonacci && dim != 1)
      throw ConfigError("generators", "fibonacci generator requires dim = 1");
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("generators", "p outside [0, 1]");
    if (!(a > 2.0 * kMergeTolerance)) throw ConfigError("generators", "spacing a must exceed twice the merge tolerance");
    if (!(eta >= 0.0)) throw ConfigError("generators", "eta must be nonnegative");
    if (!(rho > 0.0)) throw ConfigError("generators", "rho must be positive");
  }

  /// Displacement half-width actually used: strictly below a/2 so sites stay distinct.
  double effective_eta() const { return std::min(eta, 0.5 * a * (1.0 - 1e-6)); }
};

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Hash of (seed, stream, integer site coordinates).
inline std::uint64_t site_hash(std::uint64_t seed, std::uint64_t stream, const std::int64_t* site, int dim) {
  std::uint64_t h = mix64(seed ^ mix64(stream));
  for (int i = 0; i < dim; ++i) h = mix64(h ^ static_cast<std::uint64_t>(site[i]) * 0xd1342543de82ef95ULL);
  return h;
}

/// Counter-based engine: a splitmix64 stream started at a site hash, so the
/// draws of a site never depend on which other sites were generated.
class SiteEngine {
 public:
  using result_type = std::uint64_t;
  explicit SiteEngine(std::uint64_t state) : state_(state) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

namespace internal {

enum Stream : std::uint64_t { kOccupation = 1, kDisplacement = 2, kPoissonCell = 3 };

/// Calls f(site) for every integer site k with k*a in [lo - pad, hi + pad] per axis.
template <typename Scalar, typename F>
void for_each_site(const Box<Scalar>& window, double a, double pad, F&& f) {
  const int d = window.dim();
  std::int64_t lo[2] = {0, 0}, hi[2] = {0, 0};
  for (int i = 0; i < d; ++i) {
    lo[i] = static_cast<std::int64_t>(std::floor((static_cast<double>(window.lower(i)) - pad) / a)) - 1;
    hi[i] = static_cast<std::int64_t>(std::ceil((static_cast<double>(window.upper(i)) + pad) / a)) + 1;
  }
  std::int64_t k[2] = {0, 0};
  for (k[0] = lo[0]; k[0] <= hi[0]; ++k[0]) {
    if (d == 1) {
      f(k);
      continue;
    }
    for (k[1] = lo[1]; k[1] <= hi[1]; ++k[1]) f(k);
  }
}

}  // namespace internal

/// Realization omega of the system described by `spec`, restricted to the
/// closed window. Randomness is hashed per site (or per unit cell), so the
/// output on a window never depends on how large a window was requested.
template <typename Scalar = double>
AtomicMeasure<Scalar> generate(const GeneratorSpec& spec, const Box<Scalar>& window) {
  spec.validate();
  if (window.dim() != spec.dim) throw PreconditionError("generators", "window dimension differs from spec dim");
  if (!(window.volume() > Scalar(0))) throw PreconditionError("generators", "window volume must be positive");
  const int d = spec.dim;
  std::vector<Atom<Scalar>> atoms;
  auto emit = [&](const Point<Scalar>& x) {
    if (window.contains(x)) atoms.push_back({x, Complex<Scalar>(1)});
  };
  auto lattice_point = [&](const std::int64_t* k) {
    Point<Scalar> x(d);
    for (int i = 0; i < d; ++i) x[i] = Scalar(spec.a) * Scalar(k[i]);
    return x;
  };

  switch (spec.kind) {
    case GeneratorKind::lattice:
      internal::for_each_site(window, spec.a, 0.0, [&](const std::int64_t* k) { emit(lattice_point(k)); });
      break;
    case GeneratorKind::bernoulli_lattice:
      internal::for_each_site(window, spec.a, 0.0, [&](const std::int64_t* k) {
        SiteEngine eng(site_hash(spec.seed, internal::kOccupation, k, d));
        if (eng.uniform() < spec.p) emit(lattice_point(k));
      });
      break;
    case GeneratorKind::random_displacement: {
      const double eta = spec.effective_eta();
      internal::for_each_site(window, spec.a, eta, [&](const std::int64_t* k) {
        SiteEngine eng(site_hash(spec.seed, internal::kDisplacement, k, d));
        Point<Scalar> x = lattice_point(k);
        for (int i = 0; i < d; ++i) x[i] += Scalar(eta * (2.0 * eng.uniform() - 1.0));
        emit(x);
      });
      break;
    }
    case GeneratorKind::poisson:
      internal::for_each_site(window, 1.0, 0.0, [&](const std::int64_t* k) {
        SiteEngine eng(site_hash(spec.seed, internal::kPoissonCell, k, d));
        std::poisson_distribution<int> count(spec.rho);
        const int n = count(eng);
        for (int j = 0; j < n; ++j) {
          Point<Scalar> x(d);
          for (int i = 0; i < d; ++i) x[i] = Scalar(k[i]) + Scalar(eng.uniform());
          emit(x);
        }
      });
      break;
    case GeneratorKind::fibonacci: {
      // {m + n tau : m - n / tau in [-1/tau, 1)}
      const Scalar tau = kGolden<Scalar>;
      const Scalar inv_tau = Scalar(1) / tau;
      const Scalar sqrt5 = tau + inv_tau;
      const auto n_lo = static_cast<std::int64_t>(std::floor((window.lower(0) - Scalar(1)) / sqrt5)) - 1;
      const auto n_hi = static_cast<std::int64_t>(std::ceil((window.upper(0) + inv_tau) / sqrt5)) + 1;
      for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        const Scalar base = Scalar(n) * inv_tau;
        for (auto m = static_cast<std::int64_t>(std::floor(base - inv_tau)) - 1;; ++m) {
          const Scalar internal_coord = Scalar(m) - base;
          if (internal_coord >= Scalar(1)) break;
          if (internal_coord < -inv_tau) continue;
          Point<Scalar> x(1);
          x[0] = Scalar(m) + Scalar(n) * tau;
          emit(x);
        }
      }
      break;
    }
  }
  return AtomicMeasure<Scalar>(d, std::move(atoms));
}

/// Generates a patch whose data window is exactly `window`.
template <typename Scalar = double>
Patch<Scalar> generate_patch(const GeneratorSpec& spec, const Box<Scalar>& window) {
  return Patch<Scalar>{generate(spec, window), window};
}

/// restrict(generate(spec, big), small) == generate(spec, small), atom for atom.
template <typename Scalar = double>
bool restriction_consistency_check(const GeneratorSpec& spec, const Box<Scalar>& small, const Box<Scalar>& big) {
  if (!big.contains(small)) throw PreconditionError("generators", "small window must lie inside big window");
  return restrict(generate(spec, big), small) == generate(spec, small);
}

}  // namespace ppdiff
