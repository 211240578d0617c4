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

#include "ppdiff/ppdiff.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace ppdiff;
using M = AtomicMeasure<double>;
using TF = TestFunction<double>;

namespace {

Point<double> p1(double x) { return make_point<double>({x}); }

M lattice(int lo, int hi) {
  std::vector<Atom<double>> atoms;
  for (int k = lo; k <= hi; ++k) atoms.push_back({p1(k), 1.0});
  return M(1, atoms);
}

}  // namespace

TEST(Pairing, DiracAtOrigin) { EXPECT_DOUBLE_EQ(pair(M::dirac(p1(0)), TF::tent(1, 1.0)).real(), 1.0); }

TEST(Pairing, TentVanishesAtSupportEdge) {
  const M mu(1, {{p1(1), 1.0}, {p1(-1), 1.0}});
  EXPECT_DOUBLE_EQ(std::abs(pair(mu, TF::tent(1, 1.0))), 0.0);
}

TEST(Pairing, OnlyOriginInsideNarrowTent) { EXPECT_DOUBLE_EQ(pair(lattice(-3, 3), TF::tent(1, 0.5)).real(), 1.0); }

TEST(Pairing, UsesReflectedArgument) {
  const TF shifted(p1(0.5), p1(1.0));  // tent of half-width 1/2 around 1
  EXPECT_DOUBLE_EQ(pair(M::dirac(p1(-1)), shifted).real(), 1.0);
  EXPECT_DOUBLE_EQ(std::abs(pair(M::dirac(p1(1)), shifted)), 0.0);
}

TEST(Translate, MovesAtoms) {
  const auto mu = translate(M::dirac(p1(0)), p1(2));
  EXPECT_EQ(mu, M::dirac(p1(2)));
}

TEST(Translate, GroupAction) {
  const M mu(1, {{p1(0.3), {1, 2}}, {p1(-4.1), 0.5}});
  EXPECT_TRUE(translate(translate(mu, p1(1.7)), p1(-1.7)).approx_equal(mu));
}

TEST(Translate, PairingOfTranslate) {
  // f_phi(alpha_{-t} mu) = sum w phi(t - x); the advanced test function carries it.
  const auto phi = TF::tent(1, 1.0);
  const auto mu = M::dirac(p1(1));
  const double t = 0.5;
  EXPECT_DOUBLE_EQ(pair(translate(mu, p1(-t)), phi).real(), 0.5);
  EXPECT_DOUBLE_EQ(pair(mu, phi.advanced(p1(t))).real(), 0.5);
}

TEST(Translate, PairingIdentityForRandomMeasures) {
  std::mt19937 eng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Atom<double>> atoms;
    for (int i = 0; i < 8; ++i) atoms.push_back({p1(u(eng)), {u(eng), u(eng)}});
    const M mu(1, atoms);
    const TF phi(p1(0.7 + trial * 0.05), p1(u(eng) / 3));
    const auto t = p1(u(eng));
    EXPECT_NEAR(std::abs(pair(translate(mu, Point<double>(-t)), phi) - pair(mu, phi.advanced(t))), 0.0, 1e-12);
  }
}

TEST(Reflect, ConjugatesWeights) {
  const auto r = reflect(M::dirac(p1(1), {0, 1}));
  EXPECT_EQ(r, M::dirac(p1(-1), {0, -1}));
}

TEST(Reflect, Involution) {
  const M mu(1, {{p1(0.3), {1, 2}}, {p1(-4.1), 0.5}});
  EXPECT_EQ(reflect(reflect(mu)), mu);
}

TEST(Reflect, PairingWithReflectedTent) {
  const M mu = M::dirac(p1(1), 2.0);
  const auto phi = TF::tent(1, 2.0);
  EXPECT_DOUBLE_EQ(pair(reflect(mu), phi).real(), 1.0);
  EXPECT_DOUBLE_EQ(std::conj(pair(mu, phi.reflected())).real(), 1.0);
}

TEST(Restrict, CountsLatticePoints) {
  const auto r = restrict(lattice(-5, 5), Box<double>::centered(1, 2.0));
  ASSERT_EQ(r.size(), 5);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(r.position(k)[0], k - 2);
}

TEST(Restrict, LargeWindowIsIdentity) {
  const auto mu = lattice(-5, 5);
  EXPECT_EQ(restrict(mu, Box<double>::centered(1, 10.0)), mu);
}

TEST(Restrict, ClosedBoundary) { EXPECT_EQ(restrict(M::dirac(p1(2)), Box<double>::centered(1, 2.0)).size(), 1); }

TEST(Convolve, Diracs) { EXPECT_EQ(convolve_atomic(M::dirac(p1(0.5)), M::dirac(p1(1.25))), M::dirac(p1(1.75))); }

TEST(Convolve, Binomial) {
  const M mu(1, {{p1(0), 1.0}, {p1(1), 1.0}});
  const auto c = convolve_atomic(mu, mu);
  ASSERT_EQ(c.size(), 3);
  EXPECT_DOUBLE_EQ(c.weight_at(p1(0)).real(), 1.0);
  EXPECT_DOUBLE_EQ(c.weight_at(p1(1)).real(), 2.0);
  EXPECT_DOUBLE_EQ(c.weight_at(p1(2)).real(), 1.0);
}

TEST(Convolve, ReflectedGoldenPair) {
  const double tau = kGolden<double>;
  const M mu(1, {{p1(0), 1.0}, {p1(tau), 1.0}});
  const auto c = convolve_atomic(reflect(mu), mu);
  ASSERT_EQ(c.size(), 3);
  EXPECT_DOUBLE_EQ(c.weight_at(p1(-tau)).real(), 1.0);
  EXPECT_DOUBLE_EQ(c.weight_at(p1(0)).real(), 2.0);
  EXPECT_DOUBLE_EQ(c.weight_at(p1(tau)).real(), 1.0);
}

TEST(Convolve, PairLimit) {
  const auto mu = lattice(-50, 50);
  EXPECT_THROW(convolve_atomic(mu, mu, 100), ResourceLimitError);
}

TEST(AtomicMeasure, MergesCloseAtoms) {
  const M mu(1, {{p1(1.0), 1.0}, {p1(1.0 + 1e-12), 2.0}, {p1(0.0), 1.0}});
  ASSERT_EQ(mu.size(), 2);
  EXPECT_DOUBLE_EQ(mu.weight_at(p1(1.0)).real(), 3.0);
  EXPECT_LT(mu.position(0)[0], mu.position(1)[0]);
}

TEST(AtomicMeasure, RejectsDimensionMismatch) {
  EXPECT_THROW(M(2, {{p1(0), 1.0}}), PreconditionError);
  EXPECT_THROW(M(3), PreconditionError);
}

TEST(TentFourier, ClosedForms) {
  EXPECT_DOUBLE_EQ(tent_fourier(TF::tent(1, 1.0), p1(0)).real(), 1.0);
  EXPECT_NEAR(tent_fourier(TF::tent(1, 0.5), p1(1)).real(), 2.0 / (oracle::pi * oracle::pi), 1e-15);
  EXPECT_NEAR(std::abs(tent_fourier(TF::tent(1, 1.0), p1(1))), 0.0, 1e-15);
}

TEST(TentFourier, MatchesQuadratureOracle) {
  for (double c : {0.0, 0.3, -1.2})
    for (double w : {0.25, 0.7, 2.0})
      for (double l : {0.0, 0.37, 1.0, 2.6}) {
        const auto got = tent_fourier(TF(p1(w), p1(c)), p1(l));
        EXPECT_NEAR(std::abs(got - oracle::tent_transform(c, w, l)), 0.0, 1e-10) << c << " " << w << " " << l;
      }
}

TEST(TentFourier, SeparableInTwoDimensions) {
  const TF phi(make_point<double>({0.5, 1.0}), make_point<double>({0.1, -0.2}));
  const auto l = make_point<double>({0.3, 0.8});
  const auto expected = oracle::tent_transform(0.1, 0.5, 0.3) * oracle::tent_transform(-0.2, 1.0, 0.8);
  EXPECT_NEAR(std::abs(tent_fourier(phi, l) - expected), 0.0, 1e-10);
}

TEST(TentConvolve, ValueAtZeroIsTwoThirdsWidth) {
  for (double w : {0.25, 0.5, 1.0, 3.0}) {
    const auto k = tent_convolve(TF::tent(1, w), TF::tent(1, w));
    EXPECT_NEAR(k(p1(0)).real(), 2.0 * w / 3.0, 1e-14);
    EXPECT_NEAR(k.support().lower(0), -2 * w, 1e-15);
    EXPECT_NEAR(k.support().upper(0), 2 * w, 1e-15);
    EXPECT_NEAR(std::abs(k(p1(2 * w))), 0.0, 1e-14);
  }
}

TEST(TentConvolve, MatchesQuadratureOracle) {
  const std::vector<std::array<double, 4>> cases{{0, 1, 0, 1}, {0.3, 0.5, -0.2, 1.5}, {1, 0.25, 2, 0.75}};
  for (const auto& [c1, w1, c2, w2] : cases) {
    const auto k = tent_convolve(TF(p1(w1), p1(c1)), TF(p1(w2), p1(c2)));
    for (double t = c1 + c2 - w1 - w2 - 0.1; t <= c1 + c2 + w1 + w2 + 0.1; t += 0.0371)
      EXPECT_NEAR(k(p1(t)).real(), oracle::tent_convolution(c1, w1, c2, w2, t), 1e-14) << t;
  }
}

TEST(TentConvolve, IntegralIsProductOfAreas) {
  const auto k = tent_convolve(TF::tent(1, 0.4), TF::tent(1, 1.3));
  EXPECT_NEAR(k.factors()[0].integral(), 0.4 * 1.3, 1e-14);
}

TEST(CorrelationKernel, IsReflectedConvolution) {
  const TF phi(p1(0.5), p1(0.3)), psi(p1(0.8), p1(-0.4));
  const auto k = correlation_kernel(phi, psi);
  for (double t = -2.0; t <= 2.0; t += 0.05) {
    const double expected = oracle::simpson(
        [&](double s) { return oracle::tent(s, 0.3, 0.5) * oracle::tent(s + t, -0.4, 0.8); }, -3.0, 3.0, 6000);
    EXPECT_NEAR(k(p1(t)).real(), expected, 1e-9) << t;
  }
}

TEST(Quadrature, ExactForPolynomialsAcrossBreakpoints) {
  auto f = [](double x) { return x < 0.3 ? 1 + x * x * x : 2 - x; };
  const double got = integrate_1d(f, -1.0, 2.0, std::vector<double>{0.3}, 1e-12);
  const double expected = (0.3 + std::pow(0.3, 4) / 4) - (-1 + 0.25) + (2 * 1.7 - (4 - 0.09) / 2);
  EXPECT_NEAR(got, expected, 1e-13);
}

TEST(Quadrature, SmoothIntegrandToTolerance) {
  const double got = integrate_1d([](double x) { return std::exp(std::sin(3 * x)); }, 0.0, 5.0, {}, 1e-10);
  EXPECT_NEAR(got, oracle::simpson([](double x) { return std::exp(std::sin(3 * x)); }, 0.0, 5.0, 200000), 1e-9);
}

TEST(Quadrature, BoxIntegral) {
  const auto b = Box<double>::from_bounds(make_point<double>({0, -1}), make_point<double>({1, 2}));
  auto f = [](const Point<double>& x) { return x[0] * x[1] * x[1]; };
  EXPECT_NEAR(integrate_box(f, b, {{}, {}}, 1e-12), 0.5 * 3.0, 1e-13);
}

TEST(Observable, ConstantAndSampling) {
  const auto mu = lattice(-3, 3);
  EXPECT_EQ(Observable<double>::constant(1, 2.5)(mu), Complex<double>(2.5));
  const auto f = Observable<double>::sampling(TF::tent(1, 0.5));
  EXPECT_DOUBLE_EQ(f(mu).real(), 1.0);
  EXPECT_DOUBLE_EQ(f.on_orbit(mu, p1(0.25)).real(), 0.5);
}

TEST(Observable, ComposedAndProduct) {
  const auto mu = lattice(-3, 3);
  const auto g = ScalarMap<double>::clamped_polynomial({0.0, 0.0, 4.0}, 0.0, 1.0);  // clamp(4x^2, 0, 1)
  const auto h = Observable<double>::composed(g, TF::tent(1, 0.5));
  EXPECT_DOUBLE_EQ(h.on_orbit(mu, p1(0.25)).real(), 1.0);
  EXPECT_DOUBLE_EQ(h.on_orbit(mu, p1(0.4)).real(), 4 * 0.2 * 0.2);
  const auto prod = h * Observable<double>::sampling(TF::tent(1, 0.5));
  EXPECT_DOUBLE_EQ(prod.on_orbit(mu, p1(0.4)).real(), 4 * 0.2 * 0.2 * 0.2);
}

TEST(Errors, CategoriesAndMessages) {
  const ConfigError e("generators", "p outside [0, 1]");
  EXPECT_EQ(e.category(), ErrorCategory::config);
  EXPECT_STREQ(e.what(), "generators: p outside [0, 1]");
  EXPECT_EQ(static_cast<int>(PreconditionError("x", "y").category()), 3);
  EXPECT_EQ(static_cast<int>(ResourceLimitError("x", "y").category()), 4);
}

TEST(Box, Arithmetic) {
  const auto b = Box<double>::centered(1, 2.0);
  const auto k = Box<double>::centered(1, 0.5);
  EXPECT_EQ(b + k, Box<double>::centered(1, 2.5));
  EXPECT_DOUBLE_EQ(intersection_volume(b, b.translated(p1(3))), 1.0);
  EXPECT_DOUBLE_EQ(box_difference(b, k).volume(), 3.0);
  EXPECT_DOUBLE_EQ(union_volume<double>({b, b.translated(p1(3))}), 7.0);
}
