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

#include <gtest/gtest.h>

using namespace ppdiff;

namespace {

Box<double> cube(int d, double n) { return Box<double>::centered(d, n); }

}  // namespace

TEST(KBoundary, IntervalVolume) {
  for (int n = 2; n <= 40; n += 7) {
    const auto region = k_boundary(cube(1, n), cube(1, 1.0));
    EXPECT_DOUBLE_EQ(region.volume(), 4.0);
    EXPECT_TRUE(region.contains(make_point<double>({n + 0.5})));
    EXPECT_TRUE(region.contains(make_point<double>({-n + 0.5})));
    EXPECT_FALSE(region.contains(make_point<double>({0.0})));
  }
}

TEST(KBoundary, TrivialK) {
  const Box<double> origin(Point<double>::Zero(1), Point<double>::Zero(1));
  EXPECT_DOUBLE_EQ(k_boundary(cube(1, 5), origin).volume(), 0.0);
  EXPECT_DOUBLE_EQ(folner_ratio(cube(1, 5), origin), 0.0);
}

TEST(VanHove, RatioIsTwoOverN) {
  for (int n = 2; n <= 50; ++n) EXPECT_EQ(van_hove_ratio(cube(1, n), cube(1, 1.0)), 2.0 / n);
}

TEST(VanHove, PlaneRatio) {
  // |(B + K)| - |erosion| = (2n + 2)^2 - (2n - 2)^2 = 16 n
  for (int n = 2; n <= 20; n += 3) EXPECT_DOUBLE_EQ(van_hove_ratio(cube(2, n), cube(2, 1.0)), 16.0 * n / (4.0 * n * n));
}

TEST(Folner, IntervalAndPlane) {
  for (int n = 1; n <= 30; n += 4) {
    EXPECT_DOUBLE_EQ(folner_ratio(cube(1, n), cube(1, 1.0)), 1.0 / n);
    EXPECT_DOUBLE_EQ(folner_ratio(cube(2, n), cube(2, 1.0)), (8.0 * n + 4) / (4.0 * n * n));
  }
}

TEST(Tempered, CubesUpToTen) { EXPECT_DOUBLE_EQ(tempered_constant(BoxSequence<double>::cubes(1, 10)), 1.9); }

TEST(Tempered, CubesUpToFifty) { EXPECT_EQ(tempered_constant(BoxSequence<double>::cubes(1, 50)), 1.98); }

TEST(Tempered, SingleGrowth) { EXPECT_DOUBLE_EQ(tempered_ratio(BoxSequence<double>::cubes(1, 2), 2), 1.5); }

TEST(BoxSequence, RejectsNonIncreasing) {
  EXPECT_THROW(BoxSequence<double>({cube(1, 2), cube(1, 2)}), PreconditionError);
  EXPECT_THROW(BoxSequence<double>({cube(1, 2).translated(make_point<double>({1}))}), PreconditionError);
  EXPECT_THROW(BoxSequence<double>::cubes(1, 3)[4], PreconditionError);
}

TEST(Birkhoff, LatticeTentAverage) {
  const auto omega = generate_patch(GeneratorSpec{}, cube(1, 101));
  const auto h = Observable<double>::sampling(TestFunction<double>::tent(1, 0.5));
  EXPECT_NEAR(birkhoff_average(h, omega, cube(1, 100)).real(), 0.5, 1e-8);
}

TEST(Birkhoff, ConstantAndEmpty) {
  const auto omega = generate_patch(GeneratorSpec{}, cube(1, 11));
  EXPECT_NEAR(birkhoff_average(Observable<double>::constant(1, 3.0), omega, cube(1, 10)).real(), 3.0, 1e-12);
  const Patch<double> empty{AtomicMeasure<double>(1), cube(1, 20)};
  const auto h = Observable<double>::sampling(TestFunction<double>::tent(1, 0.5));
  EXPECT_EQ(birkhoff_average(h, empty, cube(1, 10)), Complex<double>(0));
}

TEST(Birkhoff, RequiresCoverage) {
  const auto omega = generate_patch(GeneratorSpec{}, cube(1, 10));
  const auto h = Observable<double>::sampling(TestFunction<double>::tent(1, 0.5));
  EXPECT_THROW(birkhoff_average(h, omega, cube(1, 10)), PreconditionError);
}

TEST(BoundaryTerm, BoundAndDecay) {
  const auto omega = generate_patch(GeneratorSpec{}, cube(1, 420));
  const auto h = Observable<double>::sampling(TestFunction<double>::tent(1, 0.5));
  const auto k = cube(1, 1.0);
  const double b100 = boundary_term(h, omega, cube(1, 100), k);
  const double b200 = boundary_term(h, omega, cube(1, 200), k);
  EXPECT_LE(b100, 2.0 / 100);
  EXPECT_GT(b100, 0.0);
  const double ratio = b200 / b100;
  EXPECT_GE(ratio, 0.4);
  EXPECT_LE(ratio, 0.6);
  const Patch<double> empty{AtomicMeasure<double>(1), cube(1, 420)};
  EXPECT_EQ(boundary_term(h, empty, cube(1, 100), k), 0.0);
}
