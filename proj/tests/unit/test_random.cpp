// Copyright 2026 The CenterTrack Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "centertrack/random.hpp"

namespace centertrack {
namespace {

TEST(Rng, EngineIsStandardMt19937_64) {
  // The C++ standard pins the 10000th output of a default-seeded mt19937_64.
  Rng rng(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(Rng, UniformUsesTop53Bits) {
  Rng rng(42);
  std::mt19937_64 ref(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    EXPECT_EQ(u, static_cast<double>(ref() >> 11) * 0x1.0p-53);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, Deterministic) {
  Rng a(7), b(7), c(8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.normal(), b.normal());
    differs |= a.uniform() != c.uniform();
    b.uniform();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, BelowIsBoundedAndCoversRange) {
  Rng rng(1);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (const int c : counts) EXPECT_NEAR(c, 10000, 500);
  EXPECT_THROW(rng.below(0), std::invalid_argument);
}

TEST(Rng, NormalMoments) {
  Rng rng(2);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal(1.0, 2.0);
    s += z;
    s2 += z * z;
  }
  const double mean = s / n, var = s2 / n - mean * mean;
  EXPECT_NEAR(mean, 1.0, 0.02);
  EXPECT_NEAR(var, 4.0, 0.06);
}

TEST(Rng, PoissonMean) {
  Rng rng(3);
  for (const double lambda : {0.0, 0.5, 3.0, 12.0}) {
    double s = 0;
    for (int i = 0; i < 50000; ++i) s += static_cast<double>(rng.poisson(lambda));
    EXPECT_NEAR(s / 50000, lambda, 0.05 + 0.02 * lambda);
  }
  EXPECT_THROW(rng.poisson(-1), std::invalid_argument);
}

TEST(Rng, SampleWithoutReplacement) {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(30), k = rng.below(n + 1);
    const auto s = rng.sample_without_replacement(n, k);
    ASSERT_EQ(s.size(), k);
    std::set<std::size_t> uniq(s.begin(), s.end());
    EXPECT_EQ(uniq.size(), k);
    for (const auto v : s) EXPECT_LT(v, n);
  }
  EXPECT_THROW(rng.sample_without_replacement(3, 4), std::invalid_argument);
  // Uniform over positions: first pick is each index equally often.
  std::vector<int> first(5, 0);
  for (int i = 0; i < 50000; ++i) ++first[rng.sample_without_replacement(5, 2)[0]];
  for (const int c : first) EXPECT_NEAR(c, 10000, 500);
}

}  // namespace
}  // namespace centertrack
