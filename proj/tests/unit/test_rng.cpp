// Copyright 2026 The countgof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "countgof/rng.hpp"

namespace countgof {
namespace {

TEST(Philox, KnownAnswerZeroCounterZeroKey) {
  const auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerAllOnes) {
  const auto out = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                     {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out[0], 0x408f276du);
  EXPECT_EQ(out[1], 0x41c83b0eu);
  EXPECT_EQ(out[2], 0xa20bc7c6u);
  EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
  const auto out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                     {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out[0], 0xd16cfe09u);
  EXPECT_EQ(out[1], 0x94fdccebu);
  EXPECT_EQ(out[2], 0x5001e420u);
  EXPECT_EQ(out[3], 0x24126ea1u);
}

TEST(Philox, StreamsDiffer) {
  Philox4x32 a(42, 0), b(42, 1), c(42, 0);
  const auto x = a(), y = b(), z = c();
  EXPECT_NE(x, y);
  EXPECT_EQ(x, z);
}

TEST(DeriveSeed, DeterministicAndPathSensitive) {
  EXPECT_EQ(derive_seed(7, {1, 2}), derive_seed(7, {1, 2}));
  EXPECT_NE(derive_seed(7, {1, 2}), derive_seed(7, {2, 1}));
  EXPECT_NE(derive_seed(7, {1}), derive_seed(8, {1}));
  std::set<std::uint64_t> seen;
  for (std::uint64_t b = 0; b < 10000; ++b) seen.insert(derive_seed(1, {b}));
  EXPECT_EQ(seen.size(), 10000u);
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

template <class F>
Moments sample_moments(int n, F&& draw) {
  double s = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = draw();
    s += x;
    ss += x * x;
  }
  Moments m;
  m.mean = s / n;
  m.var = ss / n - m.mean * m.mean;
  return m;
}

TEST(Rng, UniformRangeAndMoments) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.uniform_open();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
  const int n = 200000;
  const auto m = sample_moments(n, [&] { return rng.uniform(); });
  EXPECT_NEAR(m.mean, 0.5, 4 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(m.var, 1.0 / 12, 0.002);
}

TEST(Rng, UniformIntCoversRangeUniformly) {
  Rng rng(5);
  std::vector<int> hits(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++hits[static_cast<std::size_t>(rng.uniform_int(0, 6))];
  for (int h : hits) EXPECT_NEAR(h, n / 7.0, 4 * std::sqrt(n / 7.0));
  EXPECT_EQ(rng.uniform_int(4, 4), 4);
}

TEST(Rng, NormalMoments) {
  Rng rng(11);
  const int n = 200000;
  const auto m = sample_moments(n, [&] { return rng.normal(); });
  EXPECT_NEAR(m.mean, 0.0, 4 / std::sqrt(n));
  EXPECT_NEAR(m.var, 1.0, 0.015);
}

TEST(Rng, GammaMoments) {
  Rng rng(13);
  for (double shape : {0.3, 1.0, 3.0, 25.0}) {
    const int n = 100000;
    const auto m = sample_moments(n, [&] { return rng.gamma(shape); });
    EXPECT_NEAR(m.mean, shape, 5 * std::sqrt(shape / n)) << shape;
    EXPECT_NEAR(m.var / shape, 1.0, 0.05) << shape;
  }
}

TEST(Rng, PoissonMomentsBothRegimes) {
  Rng rng(17);
  for (double mean : {0.05, 0.7, 4.0, 9.99, 10.0, 37.5, 400.0}) {
    const int n = 100000;
    const auto m = sample_moments(n, [&] { return static_cast<double>(rng.poisson(mean)); });
    EXPECT_NEAR(m.mean, mean, 5 * std::sqrt(mean / n)) << mean;
    EXPECT_NEAR(m.var / mean, 1.0, 0.04) << mean;
  }
}

TEST(Rng, PoissonPmfMatchesAtSmallMean) {
  Rng rng(19);
  const double mean = 2.5;
  const int n = 200000;
  std::vector<int> hist(30, 0);
  for (int i = 0; i < n; ++i) {
    const auto k = rng.poisson(mean);
    if (k < 30) ++hist[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k < 8; ++k) {
    const double p = std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
    EXPECT_NEAR(hist[static_cast<std::size_t>(k)] / double(n), p, 5 * std::sqrt(p * (1 - p) / n)) << k;
  }
}

TEST(Rng, PoissonPmfMatchesAtLargeMean) {
  Rng rng(23);
  const double mean = 30.0;
  const int n = 200000;
  std::vector<int> hist(100, 0);
  for (int i = 0; i < n; ++i) {
    const auto k = rng.poisson(mean);
    if (k < 100) ++hist[static_cast<std::size_t>(k)];
  }
  for (int k = 20; k < 41; ++k) {
    const double p = std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
    EXPECT_NEAR(hist[static_cast<std::size_t>(k)] / double(n), p, 5 * std::sqrt(p * (1 - p) / n)) << k;
  }
}

TEST(Rng, NegBinomialMeanAndVariance) {
  Rng rng(29);
  const double mean = 2.0, r = 3.0;
  const int n = 200000;
  const auto m = sample_moments(n, [&] { return static_cast<double>(rng.neg_binomial(mean, r)); });
  const double var = mean * (1 + mean / r);
  EXPECT_NEAR(m.mean, mean, 5 * std::sqrt(var / n));
  EXPECT_NEAR(m.var / var, 1.0, 0.04);
}

TEST(Rng, SameSeedSameSequence) {
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) {
    ASSERT_EQ(a.bits(), b.bits());
    ASSERT_EQ(a.poisson(3.0), b.poisson(3.0));
    ASSERT_EQ(a.normal(), b.normal());
  }
}

}  // namespace
}  // namespace countgof
