#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "aggrlim/rng.hpp"

using aggrlim::Philox4x32;
using aggrlim::RngStream;

// Known-answer vectors from the Random123 distribution (philox4x32, 10 rounds).
TEST(Philox, KnownAnswerZero) {
  const auto out = Philox4x32::apply({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = Philox4x32::apply({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                     {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
  const auto out = Philox4x32::apply({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                     {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RngStream, SameIdSameSequence) {
  RngStream a(42, 3, 7), b(42, 3, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RngStream, DistinctIdsDiffer) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t r = 0; r < 16; ++r)
    for (std::uint64_t c = 0; c < 16; ++c) firsts.insert(RngStream(1, r, c).next_u64());
  firsts.insert(RngStream(2, 0, 0).next_u64());
  EXPECT_EQ(firsts.size(), 16u * 16u + 1u);
}

TEST(RngStream, UniformRange) {
  RngStream s(9, 0, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = s.uniform_open();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

TEST(RngStream, UniformChiSquare) {
  RngStream s(5, 1, 2);
  constexpr int kBins = 64;
  constexpr int kDraws = 640000;
  std::vector<int> counts(kBins, 0);
  for (int i = 0; i < kDraws; ++i) ++counts[static_cast<int>(s.uniform() * kBins)];
  double chi2 = 0.0;
  const double expected = static_cast<double>(kDraws) / kBins;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 63 degrees of freedom; 0.999 quantile is about 103.4.
  EXPECT_LT(chi2, 103.4);
}

TEST(RngStream, NormalMoments) {
  RngStream s(11, 0, 0);
  constexpr int kDraws = 400000;
  double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double z = s.normal();
    sum += z;
    sum2 += z * z;
    sum4 += z * z * z * z;
  }
  EXPECT_NEAR(sum / kDraws, 0.0, 4.0 / std::sqrt(kDraws));
  EXPECT_NEAR(sum2 / kDraws, 1.0, 4.0 * std::sqrt(2.0 / kDraws));
  EXPECT_NEAR(sum4 / kDraws, 3.0, 4.0 * std::sqrt(96.0 / kDraws));
}

TEST(RngStream, WorksWithStdAlgorithms) {
  std::vector<int> v(100);
  for (int i = 0; i < 100; ++i) v[i] = i;
  RngStream s(3, 0, 0);
  std::shuffle(v.begin(), v.end(), s);
  std::sort(v.begin(), v.end());
  for (int i = 0; i < 100; ++i) EXPECT_EQ(v[i], i);
}

TEST(Mix64, IsInjectiveOnSample) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(aggrlim::mix64(i));
  EXPECT_EQ(seen.size(), 10000u);
}
