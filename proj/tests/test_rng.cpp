#include <gtest/gtest.h>

#include "poissonity/rng.hpp"

using poissonity::RngStream;

TEST(RngStream, SameSeedAndIndexReproduce) {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RngStream, DistinctIndicesDiverge) {
  RngStream a(42, 2);
  RngStream b(42, 3);
  RngStream c(43, 2);
  int same_ab = 0;
  int same_ac = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    same_ab += x == b.next_u64();
    same_ac += x == c.next_u64();
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(RngStream, HighSeedWordsMatter) {
  RngStream a(1, 0);
  RngStream b(1ull | (1ull << 40), 0);
  EXPECT_NE(a.next_u64(), b.next_u64());
}

TEST(RngStream, UniformRanges) {
  RngStream s(1, 1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    const double v = s.uniform_pos();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
    sum += u;
  }
  // Mean 1/2, standard error sqrt(1/12 / n).
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}
