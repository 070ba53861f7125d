#include <gtest/gtest.h>

#include <vector>

#include "aggrlim/error.hpp"
#include "aggrlim/time_grid.hpp"

using aggrlim::ConfigError;
using aggrlim::TimePoint;

TEST(TimePoint, ParsesForms) {
  EXPECT_EQ(TimePoint::parse("1/2"), (TimePoint{1, 2}));
  EXPECT_EQ(TimePoint::parse("2/4"), (TimePoint{1, 2}));
  EXPECT_EQ(TimePoint::parse("3"), (TimePoint{3, 1}));
  EXPECT_EQ(TimePoint::parse("0.25"), (TimePoint{1, 4}));
  EXPECT_EQ(TimePoint::parse("1e-1"), (TimePoint{1, 10}));
  EXPECT_EQ(TimePoint::parse("2.5E1"), (TimePoint{25, 1}));
  EXPECT_EQ(TimePoint::parse("0"), (TimePoint{0, 1}));
}

TEST(TimePoint, RejectsMalformed) {
  for (const char* bad : {"", "abc", "1/0", "-1", "1/2/3", "0.5x", "nan"})
    EXPECT_THROW(TimePoint::parse(bad), ConfigError) << bad;
  EXPECT_THROW(TimePoint::from_double(-0.5), ConfigError);
}

TEST(TimePoint, StepsUseExactFloor) {
  // 0.29 * 100 is 28.999999999999996 in binary floating point.
  EXPECT_EQ(TimePoint::from_double(0.29).steps(100), 29u);
  EXPECT_EQ(TimePoint::parse("1/3").steps(3), 1u);
  EXPECT_EQ(TimePoint::parse("1/3").steps(2), 0u);
  EXPECT_EQ(TimePoint::parse("3/2").steps(10000000000000000000ull), 15000000000000000000ull);
  EXPECT_THROW(TimePoint::parse("2").steps(10000000000000000000ull), ConfigError);
}

TEST(TimePoint, OrderingAndText) {
  EXPECT_LT(TimePoint::parse("1/3"), TimePoint::parse("0.34"));
  EXPECT_EQ(TimePoint::parse("0.5").to_string(), "1/2");
  EXPECT_EQ(TimePoint::parse(TimePoint{7, 3}.to_string()), (TimePoint{7, 3}));
}

TEST(Grid, Validation) {
  const std::vector<TimePoint> ok = {{0, 1}, {1, 2}, {1, 1}};
  EXPECT_NO_THROW(aggrlim::validate_grid(ok));
  EXPECT_EQ(aggrlim::grid_steps(ok, 10), (std::vector<std::uint64_t>{0, 5, 10}));
  EXPECT_THROW(aggrlim::validate_grid(std::vector<TimePoint>{}), ConfigError);
  const std::vector<TimePoint> dup = {{1, 2}, {2, 4}};
  EXPECT_THROW(aggrlim::validate_grid(dup), ConfigError);
}
