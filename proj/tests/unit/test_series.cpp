#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "dfcnn/error.hpp"
#include "dfcnn/series.hpp"
#include "test_support.hpp"

namespace dfcnn {
namespace {

TEST(TimeSeries, RejectsEmptyNonFiniteAndUnorderedInput) {
  EXPECT_THROW(TimeSeries::from_values({}), DataError);
  EXPECT_THROW(TimeSeries::from_values({1.0, std::nan("")}), NumericError);
  EXPECT_THROW(TimeSeries::from_values({1.0, std::numeric_limits<double>::infinity()}),
               NumericError);
  EXPECT_THROW(TimeSeries({0, 2, 2}, {1.0, 2.0, 3.0}), DataError);
  EXPECT_THROW(TimeSeries({0, 1}, {1.0}), DataError);
}

TEST(TimeSeries, FromValuesUsesZeroBasedIndices) {
  const auto s = TimeSeries::from_values({4.0, 5.0, 6.0});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.times()[0], 0);
  EXPECT_EQ(s.times()[2], 2);
  EXPECT_EQ(s.time_kind(), TimeKind::kIndex);
  EXPECT_EQ(s.back(), 6.0);
}

TEST(TimeSeries, NextTimeContinuesTheLastStep) {
  const TimeSeries s({10, 20, 35}, {1.0, 2.0, 3.0});
  EXPECT_EQ(s.next_time(35), 50);
  EXPECT_EQ(TimeSeries::from_values({1.0}).next_time(0), 1);
}

TEST(TimeSeries, FormatsDatesAndDateTimes) {
  EXPECT_EQ(format_time(42, TimeKind::kIndex), "42");
  EXPECT_EQ(format_time(0, TimeKind::kDate), "1970-01-01");
  EXPECT_EQ(format_time(951782400, TimeKind::kDate), "2000-02-29");
  EXPECT_EQ(format_time(951782400 + 3723, TimeKind::kDateTime), "2000-02-29T01:02:03Z");
}

TEST(TimeSeries, SliceKeepsTimesAndKind) {
  const TimeSeries s({5, 6, 7, 8}, {1.0, 2.0, 3.0, 4.0});
  const TimeSeries tail = s.slice(2, 2);
  EXPECT_EQ(tail.times()[0], 7);
  EXPECT_EQ(tail.values()[1], 4.0);
  EXPECT_THROW(s.slice(3, 2), DataError);
}

TEST(Difference, WorkedExample) {
  const auto d = difference(TimeSeries::from_values({2, 3, 5, 6, 4, 7}));
  EXPECT_EQ(d.head, 2.0);
  EXPECT_EQ(d.diffs, (std::vector<double>{1, 2, 1, -2, 3}));
}

TEST(Difference, ConstantSeriesGivesZeros) {
  const auto d = difference(TimeSeries::from_values({5, 5, 5}));
  EXPECT_EQ(d.head, 5.0);
  EXPECT_EQ(d.diffs, (std::vector<double>{0, 0}));
}

TEST(Difference, SingleValueIsAnError) {
  EXPECT_THROW(difference(TimeSeries::from_values({7})), DataError);
}

TEST(Difference, LinearTrendBecomesConstant) {
  std::vector<double> v;
  for (int t = 0; t < 50; ++t) v.push_back(3.0 * t - 7.0);
  for (double d : difference(v).diffs) EXPECT_EQ(d, 3.0);
}

TEST(Recover, AddsDiffToLastValue) {
  EXPECT_EQ(recover(1.0, 10.0), 11.0);
  EXPECT_EQ(recover(0.0, -3.25), -3.25);
  EXPECT_THROW(recover(std::nan(""), 1.0), NumericError);
  EXPECT_THROW(recover(1.0, std::numeric_limits<double>::infinity()), NumericError);
}

TEST(Recover, InvertsEachDifference) {
  SplitMix64 rng(11);
  const auto v = testing::random_walk(rng, 40);
  const auto d = difference(v);
  for (std::size_t k = 0; k < d.diffs.size(); ++k) {
    EXPECT_NEAR(recover(d.diffs[k], v[k]), v[k + 1], 1e-12 * std::max(1.0, std::abs(v[k + 1])));
  }
}

TEST(Recover, IntegrateRoundTripsRandomSeries) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = testing::random_walk(rng, testing::uniform_index(rng, 2, 300), 1000.0);
    const auto back = integrate(difference(v));
    ASSERT_EQ(back.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_LE(std::abs(back[i] - v[i]), 1e-12 * std::max(1.0, std::abs(v[i])));
    }
  }
}

TEST(SlidingWindows, Examples) {
  const auto w = sliding_windows(std::vector<double>{1, 2, 3, 4}, 2);
  ASSERT_EQ(w.count(), 2u);
  EXPECT_EQ(std::vector<double>(w.window(0).begin(), w.window(0).end()),
            (std::vector<double>{1, 2}));
  EXPECT_EQ(std::vector<double>(w.window(1).begin(), w.window(1).end()),
            (std::vector<double>{2, 3}));
  EXPECT_EQ(std::vector<double>(w.targets().begin(), w.targets().end()),
            (std::vector<double>{3, 4}));

  EXPECT_THROW(sliding_windows(std::vector<double>{1, 2}, 2), DataError);
  EXPECT_THROW(sliding_windows(std::vector<double>{1, 2}, 0), UsageError);

  const auto one = sliding_windows(std::vector<double>{7, 8, 9}, 1);
  ASSERT_EQ(one.count(), 2u);
  EXPECT_EQ(one.window(0)[0], 7.0);
  EXPECT_EQ(one.window(1)[0], 8.0);
  EXPECT_EQ(one.targets()[0], 8.0);
  EXPECT_EQ(one.targets()[1], 9.0);
}

TEST(SlidingWindows, CountAndAlignmentProperty) {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t lookback = testing::uniform_index(rng, 1, 12);
    const std::size_t len = testing::uniform_index(rng, lookback + 1, 80);
    const auto diffs = testing::random_walk(rng, len);
    const auto w = sliding_windows(diffs, lookback);
    ASSERT_EQ(w.count(), len - lookback);
    for (std::size_t i = 0; i < w.count(); ++i) {
      for (std::size_t j = 0; j < lookback; ++j) ASSERT_EQ(w.window(i)[j], diffs[i + j]);
      ASSERT_EQ(w.targets()[i], diffs[i + lookback]);
    }
  }
}

TEST(Split, RatioUsesFloor) {
  const auto s = TimeSeries::from_values(testing::ramp(295));
  const auto [train, test] = split_train_test(s, SplitSpec::ratio(0.8), 2);
  EXPECT_EQ(train.size(), 236u);
  EXPECT_EQ(test.size(), 59u);
  EXPECT_EQ(test.times()[0], 236);
}

TEST(Split, HorizonReservesTail) {
  const auto s = TimeSeries::from_values(testing::ramp(10));
  const auto [train, test] = split_train_test(s, SplitSpec::horizon(2), 2);
  EXPECT_EQ(train.size(), 8u);
  EXPECT_EQ(test.size(), 2u);
  EXPECT_EQ(test.values()[0], 8.0);
}

TEST(Split, TooShortIsAnError) {
  EXPECT_THROW(split_train_test(TimeSeries::from_values({1, 2, 3}), SplitSpec::ratio(0.8), 2),
               DataError);
  EXPECT_THROW(split_train_test(TimeSeries::from_values(testing::ramp(10)),
                                SplitSpec::horizon(10), 1),
               DataError);
}

TEST(Split, InvalidSpecs) {
  EXPECT_THROW(SplitSpec::ratio(0.0), UsageError);
  EXPECT_THROW(SplitSpec::ratio(1.0), UsageError);
  EXPECT_THROW(SplitSpec::horizon(0), UsageError);
}

TEST(Split, PartsAreContiguous) {
  const auto s = TimeSeries::from_values(testing::ramp(37));
  const auto [train, test] = split_train_test(s, SplitSpec::ratio(0.7), 3);
  EXPECT_EQ(train.size() + test.size(), 37u);
  EXPECT_EQ(train.back() + 1.0, test.values()[0]);
}

}  // namespace
}  // namespace dfcnn
