#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "dfcnn/error.hpp"
#include "dfcnn/model.hpp"
#include "test_support.hpp"

namespace dfcnn {
namespace {

const FittedModel& ramp_model() {
  static const FittedModel model = fit(TimeSeries::from_values(testing::ramp(100)), ModelConfig{});
  return model;
}

TEST(ModelConfig, DefaultsAndValidation) {
  const ModelConfig c;
  EXPECT_EQ(c.lookback, 2u);
  EXPECT_EQ(c.out, 2u);
  EXPECT_EQ(c.epochs, 100u);
  EXPECT_EQ(c.learning_rate, 1e-2);
  EXPECT_EQ(c.seed, 3407u);
  ModelConfig bad = c;
  bad.lookback = 0;
  EXPECT_THROW(bad.validate(), UsageError);
  bad = c;
  bad.learning_rate = -1.0;
  EXPECT_THROW(bad.validate(), UsageError);
}

TEST(Fit, RampLearnsConstantDiff) {
  const auto& m = ramp_model();
  ASSERT_EQ(m.loss_history().size(), 100u);
  EXPECT_LT(m.loss_history().back(), 1e-2);
  for (double l : m.loss_history()) EXPECT_TRUE(std::isfinite(l));
  EXPECT_LE(*std::min_element(m.loss_history().begin(), m.loss_history().end()),
            m.loss_history().front());
  EXPECT_EQ(m.params().norm.mode, NormMode::kInference);
}

TEST(Fit, GridComesFromTrainingDiffs) {
  const auto& m = ramp_model();
  // 99 identical diffs: degenerate domain around 1, m = 7.
  EXPECT_EQ(m.grid().left(), 0.0);
  EXPECT_EQ(m.grid().right(), 2.0);
  EXPECT_EQ(m.grid().m(), 7u);
  EXPECT_EQ(std::vector<double>(m.last_values().begin(), m.last_values().end()),
            (std::vector<double>{97, 98, 99}));
}

TEST(Fit, TooShortSeries) {
  EXPECT_THROW(fit(TimeSeries::from_values(testing::ramp(4)), ModelConfig{}), DataError);
  EXPECT_NO_THROW(fit(TimeSeries::from_values(testing::ramp(5)), ModelConfig{}));
}

TEST(Fit, BitIdenticalForSameSeed) {
  SplitMix64 rng(4);
  const auto s = TimeSeries::from_values(testing::random_walk(rng, 80));
  ModelConfig c;
  c.epochs = 30;
  EXPECT_TRUE(fit(s, c) == fit(s, c));
  ModelConfig other = c;
  other.seed = 1;
  EXPECT_FALSE(fit(s, c) == fit(s, other));
}

TEST(Fit, DivergenceIsANumericError) {
  std::vector<double> v;
  for (int t = 0; t < 40; ++t) v.push_back(t % 2 == 0 ? 1e154 : -1e154);
  ModelConfig c;
  c.learning_rate = 1e3;
  EXPECT_THROW(fit(TimeSeries::from_values(v), c), NumericError);
}

TEST(PredictNext, RampContinues) {
  const auto context = TimeSeries::from_values(testing::ramp(101));
  EXPECT_NEAR(predict_next(ramp_model(), context), 101.0, 0.1);
}

TEST(PredictNext, IgnoresTimeLabels) {
  const auto values = testing::ramp(101);
  std::vector<std::int64_t> times;
  for (std::size_t i = 0; i < values.size(); ++i) times.push_back(1000 + 7 * static_cast<std::int64_t>(i));
  const TimeSeries shifted(times, values);
  EXPECT_EQ(predict_next(ramp_model(), shifted),
            predict_next(ramp_model(), TimeSeries::from_values(values)));
}

TEST(PredictNext, NeedsLookbackPlusOneValues) {
  EXPECT_THROW(predict_next(ramp_model(), TimeSeries::from_values({1, 2})), DataError);
  EXPECT_NO_THROW(predict_next(ramp_model(), TimeSeries::from_values({1, 2, 3})));
}

TEST(Forecast, IteratesPredictNext) {
  const auto context = TimeSeries::from_values(testing::ramp(101));
  const auto one = forecast(ramp_model(), context, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], predict_next(ramp_model(), context));
  EXPECT_TRUE(forecast(ramp_model(), context, 0).empty());

  const auto three = forecast(ramp_model(), context, 3);
  ASSERT_EQ(three.size(), 3u);
  EXPECT_EQ(three[0], one[0]);
  std::vector<double> extended(context.values().begin(), context.values().end());
  extended.push_back(three[0]);
  EXPECT_EQ(three[1], predict_next(ramp_model(), extended));
}

TEST(Forecast, RampHorizonThree) {
  const auto f = forecast(ramp_model(), TimeSeries::from_values(testing::ramp(101)), 3);
  EXPECT_NEAR(f[0], 101.0, 0.5);
  EXPECT_NEAR(f[1], 102.0, 0.5);
  EXPECT_NEAR(f[2], 103.0, 0.5);
}

TEST(Forecast, ConstantSeriesStaysConstant) {
  const auto s = TimeSeries::from_values(std::vector<double>(60, 4.5));
  const auto m = fit(s, ModelConfig{});
  for (double f : forecast(m, s, 5)) EXPECT_NEAR(f, 4.5, 0.1);
}

TEST(Forecast, ShapeChainAcrossConfigurations) {
  SplitMix64 rng(10);
  const auto s = TimeSeries::from_values(testing::random_walk(rng, 40));
  for (std::size_t lookback = 1; lookback <= 10; lookback += 3) {
    for (std::size_t out = 1; out <= 10; out += 3) {
      ModelConfig c;
      c.lookback = lookback;
      c.out = out;
      c.epochs = 5;
      const auto m = fit(s, c);
      EXPECT_EQ(m.params().conv.kernels.size(), out * lookback * 3);
      EXPECT_EQ(forecast(m, s, 2).size(), 2u);
    }
  }
}

TEST(ModelIo, JsonRoundTripIsExact) {
  const auto& m = ramp_model();
  const FittedModel back = model_from_json(model_to_json(m));
  EXPECT_TRUE(back == m);
  const auto ctx = TimeSeries::from_values(testing::ramp(101));
  EXPECT_EQ(predict_next(back, ctx), predict_next(m, ctx));
}

TEST(ModelIo, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "dfcnn_model_io_test.json";
  save_model(ramp_model(), path);
  EXPECT_TRUE(load_model(path) == ramp_model());
  std::filesystem::remove(path);
  EXPECT_THROW(load_model(path), DataError);
}

TEST(ModelIo, RejectsMalformedDocuments) {
  EXPECT_THROW(model_from_json("not json"), DataError);
  EXPECT_THROW(model_from_json("{}"), DataError);
  std::string doc = model_to_json(ramp_model());
  const auto pos = doc.find("\"schema_version\": 1");
  ASSERT_NE(pos, std::string::npos);
  doc.replace(pos, 19, "\"schema_version\": 99");
  EXPECT_THROW(model_from_json(doc), DataError);
}

}  // namespace
}  // namespace dfcnn
