#include "dfcnn/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <thread>

#include "dfcnn/error.hpp"

namespace dfcnn {
namespace {

constexpr double kDefaultTrainRatio = 0.8;

// Runs task(i) for i in [0, n) on up to `threads` workers. Callers write
// results into pre-sized slots, so output order never depends on scheduling.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& task) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) task(i);
    });
  }
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SplitSpec resolve_split(const Dataset& dataset, const BenchConfig& config) {
  if (config.split) return *config.split;
  if (dataset.horizon) return SplitSpec::horizon(*dataset.horizon);
  return SplitSpec::ratio(kDefaultTrainRatio);
}

ConfigEcho make_echo(const BenchConfig& config, const SplitSpec& split) {
  ConfigEcho echo;
  echo.model = config.model;
  echo.chen_sigma = config.chen.sigma;
  echo.chen_interval_count = config.chen.interval_count;
  if (split.mode() == SplitSpec::Mode::kRatio) {
    echo.split_mode = "ratio";
    echo.split_ratio = split.train_ratio();
    echo.split_horizon = 0;
  } else {
    echo.split_mode = "horizon";
    echo.split_ratio = 0.0;
    echo.split_horizon = split.test_horizon();
  }
  for (Method m : config.methods) echo.methods.emplace_back(method_name(m));
  return echo;
}

std::vector<double> forecast_with(Method method, const TimeSeries& train, std::size_t horizon,
                                  const BenchConfig& config) {
  switch (method) {
    case Method::kDfcnn: {
      const FittedModel model = fit(train, config.model);
      return forecast(model, train, horizon);
    }
    case Method::kChen:
      return chen_forecast(chen_fit(train, config.chen), train.back(), horizon);
    case Method::kChenDiff:
      return chen_with_difference(train, config.chen, horizon);
    case Method::kNaive:
      return naive_baseline(train, horizon);
  }
  throw UsageError("unknown method");
}

void apply_flags_and_means(std::vector<MethodReport>& methods) {
  for (MethodReport& mr : methods) {
    std::vector<double> errs;
    std::vector<std::size_t> where;
    for (std::size_t i = 0; i < mr.per_series.size(); ++i) {
      if (mr.per_series[i].mae) {
        errs.push_back(*mr.per_series[i].mae);
        where.push_back(i);
      }
    }
    if (!errs.empty()) {
      double sum = 0.0;
      for (double e : errs) sum += e;
      mr.mean_mae = sum / static_cast<double>(errs.size());
    }
    if (errs.size() >= 2) {
      for (std::size_t k : zscore_outliers(errs)) mr.per_series[where[k]].flagged = true;
    }
  }
}

}  // namespace

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::kDfcnn:
      return "dfcnn";
    case Method::kChen:
      return "chen";
    case Method::kChenDiff:
      return "chen_diff";
    case Method::kNaive:
      return "naive";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  std::string valid;
  for (Method m : kAllMethods) {
    if (!valid.empty()) valid += ", ";
    valid += method_name(m);
  }
  throw UsageError("unknown method '" + std::string(name) + "' (valid: " + valid + ")");
}

std::vector<Method> parse_method_list(std::string_view list) {
  std::vector<Method> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    std::string_view item = list.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      const Method m = parse_method(item);
      if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw UsageError("method list is empty");
  return out;
}

double mae(std::span<const double> pred, std::span<const double> actual) {
  if (pred.size() != actual.size()) {
    throw ShapeError("mae: prediction and actual lengths differ (" + std::to_string(pred.size()) +
                     " vs " + std::to_string(actual.size()) + ")");
  }
  if (pred.empty()) throw ShapeError("mae: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) sum += std::abs(pred[i] - actual[i]);
  return sum / static_cast<double>(pred.size());
}

std::vector<double> naive_baseline(const TimeSeries& train, std::size_t horizon) {
  return std::vector<double>(horizon, train.back());
}

std::vector<std::size_t> zscore_outliers(std::span<const double> errors) {
  if (errors.size() < 2) throw DataError("z-test needs at least 2 errors");
  const double n = static_cast<double>(errors.size());
  double mu = 0.0;
  for (double e : errors) mu += e;
  mu /= n;
  double ss = 0.0;
  for (double e : errors) ss += (e - mu) * (e - mu);
  const double band = 3.0 * std::sqrt(ss / n);
  std::vector<std::size_t> flagged;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (std::abs(errors[i] - mu) > band) flagged.push_back(i);
  }
  return flagged;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("pearson: length mismatch");
  if (x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

void SweepRanges::validate() const {
  if (lookback_min == 0 || out_min == 0) throw UsageError("sweep ranges must start at 1 or above");
  if (lookback_min > lookback_max || out_min > out_max) {
    throw UsageError("sweep range minimum exceeds its maximum");
  }
}

EvalReport run_benchmark(const Dataset& dataset, const BenchConfig& config) {
  if (dataset.series.empty()) throw DataError("dataset '" + dataset.name + "' has no series");
  if (config.methods.empty()) throw UsageError("no methods selected");
  config.model.validate();
  config.chen.validate();
  const SplitSpec split = resolve_split(dataset, config);

  EvalReport report;
  report.dataset = dataset.name;
  report.config = make_echo(config, split);
  for (Method m : config.methods) {
    MethodReport mr;
    mr.name = std::string(method_name(m));
    mr.per_series.resize(dataset.series.size());
    report.methods.push_back(std::move(mr));
  }

  parallel_for(dataset.series.size(), config.parallel, [&](std::size_t s) {
    const NamedSeries& named = dataset.series[s];
    std::optional<std::pair<TimeSeries, TimeSeries>> parts;
    std::string split_error;
    try {
      parts = split_train_test(named.series, split, config.model.lookback);
    } catch (const Error& e) {
      split_error = e.what();
    }
    for (std::size_t k = 0; k < config.methods.size(); ++k) {
      SeriesScore& score = report.methods[k].per_series[s];
      score.id = named.id;
      if (!parts) {
        score.error = split_error;
        continue;
      }
      try {
        const auto& [train, test] = *parts;
        const auto pred = forecast_with(config.methods[k], train, test.size(), config);
        score.mae = mae(pred, test.values());
      } catch (const Error& e) {
        score.error = e.what();
      }
    }
  });

  apply_flags_and_means(report.methods);
  if (config.stamp_time) report.generated_at = utc_now();
  return report;
}

EvalReport sweep(const Dataset& dataset, const SweepRanges& ranges, const BenchConfig& config) {
  ranges.validate();
  if (dataset.series.empty()) throw DataError("dataset '" + dataset.name + "' has no series");
  config.model.validate();
  const SplitSpec split = resolve_split(dataset, config);

  SweepGrid grid;
  for (std::size_t lb = ranges.lookback_min; lb <= ranges.lookback_max; ++lb) {
    grid.lookbacks.push_back(lb);
  }
  for (std::size_t o = ranges.out_min; o <= ranges.out_max; ++o) grid.outs.push_back(o);
  grid.grid.assign(grid.lookbacks.size(),
                   std::vector<std::optional<double>>(grid.outs.size()));

  const std::size_t cells = grid.lookbacks.size() * grid.outs.size();
  parallel_for(cells, config.parallel, [&](std::size_t cell) {
    const std::size_t i = cell / grid.outs.size();
    const std::size_t j = cell % grid.outs.size();
    BenchConfig cell_config = config;
    cell_config.model.lookback = grid.lookbacks[i];
    cell_config.model.out = grid.outs[j];
    cell_config.methods = {Method::kDfcnn};
    cell_config.parallel = 1;
    cell_config.stamp_time = false;
    cell_config.split = split;
    grid.grid[i][j] = run_benchmark(dataset, cell_config).methods.front().mean_mae;
  });

  std::vector<double> lbs;
  std::vector<double> outs;
  std::vector<double> errs;
  for (std::size_t i = 0; i < grid.lookbacks.size(); ++i) {
    for (std::size_t j = 0; j < grid.outs.size(); ++j) {
      if (!grid.grid[i][j]) continue;
      lbs.push_back(static_cast<double>(grid.lookbacks[i]));
      outs.push_back(static_cast<double>(grid.outs[j]));
      errs.push_back(*grid.grid[i][j]);
    }
  }
  const auto corr_lb = pearson(lbs, errs);
  const auto corr_out = pearson(outs, errs);
  grid.corr_lookback_defined = corr_lb.has_value();
  grid.corr_out_defined = corr_out.has_value();
  grid.corr_lookback = corr_lb.value_or(0.0);
  grid.corr_out = corr_out.value_or(0.0);
  if (std::abs(grid.corr_lookback) > std::abs(grid.corr_out)) {
    grid.dominant = "lookback";
  } else if (std::abs(grid.corr_out) > std::abs(grid.corr_lookback)) {
    grid.dominant = "out";
  } else {
    grid.dominant = "undetermined";
  }

  BenchConfig echo_config = config;
  echo_config.methods = {Method::kDfcnn};
  EvalReport report;
  report.dataset = dataset.name;
  report.config = make_echo(echo_config, split);
  report.sweep = std::move(grid);
  if (config.stamp_time) report.generated_at = utc_now();
  return report;
}

}  // namespace dfcnn
