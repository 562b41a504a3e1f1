#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "dfcnn/dataset.hpp"
#include "dfcnn/error.hpp"
#include "dfcnn/eval.hpp"
#include "dfcnn/model.hpp"
#include "dfcnn/report.hpp"
#include "json.hpp"

namespace dfcnn::cli {
namespace {

std::string normalize_key(std::string key) {
  for (char& c : key) {
    if (c == '-') c = '_';
  }
  return key;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

KeyValues parse_json_config(std::string_view text, std::string_view source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string(source) + ": invalid JSON config: " + e.what());
  }
  if (!doc.is_object()) throw UsageError(std::string(source) + ": JSON config must be an object");
  KeyValues kv;
  for (const auto& [key, value] : doc.items()) {
    std::string text_value;
    if (value.is_string()) {
      text_value = value.get<std::string>();
    } else if (value.is_number_integer() || value.is_number_unsigned() || value.is_boolean()) {
      text_value = value.dump();
    } else if (value.is_number_float()) {
      text_value = format_double(value.get<double>());
    } else if (value.is_array()) {
      for (const auto& item : value) {
        if (!item.is_string()) {
          throw UsageError(std::string(source) + ": key '" + key + "' must hold strings");
        }
        if (!text_value.empty()) text_value += ',';
        text_value += item.get<std::string>();
      }
    } else {
      throw UsageError(std::string(source) + ": key '" + key + "' has an unsupported value type");
    }
    kv[normalize_key(key)] = text_value;
  }
  return kv;
}

KeyValues parse_flat_config(std::string_view text, std::string_view source) {
  KeyValues kv;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(std::string(source) + ": line " + std::to_string(line_no) +
                       ": expected key = value");
    }
    const std::string key = normalize_key(std::string(trim(body.substr(0, eq))));
    if (key.empty()) {
      throw UsageError(std::string(source) + ": line " + std::to_string(line_no) + ": empty key");
    }
    kv[key] = std::string(trim(body.substr(eq + 1)));
  }
  return kv;
}

template <typename T>
T parse_integer(std::string_view text, std::string_view what) {
  T value{};
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw UsageError(std::string(what) + ": expected a non-negative integer, got '" +
                     std::string(text) + "'");
  }
  return value;
}

double parse_real(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
    throw UsageError(std::string(what) + ": expected a finite number, got '" + std::string(text) +
                     "'");
  }
  return value;
}

bool parse_bool(std::string_view text, std::string_view what) {
  const auto t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw UsageError(std::string(what) + ": expected true or false, got '" + std::string(text) + "'");
}

enum class Source { kNone, kDefault, kEnv, kFile, kFlag };

// Option values merged from flags, the config file, the environment and defaults.
class Settings {
 public:
  explicit Settings(CLI::App* app) : app_(app) {}

  void add(const std::string& key, const std::string& flags, const std::string& help,
           const std::string& default_text = {}, const std::string& type = "TEXT") {
    Entry& e = entries_[key];
    e.default_text = default_text;
    e.option = app_->add_option(flags, e.value, help)->type_name(type);
    if (!default_text.empty()) e.option->default_str(default_text);
  }

  void add_switch(const std::string& key, const std::string& flags, const std::string& help,
                  bool flag_value) {
    Entry& e = entries_[key];
    e.switch_value = flag_value;
    e.default_text = flag_value ? "false" : "true";
    e.option = app_->add_flag(flags, help);
  }

  void add_env(const std::string& key, const char* variable) { entries_.at(key).env = variable; }

  void set_file(KeyValues kv) { file_ = std::move(kv); }

  [[nodiscard]] bool knows(const std::string& key) const { return entries_.contains(key); }

  [[nodiscard]] Source source(const std::string& key) const {
    const Entry& e = entries_.at(key);
    if (e.option->count() > 0) return Source::kFlag;
    if (file_.contains(key)) return Source::kFile;
    if (!e.env.empty() && std::getenv(e.env.c_str()) != nullptr) return Source::kEnv;
    if (!e.default_text.empty()) return Source::kDefault;
    return Source::kNone;
  }

  [[nodiscard]] std::optional<std::string> get(const std::string& key) const {
    const Entry& e = entries_.at(key);
    switch (source(key)) {
      case Source::kFlag:
        if (e.switch_value) return *e.switch_value ? "true" : "false";
        return e.value;
      case Source::kFile:
        return file_.at(key);
      case Source::kEnv:
        return std::string(std::getenv(e.env.c_str()));
      case Source::kDefault:
        return e.default_text;
      case Source::kNone:
        break;
    }
    return std::nullopt;
  }

  [[nodiscard]] std::string required(const std::string& key) const {
    auto v = get(key);
    if (!v || v->empty()) throw UsageError("missing required option --" + flag_name(key));
    return *v;
  }

  [[nodiscard]] std::size_t get_size(const std::string& key) const {
    return parse_integer<std::size_t>(required(key), "--" + flag_name(key));
  }
  [[nodiscard]] double get_real(const std::string& key) const {
    return parse_real(required(key), "--" + flag_name(key));
  }
  [[nodiscard]] bool get_bool(const std::string& key) const {
    return parse_bool(required(key), "--" + flag_name(key));
  }

  static std::string flag_name(std::string key) {
    for (char& c : key) {
      if (c == '_') c = '-';
    }
    return key;
  }

 private:
  struct Entry {
    std::string value;
    std::string default_text;
    std::string env;
    std::optional<bool> switch_value;
    CLI::Option* option = nullptr;
  };
  CLI::App* app_;
  std::map<std::string, Entry> entries_;
  KeyValues file_;
};

struct Command {
  CLI::App* app = nullptr;
  std::unique_ptr<Settings> settings;
  std::string config_path;
};

void add_model_options(Settings& s, bool scalar_shape) {
  const ModelConfig d;
  if (scalar_shape) {
    s.add("lookback", "--lookback", "sliding-window length", std::to_string(d.lookback), "INT");
    s.add("out", "--out", "convolution kernels (output channels)", std::to_string(d.out), "INT");
  }
  s.add("epochs", "--epochs", "full-batch training epochs", std::to_string(d.epochs), "INT");
  s.add("lr", "--lr,--learning-rate", "initial NAdam learning rate", format_double(d.learning_rate),
        "REAL");
  s.add("seed", "--seed", "initialization seed (env DFCNN_SEED overrides the default)",
        std::to_string(d.seed), "INT");
  s.add_env("seed", "DFCNN_SEED");
}

void add_split_options(Settings& s) {
  s.add("split", "--split", "train ratio of each series (default 0.8 when no horizon is set)", {},
        "REAL");
  s.add("horizon", "--horizon", "reserve the last H points of each series for testing", {}, "INT");
}

void add_eval_options(Settings& s) {
  s.add("data", "--data", "CSV file or directory of CSV files (one series per file)", {},
        "PATH");
  s.add("report", "--report", "report output path", {}, "PATH");
  s.add("format", "--format", "report format: json or csv", "json");
  s.add("parallel", "--parallel", "worker threads", "1", "INT");
  s.add_switch("timestamp", "--no-timestamp", "omit the generated_at field", false);
}

ModelConfig model_config(const Settings& s, bool scalar_shape) {
  ModelConfig c;
  if (scalar_shape) {
    c.lookback = s.get_size("lookback");
    c.out = s.get_size("out");
  }
  c.epochs = s.get_size("epochs");
  c.learning_rate = s.get_real("lr");
  c.seed = parse_integer<std::uint64_t>(s.required("seed"), "--seed");
  return c;
}

std::optional<SplitSpec> split_spec(const Settings& s) {
  const Source ratio = s.source("split");
  const Source horizon = s.source("horizon");
  if (ratio == Source::kNone && horizon == Source::kNone) return std::nullopt;
  if (ratio == horizon) throw UsageError("--split and --horizon are mutually exclusive");
  if (ratio > horizon) return SplitSpec::ratio(s.get_real("split"));
  return SplitSpec::horizon(s.get_size("horizon"));
}

unsigned parallel_count(const Settings& s) {
  const std::size_t n = s.get_size("parallel");
  if (n == 0) throw UsageError("--parallel must be at least 1");
  return static_cast<unsigned>(std::min<std::size_t>(n, 1024));
}

void require_writable_parent(const std::filesystem::path& target) {
  const auto parent = target.has_parent_path() ? target.parent_path() : std::filesystem::path(".");
  std::error_code ec;
  if (!std::filesystem::is_directory(parent, ec)) {
    throw DataError("output directory does not exist: " + parent.string());
  }
  if (std::filesystem::is_directory(target, ec)) {
    throw DataError("output path is a directory: " + target.string());
  }
}

TimeSeries load_single_series(const std::filesystem::path& path) {
  Dataset ds = load_csv(path);
  if (ds.series.size() != 1) {
    throw DataError(path.string() + " holds " + std::to_string(ds.series.size()) +
                    " series; expected exactly one");
  }
  return std::move(ds.series.front().series);
}

int cmd_fit(const Settings& s, std::ostream& out) {
  const ModelConfig config = model_config(s, true);
  config.validate();
  const std::filesystem::path input = s.required("input");
  const std::filesystem::path model_out = s.required("model_out");
  const std::string format = s.required("format");
  if (format != "text" && format != "json") {
    throw UsageError("unknown output format '" + format + "' (valid: text, json)");
  }
  require_writable_parent(model_out);

  const TimeSeries series = load_single_series(input);
  const FittedModel model = fit(series, config);
  save_model(model, model_out);

  const double final_loss = model.loss_history().back();
  if (format == "json") {
    nlohmann::json doc = {{"model", model_out.string()},
                          {"final_loss", final_loss},
                          {"lookback", config.lookback},
                          {"out", config.out},
                          {"epochs", config.epochs},
                          {"learning_rate", config.learning_rate},
                          {"seed", config.seed},
                          {"train_points", series.size()}};
    out << doc.dump() << '\n';
  } else {
    out << "model " << model_out.string() << '\n'
        << "final_loss " << format_double(final_loss) << '\n'
        << "lookback " << config.lookback << '\n'
        << "out " << config.out << '\n'
        << "epochs " << config.epochs << '\n'
        << "learning_rate " << format_double(config.learning_rate) << '\n'
        << "seed " << config.seed << '\n'
        << "train_points " << series.size() << '\n';
  }
  return 0;
}

int cmd_forecast(const Settings& s, std::ostream& out) {
  const std::filesystem::path model_path = s.required("model");
  const std::filesystem::path input = s.required("input");
  const std::size_t horizon = s.get_size("horizon");
  const std::string format = s.required("format");
  if (format != "csv" && format != "json") {
    throw UsageError("unknown output format '" + format + "' (valid: csv, json)");
  }
  const auto output = s.get("output");
  if (output) require_writable_parent(*output);

  const FittedModel model = load_model(model_path);
  const TimeSeries context = load_single_series(input);
  if (context.size() < model.config().lookback + 1) {
    throw DataError("context has " + std::to_string(context.size()) +
                    " values; the model's lookback needs at least " +
                    std::to_string(model.config().lookback + 1));
  }
  const std::vector<double> values = forecast(model, context, horizon);

  std::vector<std::int64_t> times;
  std::int64_t t = context.times().back();
  for (std::size_t i = 0; i < values.size(); ++i) times.push_back(t = context.next_time(t));

  std::string text;
  if (format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < values.size(); ++i) {
      nlohmann::json time = context.time_kind() == TimeKind::kIndex
                                ? nlohmann::json(times[i])
                                : nlohmann::json(format_time(times[i], context.time_kind()));
      rows.push_back({{"time", time}, {"value", values[i]}});
    }
    text = nlohmann::json{{"horizon", horizon}, {"forecasts", rows}}.dump() + "\n";
  } else if (!values.empty()) {
    text = "time,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
      text += format_time(times[i], context.time_kind()) + ',' + format_double(values[i]) + '\n';
    }
  }
  if (output) {
    write_text_file(*output, text);
  } else {
    out << text;
  }
  return 0;
}

int cmd_bench(const Settings& s, std::ostream& out) {
  BenchConfig config;
  config.model = model_config(s, true);
  config.model.validate();
  config.methods = parse_method_list(s.required("methods"));
  config.split = split_spec(s);
  if (auto sigma = s.get("chen_sigma")) config.chen.sigma = parse_real(*sigma, "--chen-sigma");
  if (auto k = s.get("chen_intervals")) {
    config.chen.interval_count = parse_integer<std::size_t>(*k, "--chen-intervals");
  }
  config.chen.validate();
  config.parallel = parallel_count(s);
  config.stamp_time = s.get_bool("timestamp");
  const ReportFormat format = parse_report_format(s.required("format"));
  const std::filesystem::path data = s.required("data");
  const std::filesystem::path report_path = s.required("report");
  require_writable_parent(report_path);

  const Dataset dataset = load_csv(data);
  const EvalReport report = run_benchmark(dataset, config);
  write_report(report, report_path, format);

  for (const MethodReport& m : report.methods) {
    std::size_t failures = 0;
    std::size_t flagged = 0;
    for (const SeriesScore& score : m.per_series) {
      failures += score.mae ? 0 : 1;
      flagged += score.flagged ? 1 : 0;
    }
    out << m.name << " mean_mae " << (m.mean_mae ? format_double(*m.mean_mae) : "n/a")
        << " failures " << failures << " flagged " << flagged << '\n';
  }
  return 0;
}

int cmd_sweep(const Settings& s, std::ostream& out) {
  BenchConfig config;
  config.model = model_config(s, false);
  const Range lookbacks = parse_range(s.required("lookback"), "--lookback");
  const Range outs = parse_range(s.required("out"), "--out");
  SweepRanges ranges{lookbacks.lo, lookbacks.hi, outs.lo, outs.hi};
  ranges.validate();
  config.model.lookback = ranges.lookback_min;
  config.model.out = ranges.out_min;
  config.model.validate();
  config.split = split_spec(s);
  config.parallel = parallel_count(s);
  config.stamp_time = s.get_bool("timestamp");
  const ReportFormat format = parse_report_format(s.required("format"));
  const std::filesystem::path data = s.required("data");
  const std::filesystem::path report_path = s.required("report");
  require_writable_parent(report_path);
  const auto heatmap = s.get("heatmap");
  if (heatmap) require_writable_parent(*heatmap);

  const Dataset dataset = load_csv(data);
  const EvalReport report = sweep(dataset, ranges, config);
  write_report(report, report_path, format);
  if (heatmap) write_text_file(*heatmap, sweep_to_csv(*report.sweep));

  const SweepGrid& g = *report.sweep;
  std::size_t missing = 0;
  for (const auto& row : g.grid) {
    for (const auto& cell : row) missing += cell ? 0 : 1;
  }
  out << "cells " << g.lookbacks.size() * g.outs.size() << " missing " << missing << '\n'
      << "corr_lookback " << format_double(g.corr_lookback)
      << (g.corr_lookback_defined ? "" : " (undefined)") << '\n'
      << "corr_out " << format_double(g.corr_out) << (g.corr_out_defined ? "" : " (undefined)")
      << '\n'
      << "dominant " << g.dominant << '\n';
  return 0;
}

}  // namespace

KeyValues parse_config_text(std::string_view text, std::string_view source) {
  const auto body = trim(text);
  if (!body.empty() && body.front() == '{') return parse_json_config(body, source);
  return parse_flat_config(text, source);
}

KeyValues load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

Range parse_range(std::string_view text, std::string_view what) {
  const auto t = trim(text);
  const auto dots = t.find("..");
  Range r;
  if (dots == std::string_view::npos) {
    r.lo = r.hi = parse_integer<std::size_t>(t, what);
  } else {
    r.lo = parse_integer<std::size_t>(t.substr(0, dots), what);
    r.hi = parse_integer<std::size_t>(t.substr(dots + 2), what);
  }
  if (r.lo == 0) throw UsageError(std::string(what) + ": range must start at 1 or above");
  if (r.lo > r.hi) throw UsageError(std::string(what) + ": range start exceeds its end");
  return r;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differential fuzzy convolutional forecasting: fit, forecast, bench, sweep",
               "dfcnn"};
  app.require_subcommand(1);

  std::vector<Command> commands;
  auto make = [&](const char* name, const char* description) -> Command& {
    Command& c = commands.emplace_back();
    c.app = app.add_subcommand(name, description);
    c.settings = std::make_unique<Settings>(c.app);
    c.app->add_option("--config", c.config_path,
                      "config file (key = value lines or a JSON object); flags win")
        ->type_name("PATH");
    return c;
  };
  commands.reserve(4);

  Command& fit_cmd = make("fit", "train a model on one series and save it");
  fit_cmd.settings->add("input", "--input", "training series CSV", {}, "PATH");
  fit_cmd.settings->add("model_out", "--model-out", "where to write the fitted model (JSON)", {},
                        "PATH");
  fit_cmd.settings->add("format", "--format", "stdout summary format: text or json", "text");
  add_model_options(*fit_cmd.settings, true);

  Command& forecast_cmd = make("forecast", "forecast H steps past a context series");
  forecast_cmd.settings->add("model", "--model", "fitted model file", {}, "PATH");
  forecast_cmd.settings->add("input", "--input", "context series CSV", {}, "PATH");
  forecast_cmd.settings->add("horizon", "--horizon", "number of steps to forecast", {}, "INT");
  forecast_cmd.settings->add("format", "--format", "output format: csv or json", "csv");
  forecast_cmd.settings->add("output", "--output", "write forecasts here instead of stdout", {},
                             "PATH");

  Command& bench_cmd = make("bench", "score methods on every series of a dataset");
  add_eval_options(*bench_cmd.settings);
  bench_cmd.settings->add("methods", "--methods", "comma-separated subset of dfcnn,chen,chen_diff,naive",
                          "dfcnn,chen,chen_diff,naive");
  add_split_options(*bench_cmd.settings);
  add_model_options(*bench_cmd.settings, true);
  bench_cmd.settings->add("chen_sigma", "--chen-sigma",
                          "padding of the Chen universe (default: population std of the data)",
                          {}, "REAL");
  bench_cmd.settings->add("chen_intervals", "--chen-intervals",
                          "Chen interval count (default: ceil(log2 n) + 1)", {}, "INT");

  Command& sweep_cmd = make("sweep", "grid of DFCNN mean MAE over lookback x out");
  add_eval_options(*sweep_cmd.settings);
  sweep_cmd.settings->add("lookback", "--lookback", "lookback range a..b", "1..10", "RANGE");
  sweep_cmd.settings->add("out", "--out", "out range a..b", "1..10", "RANGE");
  sweep_cmd.settings->add("heatmap", "--heatmap", "also write the lookback,out,mae CSV here", {},
                          "PATH");
  add_split_options(*sweep_cmd.settings);
  add_model_options(*sweep_cmd.settings, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    for (Command& c : commands) {
      if (!c.app->parsed()) continue;
      if (!c.config_path.empty()) {
        KeyValues kv = load_config_file(c.config_path);
        for (const auto& [key, value] : kv) {
          const bool known = std::any_of(commands.begin(), commands.end(), [&](const Command& o) {
            return o.settings->knows(key);
          });
          if (!known) throw UsageError("unknown config key '" + key + "' in " + c.config_path);
        }
        std::erase_if(kv, [&](const auto& item) { return !c.settings->knows(item.first); });
        c.settings->set_file(std::move(kv));
      }
      if (&c == &fit_cmd) return cmd_fit(*c.settings, out);
      if (&c == &forecast_cmd) return cmd_forecast(*c.settings, out);
      if (&c == &bench_cmd) return cmd_bench(*c.settings, out);
      return cmd_sweep(*c.settings, out);
    }
  } catch (const UsageError& e) {
    err << "dfcnn: usage error: " << e.what() << '\n';
    return 1;
  } catch (const NumericError& e) {
    err << "dfcnn: numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "dfcnn: data error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace dfcnn::cli
