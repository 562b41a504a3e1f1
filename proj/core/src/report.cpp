#include "dfcnn/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dfcnn/error.hpp"
#include "json.hpp"

namespace dfcnn {
namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional_number(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json echo_to_json(const ConfigEcho& c) {
  json j;
  j["model"] = {{"lookback", c.model.lookback},
                {"out", c.model.out},
                {"epochs", c.model.epochs},
                {"learning_rate", c.model.learning_rate},
                {"seed", c.model.seed}};
  j["optimizer"] = {{"name", "nadam"},
                    {"beta1", c.training.nadam.beta1},
                    {"beta2", c.training.nadam.beta2},
                    {"epsilon", c.training.nadam.epsilon},
                    {"momentum_decay", c.training.nadam.momentum_decay}};
  j["scheduler"] = {{"name", "reduce_on_plateau"},
                    {"monitor", "training_loss"},
                    {"factor", c.training.plateau.factor},
                    {"patience", c.training.plateau.patience},
                    {"min_lr", c.training.plateau.min_lr}};
  j["batch_norm"] = {{"epsilon", c.training.norm_epsilon},
                     {"momentum", c.training.norm_momentum},
                     {"inference", "running_stats"}};
  j["chen"] = {{"sigma", optional_number(c.chen_sigma)},
               {"sigma_default", "population_std"},
               {"interval_count", c.chen_interval_count ? json(*c.chen_interval_count)
                                                        : json(nullptr)},
               {"interval_count_default", "ceil_log2_len_plus_1"},
               {"membership", "crisp"}};
  j["split"] = {{"mode", c.split_mode}, {"ratio", c.split_ratio}, {"horizon", c.split_horizon}};
  j["methods"] = c.methods;
  j["protocol"] = "fit_once_iterated_forecast";
  j["prng"] = "splitmix64";
  j["training"] = "full_batch";
  return j;
}

ConfigEcho echo_from_json(const json& j) {
  ConfigEcho c;
  const json& m = j.at("model");
  c.model.lookback = m.at("lookback").get<std::size_t>();
  c.model.out = m.at("out").get<std::size_t>();
  c.model.epochs = m.at("epochs").get<std::size_t>();
  c.model.learning_rate = m.at("learning_rate").get<double>();
  c.model.seed = m.at("seed").get<std::uint64_t>();
  const json& o = j.at("optimizer");
  c.training.nadam.beta1 = o.at("beta1").get<double>();
  c.training.nadam.beta2 = o.at("beta2").get<double>();
  c.training.nadam.epsilon = o.at("epsilon").get<double>();
  c.training.nadam.momentum_decay = o.at("momentum_decay").get<double>();
  const json& s = j.at("scheduler");
  c.training.plateau.factor = s.at("factor").get<double>();
  c.training.plateau.patience = s.at("patience").get<std::size_t>();
  c.training.plateau.min_lr = s.at("min_lr").get<double>();
  const json& bn = j.at("batch_norm");
  c.training.norm_epsilon = bn.at("epsilon").get<double>();
  c.training.norm_momentum = bn.at("momentum").get<double>();
  const json& ch = j.at("chen");
  c.chen_sigma = read_optional_number(ch.at("sigma"));
  if (!ch.at("interval_count").is_null()) {
    c.chen_interval_count = ch.at("interval_count").get<std::size_t>();
  }
  const json& sp = j.at("split");
  c.split_mode = sp.at("mode").get<std::string>();
  c.split_ratio = sp.at("ratio").get<double>();
  c.split_horizon = sp.at("horizon").get<std::size_t>();
  c.methods = j.at("methods").get<std::vector<std::string>>();
  return c;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::string number_text(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  throw UsageError("unknown report format '" + std::string(name) + "' (valid: json, csv)");
}

std::string report_to_json(const EvalReport& report) {
  json doc;
  doc["schema_version"] = report.schema_version;
  doc["dataset"] = report.dataset;
  if (!report.generated_at.empty()) doc["generated_at"] = report.generated_at;
  doc["config"] = echo_to_json(report.config);
  doc["methods"] = json::array();
  for (const MethodReport& m : report.methods) {
    json jm;
    jm["name"] = m.name;
    jm["mean_mae"] = optional_number(m.mean_mae);
    jm["per_series"] = json::array();
    for (const SeriesScore& s : m.per_series) {
      json js = {{"id", s.id}, {"mae", optional_number(s.mae)}, {"flagged", s.flagged}};
      if (!s.error.empty()) js["error"] = s.error;
      jm["per_series"].push_back(std::move(js));
    }
    doc["methods"].push_back(std::move(jm));
  }
  if (report.sweep) {
    const SweepGrid& g = *report.sweep;
    json rows = json::array();
    for (const auto& row : g.grid) {
      json r = json::array();
      for (const auto& cell : row) r.push_back(optional_number(cell));
      rows.push_back(std::move(r));
    }
    doc["sweep"] = {{"lookbacks", g.lookbacks},
                    {"outs", g.outs},
                    {"grid", std::move(rows)},
                    {"corr_lookback", g.corr_lookback},
                    {"corr_out", g.corr_out},
                    {"corr_lookback_defined", g.corr_lookback_defined},
                    {"corr_out_defined", g.corr_out_defined},
                    {"dominant", g.dominant}};
  }
  return doc.dump(2) + "\n";
}

EvalReport report_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    EvalReport r;
    r.schema_version = doc.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw DataError("unsupported report schema version " + std::to_string(r.schema_version));
    }
    r.dataset = doc.at("dataset").get<std::string>();
    r.generated_at = doc.value("generated_at", std::string());
    r.config = echo_from_json(doc.at("config"));
    for (const json& jm : doc.at("methods")) {
      MethodReport m;
      m.name = jm.at("name").get<std::string>();
      m.mean_mae = read_optional_number(jm.at("mean_mae"));
      for (const json& js : jm.at("per_series")) {
        SeriesScore s;
        s.id = js.at("id").get<std::string>();
        s.mae = read_optional_number(js.at("mae"));
        s.flagged = js.at("flagged").get<bool>();
        s.error = js.value("error", std::string());
        m.per_series.push_back(std::move(s));
      }
      r.methods.push_back(std::move(m));
    }
    if (doc.contains("sweep")) {
      const json& js = doc.at("sweep");
      SweepGrid g;
      g.lookbacks = js.at("lookbacks").get<std::vector<std::size_t>>();
      g.outs = js.at("outs").get<std::vector<std::size_t>>();
      for (const json& row : js.at("grid")) {
        std::vector<std::optional<double>> cells;
        for (const json& cell : row) cells.push_back(read_optional_number(cell));
        g.grid.push_back(std::move(cells));
      }
      g.corr_lookback = js.at("corr_lookback").get<double>();
      g.corr_out = js.at("corr_out").get<double>();
      g.corr_lookback_defined = js.at("corr_lookback_defined").get<bool>();
      g.corr_out_defined = js.at("corr_out_defined").get<bool>();
      g.dominant = js.at("dominant").get<std::string>();
      r.sweep = std::move(g);
    }
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report document: ") + e.what());
  }
}

std::string report_to_csv(const EvalReport& report) {
  std::string out = "series,method,mae,flagged,error\n";
  if (report.methods.empty()) return out;
  const std::size_t n = report.methods.front().per_series.size();
  for (std::size_t s = 0; s < n; ++s) {
    for (const MethodReport& m : report.methods) {
      const SeriesScore& score = m.per_series.at(s);
      out += csv_field(score.id) + ',' + m.name + ',' + (score.mae ? number_text(*score.mae) : "") +
             ',' + (score.flagged ? "true" : "false") + ',' + csv_field(score.error) + '\n';
    }
  }
  return out;
}

std::string sweep_to_csv(const SweepGrid& grid) {
  std::string out = "lookback,out,mae\n";
  for (std::size_t i = 0; i < grid.lookbacks.size(); ++i) {
    for (std::size_t j = 0; j < grid.outs.size(); ++j) {
      const auto& cell = grid.grid[i][j];
      out += std::to_string(grid.lookbacks[i]) + ',' + std::to_string(grid.outs[j]) + ',' +
             (cell ? number_text(*cell) : "") + '\n';
    }
  }
  return out;
}

std::filesystem::path grid_path_for(const std::filesystem::path& report_path) {
  std::filesystem::path p = report_path;
  p.replace_filename(report_path.stem().string() + "_grid.csv");
  return p;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw DataError("failed writing " + path.string());
}

void write_report(const EvalReport& report, const std::filesystem::path& path,
                  ReportFormat format) {
  if (format == ReportFormat::kJson) {
    write_text_file(path, report_to_json(report));
    return;
  }
  write_text_file(path, report_to_csv(report));
  if (report.sweep) write_text_file(grid_path_for(path), sweep_to_csv(*report.sweep));
}

void write_report(const EvalReport& report, const std::filesystem::path& path,
                  std::string_view format) {
  write_report(report, path, parse_report_format(format));
}

EvalReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open report " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return report_from_json(buf.str());
}

}  // namespace dfcnn
