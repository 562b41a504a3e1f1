#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dfcnn/eval.hpp"

namespace dfcnn {

enum class ReportFormat { kJson, kCsv };

/// "json" or "csv"; anything else is a UsageError.
ReportFormat parse_report_format(std::string_view name);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(std::string_view text);

/// Header plus one row per (series, method): series,method,mae,flagged,error
std::string report_to_csv(const EvalReport& report);

/// Flattened heatmap: lookback,out,mae (empty mae for failed cells).
std::string sweep_to_csv(const SweepGrid& grid);

/// Where the CSV writer puts the sweep grid next to `report_path`.
std::filesystem::path grid_path_for(const std::filesystem::path& report_path);

/// JSON: one document. CSV: the per-series table, plus grid_path_for(path) for sweeps.
void write_report(const EvalReport& report, const std::filesystem::path& path,
                  ReportFormat format);
void write_report(const EvalReport& report, const std::filesystem::path& path,
                  std::string_view format);

EvalReport read_report(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace dfcnn
