#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfcnn/series.hpp"

namespace dfcnn {

struct NamedSeries {
  std::string id;
  TimeSeries series;
};

/// A named collection of series evaluated under one protocol.
struct Dataset {
  std::string name;
  std::vector<NamedSeries> series;
  std::optional<std::size_t> horizon;  ///< unset: ratio split applies
};

/**
 * Parses one series from CSV text: either `value` or `time,value` per row,
 * with an optional header on row 1. Times may be integers or ISO-8601
 * (YYYY-MM-DD or YYYY-MM-DDTHH:MM[:SS][Z]); one-column files get 0-based
 * indices. Empty cells, non-numeric cells and NaN/inf are rejected with the
 * 1-based row number. Trailing blank lines are ignored.
 */
TimeSeries parse_csv(std::string_view text, std::string_view source = "<input>");

/// A file yields a one-series dataset; a directory yields one series per
/// *.csv file, ordered by file name. Series ids are file stems.
Dataset load_csv(const std::filesystem::path& path);

}  // namespace dfcnn
