#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dfcnn/dataset.hpp"
#include "dfcnn/error.hpp"

namespace dfcnn {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_integer(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return v;
}

// Howard Hinnant's days_from_civil.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2 ? 1 : 0;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct ParsedTime {
  std::int64_t value;
  TimeKind kind;
};

std::optional<unsigned> fixed_digits(std::string_view s, std::size_t pos, std::size_t len) {
  if (pos + len > s.size()) return std::nullopt;
  unsigned v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    v = v * 10 + static_cast<unsigned>(s[i] - '0');
  }
  return v;
}

std::optional<ParsedTime> parse_iso8601(std::string_view s) {
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  const auto y = fixed_digits(s, 0, 4);
  const auto mo = fixed_digits(s, 5, 2);
  const auto d = fixed_digits(s, 8, 2);
  if (!y || !mo || !d || *mo < 1 || *mo > 12 || *d < 1 || *d > 31) return std::nullopt;
  const std::int64_t days = days_from_civil(*y, *mo, *d);
  if (s.size() == 10) return ParsedTime{days * 86400, TimeKind::kDate};
  if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
  std::string_view rest = s.substr(11);
  if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
  if (rest.size() != 5 && rest.size() != 8) return std::nullopt;
  const auto hh = fixed_digits(rest, 0, 2);
  const auto mm = fixed_digits(rest, 3, 2);
  if (!hh || !mm || rest[2] != ':' || *hh > 23 || *mm > 59) return std::nullopt;
  unsigned ss = 0;
  if (rest.size() == 8) {
    const auto sec = fixed_digits(rest, 6, 2);
    if (!sec || rest[5] != ':' || *sec > 60) return std::nullopt;
    ss = *sec;
  }
  return ParsedTime{days * 86400 + *hh * 3600 + *mm * 60 + ss, TimeKind::kDateTime};
}

std::optional<ParsedTime> parse_time(std::string_view cell) {
  if (auto i = parse_integer(cell)) return ParsedTime{*i, TimeKind::kIndex};
  return parse_iso8601(cell);
}

[[noreturn]] void row_error(std::string_view source, std::size_t row, const std::string& what) {
  throw DataError(std::string(source) + ": row " + std::to_string(row) + ": " + what);
}

}  // namespace

TimeSeries parse_csv(std::string_view text, std::string_view source) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw DataError(std::string(source) + ": file is empty");

  std::size_t columns = split_cells(lines.front()).size();
  if (columns > 2) {
    throw DataError(std::string(source) + ": expected 1 or 2 columns, found " +
                    std::to_string(columns));
  }
  std::size_t first_data = 0;
  if (!parse_number(split_cells(lines.front()).back())) first_data = 1;  // header row

  std::vector<std::int64_t> times;
  std::vector<double> values;
  std::optional<TimeKind> kind;
  for (std::size_t i = first_data; i < lines.size(); ++i) {
    const std::size_t row = i + 1;
    const auto cells = split_cells(lines[i]);
    if (trim(lines[i]).empty()) row_error(source, row, "empty row");
    if (cells.size() != columns) {
      row_error(source, row,
                "expected " + std::to_string(columns) + " cells, found " +
                    std::to_string(cells.size()));
    }
    const std::string_view value_cell = cells.back();
    if (value_cell.empty()) row_error(source, row, "empty value cell");
    const auto v = parse_number(value_cell);
    if (!v) row_error(source, row, "cannot parse value '" + std::string(value_cell) + "'");
    if (!std::isfinite(*v)) row_error(source, row, "value is NaN or infinite");
    values.push_back(*v);

    if (columns == 2) {
      if (cells.front().empty()) row_error(source, row, "empty time cell");
      const auto t = parse_time(cells.front());
      if (!t) row_error(source, row, "cannot parse time '" + std::string(cells.front()) + "'");
      if (kind && *kind != t->kind) {
        // A date column may mix date-only and date-time stamps.
        if (*kind == TimeKind::kIndex || t->kind == TimeKind::kIndex) {
          row_error(source, row, "time column mixes integer and ISO-8601 labels");
        }
        kind = TimeKind::kDateTime;
      } else if (!kind) {
        kind = t->kind;
      }
      if (!times.empty() && t->value <= times.back()) {
        row_error(source, row, "time labels must be strictly increasing");
      }
      times.push_back(t->value);
    } else {
      times.push_back(static_cast<std::int64_t>(values.size() - 1));
    }
  }
  if (values.empty()) throw DataError(std::string(source) + ": file has a header but no data");
  return TimeSeries(std::move(times), std::move(values), kind.value_or(TimeKind::kIndex));
}

namespace {

TimeSeries read_series_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw DataError("failed reading " + path.string());
  return parse_csv(buf.str(), path.string());
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) throw DataError("no such file or directory: " + path.string());
  Dataset ds;
  if (std::filesystem::is_directory(path, ec)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("directory " + path.string() + " contains no .csv files");
    ds.name = path.filename().empty() ? path.parent_path().filename().string()
                                      : path.filename().string();
    for (const auto& f : files) ds.series.push_back({f.stem().string(), read_series_file(f)});
  } else {
    ds.name = path.stem().string();
    ds.series.push_back({path.stem().string(), read_series_file(path)});
  }
  return ds;
}

}  // namespace dfcnn
