#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace dfcnn::cli {

using KeyValues = std::map<std::string, std::string>;

/// Flat `key = value` lines (with # comments) or a flat JSON object, detected
/// by the first non-blank character. Keys are normalized: '-' becomes '_'.
KeyValues parse_config_text(std::string_view text, std::string_view source);
KeyValues load_config_file(const std::filesystem::path& path);

struct Range {
  std::size_t lo = 0;
  std::size_t hi = 0;
  friend bool operator==(const Range&, const Range&) = default;
};

/// "a..b" or a single "a".
Range parse_range(std::string_view text, std::string_view what);

/// Shortest text that reads back to the same double.
std::string format_double(double v);

/// Whole command line: returns the process exit code (0 ok, 1 usage, 2 data,
/// 3 numeric). Help text and results go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dfcnn::cli
