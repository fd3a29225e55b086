#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wordent {

/// Line-oriented reader for the tab-separated files the toolkit consumes.
///
/// The first non-comment line is the header. Field access is by column index
/// resolved from the header, so optional columns can appear in any order.
/// Errors carry `source:line` prefixes.
class TsvReader {
 public:
  TsvReader(std::istream& in, std::string source, bool skip_comments = false);

  const std::vector<std::string>& header() const { return header_; }
  std::optional<std::size_t> column(std::string_view name) const;
  std::size_t require_column(std::string_view name) const;

  // Advances to the next data row. Blank lines are skipped.
  bool next();

  std::string_view field(std::size_t index) const;
  std::size_t field_count() const { return fields_.size(); }
  std::size_t line_number() const { return line_number_; }
  const std::string& source() const { return source_; }

  std::int64_t int_field(std::size_t index) const;
  double double_field(std::size_t index) const;
  bool flag_field(std::size_t index) const;  // accepts 0 or 1

  [[noreturn]] void fail(const std::string& message) const;

 private:
  bool read_line(std::string& line);

  std::istream& in_;
  std::string source_;
  bool skip_comments_;
  std::vector<std::string> header_;
  std::string line_;
  std::vector<std::string_view> fields_;
  std::size_t line_number_ = 0;
};

std::vector<std::string_view> split(std::string_view text, char sep);

std::optional<std::int64_t> parse_int(std::string_view text);
std::optional<double> parse_double(std::string_view text);

// Opens a file for reading, raising an Io error that names the path.
std::ifstream open_input(const std::filesystem::path& path);

// Fixed six-decimal rendering used for every numeric output column.
std::string fixed6(double value);

}  // namespace wordent
