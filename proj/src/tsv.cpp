#include "wordent/tsv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "wordent/errors.hpp"

namespace wordent {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Lookup: return "lookup error";
    case ErrorKind::DegenerateDistribution: return "degenerate distribution";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::UnsupportedOrder: return "unsupported order";
    case ErrorKind::Tractability: return "tractability error";
    case ErrorKind::MalformedWord: return "malformed word";
    case ErrorKind::Schema: return "schema error";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Config: return "configuration error";
    case ErrorKind::Precondition: return "precondition error";
    case ErrorKind::DegenerateFit: return "degenerate fit";
    case ErrorKind::Collinearity: return "collinearity error";
    case ErrorKind::PartitionMismatch: return "partition mismatch";
  }
  return "error";
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::optional<std::int64_t> parse_int(std::string_view text) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return value;
}

std::optional<double> parse_double(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  return in;
}

std::string fixed6(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  // Avoid emitting "-0.000000" for tiny negative rounding noise.
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

TsvReader::TsvReader(std::istream& in, std::string source, bool skip_comments)
    : in_(in), source_(std::move(source)), skip_comments_(skip_comments) {
  std::string line;
  if (!read_line(line)) fail("missing header row");
  for (auto f : split(line, '\t')) header_.emplace_back(f);
}

bool TsvReader::read_line(std::string& line) {
  while (std::getline(in_, line)) {
    ++line_number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (skip_comments_ && line.front() == '#') continue;
    return true;
  }
  return false;
}

std::optional<std::size_t> TsvReader::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t TsvReader::require_column(std::string_view name) const {
  if (auto idx = column(name)) return *idx;
  throw Error(ErrorKind::Schema,
              source_ + ": missing required column '" + std::string(name) + "'");
}

bool TsvReader::next() {
  if (!read_line(line_)) return false;
  fields_ = split(line_, '\t');
  if (fields_.size() != header_.size()) {
    fail("expected " + std::to_string(header_.size()) + " fields, found " +
         std::to_string(fields_.size()));
  }
  return true;
}

std::string_view TsvReader::field(std::size_t index) const {
  return fields_.at(index);
}

std::int64_t TsvReader::int_field(std::size_t index) const {
  auto v = parse_int(field(index));
  if (!v) fail("column '" + header_[index] + "': not an integer: '" +
               std::string(field(index)) + "'");
  return *v;
}

double TsvReader::double_field(std::size_t index) const {
  auto v = parse_double(field(index));
  if (!v || !std::isfinite(*v)) {
    fail("column '" + header_[index] + "': not a finite number: '" +
         std::string(field(index)) + "'");
  }
  return *v;
}

bool TsvReader::flag_field(std::size_t index) const {
  const auto f = field(index);
  if (f == "0") return false;
  if (f == "1") return true;
  fail("column '" + header_[index] + "': expected 0 or 1, found '" +
       std::string(f) + "'");
}

void TsvReader::fail(const std::string& message) const {
  throw Error(ErrorKind::Schema,
              source_ + ":" + std::to_string(line_number_) + ": " + message);
}

}  // namespace wordent
