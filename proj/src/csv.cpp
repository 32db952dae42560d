#include "bpgc/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

namespace bpgc {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& why) {
  std::ostringstream msg;
  msg << "line " << line << ": " << why;
  throw Error(errc::parse_error, msg.str());
}

std::string_view strip_line_ending(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(errc::io_error, "cannot open " + path + " for reading");
  }

  std::vector<Observation> rows;
  std::string raw;
  std::size_t line_number = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_number;
    std::string_view line = strip_line_ending(raw);
    if (line_number == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") {
      line.remove_prefix(3);
    }
    if (!header_seen) {
      if (line != "x,y") parse_fail(line_number, "expected header \"x,y\"");
      header_seen = true;
      continue;
    }
    if (line.empty()) {
      parse_fail(line_number, "empty row");
    }

    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) {
      parse_fail(line_number, "expected two comma-separated fields");
    }
    const std::string_view x_field = line.substr(0, comma);
    const std::string_view y_field = line.substr(comma + 1);
    if (y_field.find(',') != std::string_view::npos) {
      parse_fail(line_number, "expected exactly two fields");
    }

    std::int64_t x = 0;
    auto [x_end, x_err] =
        std::from_chars(x_field.data(), x_field.data() + x_field.size(), x);
    if (x_err != std::errc{} || x_end != x_field.data() + x_field.size()) {
      parse_fail(line_number, "x is not a non-negative integer");
    }

    double y = 0.0;
    auto [y_end, y_err] =
        std::from_chars(y_field.data(), y_field.data() + y_field.size(), y);
    if (y_err != std::errc{} || y_end != y_field.data() + y_field.size()) {
      parse_fail(line_number, "y is not a decimal number");
    }

    try {
      rows.push_back(make_observation(x, y));
    } catch (const Error& err) {
      parse_fail(line_number, err.what());
    }
  }
  if (!header_seen) {
    throw Error(errc::parse_error, "empty file, expected header \"x,y\"");
  }
  if (rows.empty()) {
    throw Error(errc::parse_error, "no data rows after the header");
  }
  return Dataset(std::move(rows));
}

void write_dataset(const std::string& path,
                   const std::vector<Observation>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(errc::io_error, "cannot open " + path + " for writing");
  }
  out << "x,y\n";
  char buffer[64];
  for (const Observation& obs : rows) {
    std::snprintf(buffer, sizeof(buffer), "%lld,%.17g",
                  static_cast<long long>(obs.x), obs.y);
    out << buffer << '\n';
  }
  if (!out) {
    throw Error(errc::io_error, "write to " + path + " failed");
  }
}

}  // namespace bpgc
