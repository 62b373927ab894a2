#include "l1seg/io.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <system_error>
#include <vector>

namespace l1seg::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool parse_field(std::string_view field, double* out) {
  field = trim(field);
  if (field.empty()) return false;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc() && ptr == last;
}

void scan_seed(std::string_view line, std::optional<std::uint64_t>* seed) {
  const auto pos = line.find("seed=");
  if (pos == std::string_view::npos) return;
  std::uint64_t value = 0;
  const char* first = line.data() + pos + 5;
  const char* last = line.data() + line.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec == std::errc() && ptr != first) *seed = value;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

CsvData parse_csv(std::istream& in, const std::string& name) {
  CsvData data;
  std::vector<double> values;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  bool saw_data = false;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      scan_seed(view, &data.seed);
      data.had_header = true;
      continue;
    }

    std::vector<double> row;
    std::size_t col = 0;
    bool ok = true;
    std::size_t bad_col = 0;
    std::string_view rest = view;
    while (true) {
      ++col;
      const auto comma = rest.find(',');
      const std::string_view field =
          comma == std::string_view::npos ? rest : rest.substr(0, comma);
      double v;
      if (!parse_field(field, &v)) {
        ok = false;
        bad_col = col;
        break;
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }

    if (!ok) {
      if (!saw_data) {
        // Non-numeric first row: header, skip it.
        data.had_header = true;
        continue;
      }
      std::ostringstream msg;
      msg << name << ":" << line_no << ": column " << bad_col
          << ": not a number";
      throw InputError(msg.str());
    }

    if (!saw_data) {
      dim = row.size();
      saw_data = true;
    } else if (row.size() != dim) {
      std::ostringstream msg;
      msg << name << ":" << line_no << ": expected " << dim
          << " column(s), got " << row.size();
      throw InputError(msg.str());
    }
    values.insert(values.end(), row.begin(), row.end());
  }

  if (!saw_data) {
    throw InputError(name + ": no data rows");
  }
  data.series = TimeSeries(std::move(values), dim);
  return data;
}

CsvData parse_csv_file(const std::string& path) {
  if (path == "-") {
    return parse_csv(std::cin, "<stdin>");
  }
  std::ifstream in(path);
  if (!in) {
    throw InputError(path + ": cannot open for reading");
  }
  return parse_csv(in, path);
}

void emit_csv(std::ostream& out, const TimeSeries& series) {
  const std::size_t n = series.size();
  const std::size_t d = series.dim();
  for (std::size_t t = 0; t < n; ++t) {
    const auto row = series.sample(t);
    for (std::size_t i = 0; i < d; ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
}

}  // namespace l1seg::io
