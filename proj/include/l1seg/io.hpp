#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "l1seg/core.hpp"

namespace l1seg::io {

/// Parsed CSV input: one sample per row, comma-separated columns (one
/// column for scalar series, n for vector samples). A non-numeric first
/// row is treated as a header and skipped; leading '#' comment lines
/// are also skipped, and a `seed=<u64>` token inside them is picked up
/// so solver outputs can echo the generator seed.
struct CsvData {
  TimeSeries series;
  std::optional<std::uint64_t> seed;
  bool had_header = false;
};

/// Throws InputError with a "<name>:<line>: column <c>: ..." diagnostic
/// on malformed input.
CsvData parse_csv(std::istream& in, const std::string& name);

/// path "-" reads stdin.
CsvData parse_csv_file(const std::string& path);

/// Shortest round-trip number formatting; parse_csv(emit_csv(x)) == x
/// bit for bit.
void emit_csv(std::ostream& out, const TimeSeries& series);

std::string format_double(double v);

}  // namespace l1seg::io
