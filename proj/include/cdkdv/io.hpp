#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cdkdv/field.hpp"
#include "cdkdv/solver.hpp"

namespace cdkdv {

/// Shortest round-trip-safe decimal form, 17 significant digits.
std::string format_double(double x);
/// Comma-separated coefficients in basis order.
std::string format_cd(const CDNumber& x);
/// Inverse of format_cd; throws on malformed input.
CDNumber parse_cd(const std::string& text);

/// Columns t, x, c_0..c_{d-1}; one row per (record, grid point).
void write_run_csv(std::ostream& os, const RunRecord& run);
/// Columns t, H1, H2, H3, residual.
void write_conserved_csv(std::ostream& os, const RunRecord& run);
/// Columns x, c_0..c_{d-1}.
void write_field_csv(std::ostream& os, const Field& f);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

struct LoadedRun {
  Grid grid;
  int level = 0;
  std::vector<double> times;
  std::vector<Field> snapshots;
};

/// Reads a run CSV, inferring the grid from the x column and the level from
/// the number of coefficient columns. A field CSV (no t column) loads as a
/// single snapshot at t = 0.
LoadedRun load_run_csv(std::istream& is);
LoadedRun load_run_csv_file(const std::string& path);

}  // namespace cdkdv
