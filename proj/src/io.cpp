#include "cdkdv/io.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cdkdv/error.hpp"

namespace cdkdv {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_cd(const CDNumber& x) {
  std::string out;
  for (std::size_t k = 0; k < x.dim(); ++k) {
    if (k) out += ',';
    out += format_double(x[k]);
  }
  return out;
}

namespace {

double parse_number(const std::string& s, const std::string& context) {
  const char* begin = s.c_str();
  while (*begin == ' ' || *begin == '\t') ++begin;
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
  if (end == begin || *end != '\0')
    throw Error(ErrorCode::kInvalidArgument, context + ": not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

CDNumber parse_cd(const std::string& text) {
  const auto cells = split(text, ',');
  if (cells.empty()) throw Error(ErrorCode::kInvalidArgument, "empty coefficient list");
  CDNumber x(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) x[k] = parse_number(cells[k], "coefficient");
  if (!std::has_single_bit(x.dim()))
    throw DimensionError("coefficient count " + std::to_string(x.dim()) + " is not a power of two");
  return x;
}

void write_run_csv(std::ostream& os, const RunRecord& run) {
  if (run.snapshots.empty()) {
    os << "t,x\n";
    return;
  }
  const std::size_t d = run.snapshots.front().dim();
  os << "t,x";
  for (std::size_t k = 0; k < d; ++k) os << ",c_" << k;
  os << '\n';
  for (std::size_t r = 0; r < run.size(); ++r) {
    const Field& f = run.snapshots[r];
    const std::string t = format_double(run.times[r]);
    for (std::size_t j = 0; j < f.size(); ++j) {
      os << t << ',' << format_double(f.grid().x(j));
      for (std::size_t k = 0; k < d; ++k) os << ',' << format_double(f.component(k)[j]);
      os << '\n';
    }
  }
}

void write_conserved_csv(std::ostream& os, const RunRecord& run) {
  os << "t,H1,H2,H3,residual\n";
  for (std::size_t r = 0; r < run.size(); ++r) {
    const auto& c = run.conserved[r];
    os << format_double(run.times[r]) << ',' << format_double(c.h1) << ','
       << format_double(c.h2) << ',' << format_double(c.h3) << ','
       << format_double(run.residual_norms[r]) << '\n';
  }
}

void write_field_csv(std::ostream& os, const Field& f) {
  os << "x";
  for (std::size_t k = 0; k < f.dim(); ++k) os << ",c_" << k;
  os << '\n';
  for (std::size_t j = 0; j < f.size(); ++j) {
    os << format_double(f.grid().x(j));
    for (std::size_t k = 0; k < f.dim(); ++k) os << ',' << format_double(f.component(k)[j]);
    os << '\n';
  }
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << contents;
  if (!os) throw IoError("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

LoadedRun load_run_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');
  const bool has_t = !header.empty() && header[0] == "t";
  const std::size_t lead = has_t ? 2 : 1;
  if (header.size() <= lead || header[lead - 1] != "x")
    throw IoError("CSV header must start with 't,x' or 'x'");
  const std::size_t d = header.size() - lead;
  if (!std::has_single_bit(d)) throw IoError("coefficient column count is not a power of two");

  std::vector<std::string> t_keys;
  std::vector<double> times;
  std::vector<std::vector<std::vector<double>>> blocks;  // [record][point][col]
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size())
      throw IoError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                    " columns, expected " + std::to_string(header.size()));
    const std::string key = has_t ? cells[0] : std::string("0");
    if (t_keys.empty() || t_keys.back() != key) {
      t_keys.push_back(key);
      times.push_back(has_t ? parse_number(cells[0], "row " + std::to_string(row)) : 0.0);
      blocks.emplace_back();
    }
    std::vector<double> values(d + 1);
    for (std::size_t c = 0; c <= d; ++c)
      values[c] = parse_number(cells[lead - 1 + c], "row " + std::to_string(row));
    blocks.back().push_back(std::move(values));
  }
  if (blocks.empty()) throw IoError("CSV has no data rows");

  const std::size_t n = blocks.front().size();
  for (const auto& b : blocks)
    if (b.size() != n) throw IoError("records have different numbers of grid points");
  if (n < 2) throw IoError("need at least two grid points");
  LoadedRun out;
  const double x0 = blocks.front().front()[0];
  const double x_last = blocks.front().back()[0];
  out.grid = Grid{(x_last - x0) * static_cast<double>(n) / static_cast<double>(n - 1), n, x0};
  try {
    out.grid.validate();
  } catch (const Error& e) {
    throw IoError(std::string("inferred grid is invalid: ") + e.what());
  }
  out.level = std::countr_zero(d);
  out.times = times;
  const AlgebraPtr alg = make_algebra(out.level);
  for (const auto& b : blocks) {
    Field f(out.grid, alg);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < d; ++k) f.component(k)[j] = b[j][k + 1];
    out.snapshots.push_back(std::move(f));
  }
  return out;
}

LoadedRun load_run_csv_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  return load_run_csv(is);
}

}  // namespace cdkdv
