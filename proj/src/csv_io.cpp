#include "tsnet/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "tsnet/error.hpp"

namespace tsnet {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) fail(ErrorKind::io, "cannot format value");
  return std::string(buf, ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool try_parse_double(std::string_view field, double& out) {
  field = trim(field);
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

double parse_double(std::string_view field, std::string_view context) {
  double v = 0.0;
  if (!try_parse_double(field, v)) {
    fail(ErrorKind::io, std::string(context) + ": cannot parse number '" +
                            std::string(trim(field)) + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        current.push_back('"');
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back(trim(current));
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  fields.emplace_back(trim(current));
  return fields;
}

std::vector<TimeSeries> parse_wide_csv(std::istream& in, const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::io, source_name + ": empty file");
  auto header = split_csv_line(line);
  const std::size_t first = (!header.empty() && header.front() == "t") ? 1 : 0;
  if (header.size() <= first) fail(ErrorKind::io, source_name + ": no series columns");

  std::vector<std::vector<double>> columns(header.size() - first);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      fail(ErrorKind::io, source_name + ": line " + std::to_string(row) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(header.size()));
    }
    for (std::size_t c = first; c < cells.size(); ++c) {
      if (trim(cells[c]).empty()) {
        fail(ErrorKind::io, source_name + ": missing cell at line " + std::to_string(row) +
                                ", column '" + header[c] + "'");
      }
      columns[c - first].push_back(
          parse_double(cells[c], source_name + " line " + std::to_string(row)));
    }
  }
  std::vector<TimeSeries> out;
  out.reserve(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].empty()) fail(ErrorKind::io, source_name + ": no data rows");
    out.emplace_back(header[c + first], std::move(columns[c]));
  }
  return out;
}

std::vector<TimeSeries> read_wide_csv(const fs::path& path) {
  auto in = open_input(path);
  return parse_wide_csv(in, path.string());
}

TimeSeries read_series_file(const fs::path& path) {
  auto in = open_input(path);
  std::vector<double> values;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    auto field = trim(line);
    if (field.empty()) continue;
    if (field.find(',') != std::string_view::npos) {
      fail(ErrorKind::io, path.string() + ": expected a single column at line " +
                              std::to_string(row));
    }
    double v = 0.0;
    if (!try_parse_double(field, v)) {
      if (row == 1) continue;  // header
      fail(ErrorKind::io, path.string() + ": cannot parse number '" + std::string(field) +
                              "' at line " + std::to_string(row));
    }
    values.push_back(v);
  }
  if (values.empty()) fail(ErrorKind::io, path.string() + ": no values");
  try {
    return TimeSeries(path.stem().string(), std::move(values));
  } catch (const Error& e) {
    fail(ErrorKind::io, path.string() + ": " + e.what());
  }
}

std::vector<fs::path> list_series_dir(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) fail(ErrorKind::io, "'" + dir.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return files;
}

std::vector<TimeSeries> read_series_dir(const fs::path& dir) {
  std::vector<TimeSeries> out;
  for (const auto& file : list_series_dir(dir)) out.push_back(read_series_file(file));
  return out;
}

std::vector<TimeSeries> read_series_input(const fs::path& path) {
  std::error_code ec;
  if (fs::is_directory(path, ec)) return read_series_dir(path);
  return read_wide_csv(path);
}

void write_wide_csv(const std::vector<TimeSeries>& series, const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write '" + path.string() + "'");
  std::size_t rows = 0;
  for (std::size_t c = 0; c < series.size(); ++c) {
    out << (c ? "," : "") << series[c].id();
    rows = std::max(rows, series[c].size());
  }
  out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < series.size(); ++c) {
      if (c) out << ',';
      if (r < series[c].size()) out << format_double(series[c][r]);
    }
    out << '\n';
  }
  if (!out) fail(ErrorKind::io, "write to '" + path.string() + "' failed");
}

}  // namespace tsnet
