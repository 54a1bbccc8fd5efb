#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tsnet/series.hpp"

namespace tsnet {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Strict decimal parse of a whole field (leading/trailing blanks allowed).
double parse_double(std::string_view field, std::string_view context);

std::vector<std::string> split_csv_line(std::string_view line);

/// Wide CSV: header of series ids, one column per series. A first column
/// named `t` is skipped. Missing or non-numeric cells are rejected.
std::vector<TimeSeries> parse_wide_csv(std::istream& in, const std::string& source_name);
std::vector<TimeSeries> read_wide_csv(const std::filesystem::path& path);

/// Single-column CSV. The id is the file stem; a non-numeric first line is
/// treated as a header.
TimeSeries read_series_file(const std::filesystem::path& path);

/// Regular `.csv` files of a directory in lexicographic filename order.
std::vector<std::filesystem::path> list_series_dir(const std::filesystem::path& dir);
std::vector<TimeSeries> read_series_dir(const std::filesystem::path& dir);

/// Either a wide CSV file or a one-series-per-file directory.
std::vector<TimeSeries> read_series_input(const std::filesystem::path& path);

/// Writes the wide format; series of unequal length are padded with empty
/// cells, which `parse_wide_csv` rejects, so callers pass equal lengths.
void write_wide_csv(const std::vector<TimeSeries>& series, const std::filesystem::path& path);

}  // namespace tsnet
