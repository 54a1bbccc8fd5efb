#include "tsnet/dist_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <thread>

#include "tsnet/csv_io.hpp"
#include "tsnet/error.hpp"

namespace tsnet {

namespace fs = std::filesystem;

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)), values_(labels_.size() * labels_.size(), 0.0) {}

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels, std::vector<double> values)
    : labels_(std::move(labels)), values_(std::move(values)) {
  const std::size_t n = labels_.size();
  if (values_.size() != n * n) invalid_argument("matrix values do not match the label count");
  for (std::size_t i = 0; i < n; ++i) {
    if ((*this)(i, i) != 0.0) invalid_argument("matrix diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      const double v = (*this)(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        invalid_argument("matrix entry (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                         ") is negative or non-finite");
      }
      if (v != (*this)(j, i)) {
        invalid_argument("matrix is not symmetric at (" + std::to_string(i + 1) + ", " +
                         std::to_string(j + 1) + ")");
      }
    }
  }
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double d) {
  if (i == j) invalid_argument("diagonal entries are fixed at zero");
  if (!std::isfinite(d) || d < 0.0) {
    invalid_argument("distance for (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                     ") must be finite and >= 0");
  }
  values_[i * size() + j] = d;
  values_[j * size() + i] = d;
}

std::vector<double> DistanceMatrix::off_diagonal() const {
  std::vector<double> out;
  out.reserve(pair_count(size()));
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) out.push_back((*this)(i, j));
  }
  return out;
}

std::size_t pair_count(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

std::pair<std::size_t, std::size_t> pair_at(std::size_t k, std::size_t n) {
  if (k >= pair_count(n)) invalid_argument("pair index out of range");
  std::size_t i = 0;
  while (k >= n - 1 - i) {
    k -= n - 1 - i;
    ++i;
  }
  return {i + 1, i + 2 + k};
}

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
  if (!(1 <= i && i < j && j <= n)) invalid_argument("pair index needs 1 <= i < j <= n");
  const std::size_t r = i - 1;
  // Pairs in rows before r: sum over q < r of (n - 1 - q).
  return r * (n - 1) - r * (r - 1) / 2 + (j - i - 1);
}

PairRange part_range(std::size_t pairs, std::size_t part_index, std::size_t total_parts) {
  if (total_parts < 1) invalid_argument("total_parts must be >= 1");
  if (part_index < 1 || part_index > total_parts) {
    invalid_argument("part index " + std::to_string(part_index) + " outside [1, " +
                     std::to_string(total_parts) + "]");
  }
  const std::size_t base = pairs / total_parts;
  const std::size_t extra = pairs % total_parts;
  const std::size_t p = part_index - 1;
  return {p * base + std::min(p, extra), base + (p < extra ? 1 : 0)};
}

namespace {

struct Failure {
  std::size_t k;
  ErrorKind cause;
  std::string message;
};

// Evaluates fn(i, j) (0-based) for the canonical pairs in `range`, split into
// contiguous slices per worker. Every slot is written by exactly one worker,
// so the output is independent of the worker count.
template <typename Fn>
std::vector<double> compute_pairs(std::size_t n, PairRange range, std::size_t workers, Fn&& fn) {
  std::vector<double> out(range.count);
  if (range.count == 0) return out;
  workers = std::clamp<std::size_t>(workers, 1, range.count);
  std::vector<std::optional<Failure>> failures(workers);

  auto run = [&](std::size_t w) {
    const std::size_t base = range.count / workers;
    const std::size_t extra = range.count % workers;
    const std::size_t begin = w * base + std::min(w, extra);
    const std::size_t count = base + (w < extra ? 1 : 0);
    if (count == 0) return;
    auto [i, j] = pair_at(range.begin + begin, n);
    for (std::size_t s = begin; s < begin + count; ++s) {
      try {
        out[s] = fn(i - 1, j - 1);
      } catch (const Error& e) {
        failures[w] = Failure{range.begin + s, e.kind(), e.what()};
        return;
      } catch (const std::exception& e) {
        failures[w] = Failure{range.begin + s, ErrorKind::kernel, e.what()};
        return;
      }
      if (++j > n) {
        ++i;
        j = i + 1;
      }
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run, w);
  }

  const Failure* first = nullptr;
  for (const auto& f : failures) {
    if (f && (!first || f->k < first->k)) first = &*f;
  }
  if (first) {
    auto [i, j] = pair_at(first->k, n);
    throw KernelError(i, j, first->cause, first->message);
  }
  return out;
}

void require_symmetric(const Kernel& kernel) {
  if (!kernel.symmetric) {
    fail(ErrorKind::asymmetric_kernel,
         "kernel '" + kernel.name + "' is asymmetric; distance matrices need a symmetric kernel");
  }
}

double checked(double d) {
  if (!std::isfinite(d) || d < 0.0) {
    degenerate_input("kernel returned " + format_double(d) + "; distances must be finite and >= 0");
  }
  return d;
}

std::vector<std::string> labels_of(const std::vector<TimeSeries>& series) {
  std::vector<std::string> labels;
  labels.reserve(series.size());
  for (const auto& s : series) labels.push_back(s.id());
  return labels;
}

}  // namespace

DistanceMatrix ts_dist(const std::vector<TimeSeries>& series, const Kernel& kernel,
                       std::size_t workers) {
  require_symmetric(kernel);
  const std::size_t n = series.size();
  if (n < 2) invalid_argument("a distance matrix needs at least 2 series");
  const auto values = compute_pairs(n, {0, pair_count(n)}, workers, [&](std::size_t i, std::size_t j) {
    return checked(kernel.distance(series[i], series[j]));
  });
  DistanceMatrix d(labels_of(series));
  for (std::size_t k = 0; k < values.size(); ++k) {
    auto [i, j] = pair_at(k, n);
    d.set(i - 1, j - 1, values[k]);
  }
  return d;
}

namespace {

DistancePart make_part(std::size_t n, PairRange range, std::size_t part_index,
                       std::size_t total_parts, const std::vector<double>& values) {
  DistancePart part{part_index, total_parts, {}};
  part.triples.reserve(values.size());
  for (std::size_t s = 0; s < values.size(); ++s) {
    auto [i, j] = pair_at(range.begin + s, n);
    part.triples.push_back({i, j, values[s]});
  }
  return part;
}

}  // namespace

DistancePart ts_dist_part(const std::vector<TimeSeries>& series, const Kernel& kernel,
                          std::size_t part_index, std::size_t total_parts, std::size_t workers) {
  require_symmetric(kernel);
  const std::size_t n = series.size();
  if (n < 2) invalid_argument("a distance matrix needs at least 2 series");
  const auto range = part_range(pair_count(n), part_index, total_parts);
  const auto values = compute_pairs(n, range, workers, [&](std::size_t i, std::size_t j) {
    return checked(kernel.distance(series[i], series[j]));
  });
  return make_part(n, range, part_index, total_parts, values);
}

DistancePart ts_dist_part(const SeriesSource& source, const Kernel& kernel,
                          std::size_t part_index, std::size_t total_parts) {
  require_symmetric(kernel);
  const std::size_t n = source.size();
  if (n < 2) invalid_argument("a distance matrix needs at least 2 series");
  const auto range = part_range(pair_count(n), part_index, total_parts);
  std::optional<TimeSeries> row;
  std::size_t row_index = n;
  const auto values = compute_pairs(n, range, 1, [&](std::size_t i, std::size_t j) {
    if (row_index != i) {
      row.reset();
      row = source.load(i);
      row_index = i;
    }
    const TimeSeries column = source.load(j);
    return checked(kernel.distance(*row, column));
  });
  return make_part(n, range, part_index, total_parts, values);
}

DirectorySource::DirectorySource(const fs::path& dir) : files_(list_series_dir(dir)) {
  if (files_.empty()) invalid_argument("directory '" + dir.string() + "' holds no .csv series files");
}

TimeSeries DirectorySource::load(std::size_t index) const { return read_series_file(files_.at(index)); }

DistancePart ts_dist_part_file(const fs::path& dir, const Kernel& kernel, std::size_t part_index,
                               std::size_t total_parts) {
  DirectorySource source(dir);
  return ts_dist_part(source, kernel, part_index, total_parts);
}

DistanceMatrix dist_parts_merge(const std::vector<DistancePart>& parts, std::size_t n,
                                std::vector<std::string> labels) {
  if (n < 2) invalid_argument("merge needs n >= 2");
  if (labels.empty()) {
    for (std::size_t k = 1; k <= n; ++k) labels.push_back(std::to_string(k));
  }
  if (labels.size() != n) invalid_argument("label count does not match n");

  const std::size_t pairs = pair_count(n);
  std::vector<double> values(pairs, 0.0);
  std::vector<bool> seen(pairs, false);
  for (const auto& part : parts) {
    for (const auto& t : part.triples) {
      if (!(1 <= t.i && t.i < t.j && t.j <= n)) {
        invalid_argument("part " + std::to_string(part.part_index) + " holds pair (" +
                         std::to_string(t.i) + ", " + std::to_string(t.j) +
                         ") outside 1 <= i < j <= " + std::to_string(n));
      }
      if (!std::isfinite(t.d) || t.d < 0.0) {
        invalid_argument("pair (" + std::to_string(t.i) + ", " + std::to_string(t.j) +
                         ") has an invalid distance");
      }
      const std::size_t k = pair_index(t.i, t.j, n);
      if (seen[k] && values[k] != t.d) {
        fail(ErrorKind::merge_conflict, "pair (" + std::to_string(t.i) + ", " +
                                            std::to_string(t.j) + ") appears with distances " +
                                            format_double(values[k]) + " and " + format_double(t.d));
      }
      seen[k] = true;
      values[k] = t.d;
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> gaps;  // canonical [first, last]
  for (std::size_t k = 0; k < pairs; ++k) {
    if (seen[k]) continue;
    if (!gaps.empty() && gaps.back().second + 1 == k) {
      gaps.back().second = k;
    } else {
      gaps.emplace_back(k, k);
    }
  }
  if (!gaps.empty()) {
    std::ostringstream msg;
    std::size_t missing = 0;
    for (const auto& [a, b] : gaps) missing += b - a + 1;
    msg << missing << " of " << pairs << " pairs missing:";
    const std::size_t shown = std::min<std::size_t>(gaps.size(), 10);
    for (std::size_t g = 0; g < shown; ++g) {
      auto [i0, j0] = pair_at(gaps[g].first, n);
      auto [i1, j1] = pair_at(gaps[g].second, n);
      msg << (g ? ", " : " ") << "(" << i0 << "," << j0 << ")";
      if (gaps[g].second != gaps[g].first) msg << "-(" << i1 << "," << j1 << ")";
    }
    if (gaps.size() > shown) msg << ", ... " << gaps.size() - shown << " more ranges";
    fail(ErrorKind::incomplete_merge, msg.str());
  }

  DistanceMatrix d(std::move(labels));
  for (std::size_t k = 0; k < pairs; ++k) {
    auto [i, j] = pair_at(k, n);
    d.set(i - 1, j - 1, values[k]);
  }
  return d;
}

NormalizedMatrix dist_matrix_normalize(const DistanceMatrix& d) {
  const auto off = d.off_diagonal();
  if (off.empty()) invalid_argument("normalization needs at least 2 series");
  const auto [lo_it, hi_it] = std::minmax_element(off.begin(), off.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  DistanceMatrix out(d.labels());
  const bool degenerate = !(range > 0.0);
  if (!degenerate) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t j = i + 1; j < d.size(); ++j) {
        out.set(i, j, std::clamp((d(i, j) - lo) / range, 0.0, 1.0));
      }
    }
  }
  return {std::move(out), degenerate};
}

double dist_percentile(const DistanceMatrix& d, double p) {
  if (!(p > 0.0 && p < 1.0)) invalid_argument("percentile must lie in (0, 1)");
  if (d.size() < 2) invalid_argument("percentile needs at least 2 series");
  return quantile(d.off_diagonal(), p);
}

DistanceMatrix pairwise_significance(const std::vector<TimeSeries>& series, const PairTest& test,
                                     std::size_t workers) {
  const std::size_t n = series.size();
  if (n < 2) invalid_argument("a significance matrix needs at least 2 series");
  const auto values = compute_pairs(n, {0, pair_count(n)}, workers, [&](std::size_t i, std::size_t j) {
    return test(series[i], series[j]) ? 1.0 : 0.0;
  });
  DistanceMatrix s(labels_of(series));
  for (std::size_t k = 0; k < values.size(); ++k) {
    auto [i, j] = pair_at(k, n);
    s.set(i - 1, j - 1, values[k]);
  }
  return s;
}

// ---------------------------------------------------------------------------

std::string part_file_name(std::size_t part_index, std::size_t total_parts) {
  return "part_" + std::to_string(part_index) + "_of_" + std::to_string(total_parts) + ".csv";
}

void write_part_csv(const DistancePart& part, const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write '" + path.string() + "'");
  out << "i,j,dist\n";
  for (const auto& t : part.triples) out << t.i << ',' << t.j << ',' << format_double(t.d) << '\n';
  if (!out) fail(ErrorKind::io, "write to '" + path.string() + "' failed");
}

DistancePart read_part_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open '" + path.string() + "'");
  DistancePart part{0, 0, {}};
  static const std::regex name_re(R"(part_(\d+)_of_(\d+)\.csv)");
  std::smatch m;
  const std::string name = path.filename().string();
  if (std::regex_match(name, m, name_re)) {
    part.part_index = std::stoul(m[1]);
    part.total_parts = std::stoul(m[2]);
  }
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"i", "j", "dist"}) {
    fail(ErrorKind::io, path.string() + ": expected header 'i,j,dist'");
  }
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    const std::string ctx = path.string() + " line " + std::to_string(row);
    if (cells.size() != 3) fail(ErrorKind::io, ctx + ": expected 3 cells");
    const double i = parse_double(cells[0], ctx);
    const double j = parse_double(cells[1], ctx);
    if (i < 1 || j < 1 || i != std::floor(i) || j != std::floor(j)) {
      fail(ErrorKind::io, ctx + ": indices must be positive integers");
    }
    part.triples.push_back(
        {static_cast<std::size_t>(i), static_cast<std::size_t>(j), parse_double(cells[2], ctx)});
  }
  return part;
}

void write_matrix_csv(const DistanceMatrix& d, std::ostream& out) {
  auto quoted = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (const auto& l : d.labels()) out << ',' << quoted(l);
  out << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << quoted(d.labels()[i]);
    for (std::size_t j = 0; j < d.size(); ++j) out << ',' << format_double(d(i, j));
    out << '\n';
  }
}

void write_matrix_csv(const DistanceMatrix& d, const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write '" + path.string() + "'");
  write_matrix_csv(d, out);
  if (!out) fail(ErrorKind::io, "write to '" + path.string() + "' failed");
}

DistanceMatrix parse_matrix_csv(std::istream& in, const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::io, source_name + ": empty matrix file");
  auto header = split_csv_line(line);
  if (header.size() < 2) fail(ErrorKind::io, source_name + ": matrix header has no labels");
  std::vector<std::string> labels(header.begin() + 1, header.end());
  const std::size_t n = labels.size();
  std::vector<double> values;
  values.reserve(n * n);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    const std::string ctx = source_name + " row " + std::to_string(rows + 1);
    if (cells.size() != n + 1) fail(ErrorKind::io, ctx + ": expected " + std::to_string(n + 1) + " cells");
    if (rows >= n) fail(ErrorKind::io, source_name + ": more rows than labels");
    if (cells[0] != labels[rows]) {
      fail(ErrorKind::io, ctx + ": row label '" + cells[0] + "' does not match column '" + labels[rows] + "'");
    }
    for (std::size_t c = 1; c <= n; ++c) values.push_back(parse_double(cells[c], ctx));
    ++rows;
  }
  if (rows != n) fail(ErrorKind::io, source_name + ": matrix is not square");
  try {
    return DistanceMatrix(std::move(labels), std::move(values));
  } catch (const Error& e) {
    fail(ErrorKind::io, source_name + ": " + e.what());
  }
}

DistanceMatrix read_matrix_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open '" + path.string() + "'");
  return parse_matrix_csv(in, path.string());
}

}  // namespace tsnet
