#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tsnet/kernel.hpp"
#include "tsnet/series.hpp"

namespace tsnet {

/// Symmetric labeled matrix with a zero diagonal and finite, non-negative
/// entries. Accessors are 0-based; files use labels.
///
/// Binary significance matrices reuse this container with 0/1 entries.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::vector<std::string> labels);
  /// Row-major values; validated against the invariants.
  DistanceMatrix(std::vector<std::string> labels, std::vector<double> values);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::span<const double> values() const noexcept { return values_; }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
  /// Sets both (i, j) and (j, i). Requires i != j and a finite d >= 0.
  void set(std::size_t i, std::size_t j, double d);

  /// Upper-triangle entries in canonical pair order.
  std::vector<double> off_diagonal() const;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Canonical pair order: (i, j) with i < j sorted by (i, j).

std::size_t pair_count(std::size_t n);

/// 1-based (i, j) of the 0-based canonical pair index k.
std::pair<std::size_t, std::size_t> pair_at(std::size_t k, std::size_t n);

/// 0-based canonical index of the 1-based pair (i, j), i < j.
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n);

struct PairRange {
  std::size_t begin;  // 0-based canonical index
  std::size_t count;
};

/// Contiguous chunk of part `part_index` (1-based): the first P mod total
/// parts take one extra pair.
PairRange part_range(std::size_t pairs, std::size_t part_index, std::size_t total_parts);

struct PairDistance {
  std::size_t i;  // 1-based, i < j
  std::size_t j;
  double d;
  friend bool operator==(const PairDistance&, const PairDistance&) = default;
};

struct DistancePart {
  std::size_t part_index = 1;
  std::size_t total_parts = 1;
  std::vector<PairDistance> triples;
  friend bool operator==(const DistancePart&, const DistancePart&) = default;
};

/// Random access to series without holding them all in memory.
class SeriesSource {
 public:
  virtual ~SeriesSource() = default;
  virtual std::size_t size() const = 0;
  virtual TimeSeries load(std::size_t index) const = 0;  // 0-based
};

/// One series per `.csv` file; files are read on demand in lexicographic order.
class DirectorySource final : public SeriesSource {
 public:
  explicit DirectorySource(const std::filesystem::path& dir);
  std::size_t size() const override { return files_.size(); }
  TimeSeries load(std::size_t index) const override;
  const std::vector<std::filesystem::path>& files() const noexcept { return files_; }

 private:
  std::vector<std::filesystem::path> files_;
};

/// All n(n-1)/2 pairwise distances. The result does not depend on `workers`.
/// A failing pair aborts the computation with a KernelError naming the
/// lowest failing pair; asymmetric kernels are rejected.
DistanceMatrix ts_dist(const std::vector<TimeSeries>& series, const Kernel& kernel,
                       std::size_t workers = 1);

DistancePart ts_dist_part(const std::vector<TimeSeries>& series, const Kernel& kernel,
                          std::size_t part_index, std::size_t total_parts,
                          std::size_t workers = 1);

/// Streaming variant: holds the current row series and the current column
/// series only.
DistancePart ts_dist_part(const SeriesSource& source, const Kernel& kernel,
                          std::size_t part_index, std::size_t total_parts);

DistancePart ts_dist_part_file(const std::filesystem::path& dir, const Kernel& kernel,
                               std::size_t part_index, std::size_t total_parts);

/// Assembles parts into a matrix. Identical duplicate triples are accepted;
/// conflicting duplicates and gaps are errors. Labels default to "1".."n".
DistanceMatrix dist_parts_merge(const std::vector<DistancePart>& parts, std::size_t n,
                                std::vector<std::string> labels = {});

struct NormalizedMatrix {
  DistanceMatrix matrix;
  /// All off-diagonal entries were equal; the result is all zeros.
  bool degenerate = false;
};

/// Min-max scaling of the off-diagonal entries into [0, 1].
NormalizedMatrix dist_matrix_normalize(const DistanceMatrix& d);

/// Interpolated quantile of the upper-triangle distances.
double dist_percentile(const DistanceMatrix& d, double p);

/// 0/1 matrix of a pairwise significance test, computed like ts_dist.
DistanceMatrix pairwise_significance(const std::vector<TimeSeries>& series, const PairTest& test,
                                     std::size_t workers = 1);

// ---------------------------------------------------------------------------
// Files

/// "part_<index>_of_<total>.csv"
std::string part_file_name(std::size_t part_index, std::size_t total_parts);

void write_part_csv(const DistancePart& part, const std::filesystem::path& path);
/// Part index and total come from the file name when it follows the naming
/// scheme, else both are 0.
DistancePart read_part_csv(const std::filesystem::path& path);

void write_matrix_csv(const DistanceMatrix& d, const std::filesystem::path& path);
void write_matrix_csv(const DistanceMatrix& d, std::ostream& out);
DistanceMatrix read_matrix_csv(const std::filesystem::path& path);
DistanceMatrix parse_matrix_csv(std::istream& in, const std::string& source_name);

}  // namespace tsnet
