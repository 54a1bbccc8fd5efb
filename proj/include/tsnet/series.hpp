#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace tsnet {

/// Labeled real-valued sequence. Values are finite and non-empty.
class TimeSeries {
 public:
  TimeSeries(std::string id, std::vector<double> values);

  const std::string& id() const noexcept { return id_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

 private:
  std::string id_;
  std::vector<double> values_;
};

/// Event times over a horizon. Times are 1-based and strictly increasing.
class EventSeries {
 public:
  EventSeries(std::string id, int horizon, std::vector<int> times);

  /// Nonzero entries of a binary indicator series become events.
  static EventSeries from_indicator(const TimeSeries& indicator);

  const std::string& id() const noexcept { return id_; }
  int horizon() const noexcept { return horizon_; }
  std::span<const int> times() const noexcept { return times_; }
  std::size_t count() const noexcept { return times_.size(); }

  /// 0/1 indicator of length horizon.
  std::vector<double> indicator() const;

  friend bool operator==(const EventSeries&, const EventSeries&) = default;

 private:
  std::string id_;
  int horizon_;
  std::vector<int> times_;
};

struct WindowSet {
  std::string source_id;
  std::size_t width = 0;
  std::size_t step = 0;
  /// 1-based start index of every window in the source.
  std::vector<std::size_t> starts;
  std::vector<TimeSeries> windows;
};

/// Number of windows of `width` with `step` in a series of `length`.
std::size_t window_count(std::size_t length, std::size_t width, std::size_t step);

/// Window k (1-based) covers [1 + (k-1)*step, (k-1)*step + width]. Window ids
/// are "<source>@<start>".
WindowSet ts_to_windows(const TimeSeries& series, std::size_t width, std::size_t step);

enum class EventDirection { highest, lowest };

/// Indices of the top (or bottom) `percentile` fraction of values. The
/// threshold is the ceil(percentile*T)-th order statistic; every value tied
/// with it is included, so ties can enlarge the result.
EventSeries events_from_ts(const TimeSeries& series, double percentile,
                           EventDirection direction);

/// Empirical quantile with linear interpolation between order statistics
/// (position (n-1)*p in the sorted sample).
double quantile(std::span<const double> sample, double p);
double quantile_sorted(std::span<const double> sorted, double p);

namespace bins {
struct Sturges {};
struct Scott {};
struct FreedmanDiaconis {};
struct Fixed {
  int count;
};
}  // namespace bins

using BinRule = std::variant<bins::Sturges, bins::Scott, bins::FreedmanDiaconis, bins::Fixed>;

/// Parses "sturges", "scott", "fd" or a positive integer.
BinRule parse_bin_rule(const std::string& text);
std::string to_string(const BinRule& rule);

struct Discretized {
  std::vector<int> symbols;  // each in [1, bin_count]
  int bin_count = 1;
};

/// Equal-width binning over [min, max]; the maximum folds into the top bin.
Discretized discretize(std::span<const double> values, const BinRule& rule);
int bin_count(std::span<const double> values, const BinRule& rule);

/// `count_each` sine series followed by `count_each` cosine series sampled at
/// 2*pi*t/length for t = 0..length-1, plus Gaussian noise.
std::vector<TimeSeries> dataset_sincos_generate(int count_each, int length, double noise_sd,
                                                std::uint64_t seed);

/// `n_events` distinct times drawn uniformly from [1, horizon].
EventSeries random_ets(int horizon, int n_events, std::uint64_t seed,
                       std::string id = "events");

}  // namespace tsnet
