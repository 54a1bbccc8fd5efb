#include "tsnet/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "tsnet/error.hpp"
#include "portable_random.hpp"

namespace tsnet {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::degenerate_input: return "degenerate input";
    case ErrorKind::io: return "i/o error";
    case ErrorKind::kernel: return "kernel failure";
    case ErrorKind::incomplete_merge: return "incomplete merge";
    case ErrorKind::merge_conflict: return "merge conflict";
    case ErrorKind::asymmetric_kernel: return "asymmetric kernel";
  }
  return "error";
}

KernelError::KernelError(std::size_t i, std::size_t j, ErrorKind cause, const std::string& what)
    : Error(ErrorKind::kernel, "pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                   "): " + what),
      i_(i), j_(j), cause_(cause) {}

TimeSeries::TimeSeries(std::string id, std::vector<double> values)
    : id_(std::move(id)), values_(std::move(values)) {
  if (values_.empty()) invalid_argument("time series '" + id_ + "' is empty");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      invalid_argument("time series '" + id_ + "' has a non-finite value at index " +
                       std::to_string(k + 1));
    }
  }
}

EventSeries::EventSeries(std::string id, int horizon, std::vector<int> times)
    : id_(std::move(id)), horizon_(horizon), times_(std::move(times)) {
  if (horizon_ < 1) invalid_argument("event series '" + id_ + "' needs horizon >= 1");
  for (std::size_t k = 0; k < times_.size(); ++k) {
    if (times_[k] < 1 || times_[k] > horizon_) {
      invalid_argument("event time " + std::to_string(times_[k]) + " outside [1, " +
                       std::to_string(horizon_) + "]");
    }
    if (k > 0 && times_[k] <= times_[k - 1]) {
      invalid_argument("event times of '" + id_ + "' are not strictly increasing");
    }
  }
}

EventSeries EventSeries::from_indicator(const TimeSeries& indicator) {
  std::vector<int> times;
  for (std::size_t k = 0; k < indicator.size(); ++k) {
    if (indicator[k] != 0.0) times.push_back(static_cast<int>(k + 1));
  }
  return EventSeries(indicator.id(), static_cast<int>(indicator.size()), std::move(times));
}

std::vector<double> EventSeries::indicator() const {
  std::vector<double> out(static_cast<std::size_t>(horizon_), 0.0);
  for (int t : times_) out[static_cast<std::size_t>(t - 1)] = 1.0;
  return out;
}

std::size_t window_count(std::size_t length, std::size_t width, std::size_t step) {
  if (width == 0 || step == 0 || length < width) return 0;
  return (length - width) / step + 1;
}

WindowSet ts_to_windows(const TimeSeries& series, std::size_t width, std::size_t step) {
  if (width < 1 || step < 1) invalid_argument("window width and step must be >= 1");
  if (width > series.size()) {
    invalid_argument("window width " + std::to_string(width) + " exceeds series length " +
                     std::to_string(series.size()) + "; no windows");
  }
  WindowSet set{series.id(), width, step, {}, {}};
  const std::size_t count = window_count(series.size(), width, step);
  set.starts.reserve(count);
  set.windows.reserve(count);
  auto values = series.values();
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t begin = k * step;
    set.starts.push_back(begin + 1);
    set.windows.emplace_back(series.id() + "@" + std::to_string(begin + 1),
                             std::vector<double>(values.begin() + begin,
                                                 values.begin() + begin + width));
  }
  return set;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) invalid_argument("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) invalid_argument("quantile probability outside [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> sample, double p) {
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, p);
}

EventSeries events_from_ts(const TimeSeries& series, double percentile,
                           EventDirection direction) {
  if (!(percentile > 0.0 && percentile < 1.0)) {
    invalid_argument("event percentile must lie in (0, 1)");
  }
  const std::size_t n = series.size();
  // 1e-9 absorbs representation error in products such as 0.3 * 10.
  auto k = static_cast<std::size_t>(std::ceil(percentile * static_cast<double>(n) - 1e-9));
  k = std::clamp<std::size_t>(k, 1, n);

  std::vector<double> sorted(series.values().begin(), series.values().end());
  std::vector<int> times;
  if (direction == EventDirection::highest) {
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const double threshold = sorted[k - 1];
    for (std::size_t t = 0; t < n; ++t) {
      if (series[t] >= threshold) times.push_back(static_cast<int>(t + 1));
    }
  } else {
    std::sort(sorted.begin(), sorted.end());
    const double threshold = sorted[k - 1];
    for (std::size_t t = 0; t < n; ++t) {
      if (series[t] <= threshold) times.push_back(static_cast<int>(t + 1));
    }
  }
  return EventSeries(series.id(), static_cast<int>(n), std::move(times));
}

BinRule parse_bin_rule(const std::string& text) {
  if (text == "sturges") return bins::Sturges{};
  if (text == "scott") return bins::Scott{};
  if (text == "fd") return bins::FreedmanDiaconis{};
  int count = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), count);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    invalid_argument("unknown bin rule '" + text + "' (sturges, scott, fd or an integer)");
  }
  if (count < 1) invalid_argument("fixed bin count must be >= 1");
  return bins::Fixed{count};
}

std::string to_string(const BinRule& rule) {
  struct Visitor {
    std::string operator()(bins::Sturges) const { return "sturges"; }
    std::string operator()(bins::Scott) const { return "scott"; }
    std::string operator()(bins::FreedmanDiaconis) const { return "fd"; }
    std::string operator()(bins::Fixed f) const { return std::to_string(f.count); }
  };
  return std::visit(Visitor{}, rule);
}

namespace {

int bins_from_width(double range, double width) {
  if (!(width > 0.0) || !(range > 0.0)) return 1;
  return std::max(1, static_cast<int>(std::ceil(range / width)));
}

void require_data_driven_length(std::size_t n) {
  if (n < 2) invalid_argument("data-driven bin rules need at least 2 values");
}

}  // namespace

int bin_count(std::span<const double> values, const BinRule& rule) {
  if (values.empty()) invalid_argument("cannot discretize an empty series");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  const double n = static_cast<double>(values.size());

  if (const auto* f = std::get_if<bins::Fixed>(&rule)) {
    if (f->count < 1) invalid_argument("fixed bin count must be >= 1");
    return f->count;
  }
  require_data_driven_length(values.size());
  if (std::holds_alternative<bins::Sturges>(rule)) {
    return static_cast<int>(std::ceil(std::log2(n))) + 1;
  }
  if (std::holds_alternative<bins::Scott>(rule)) {
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    return bins_from_width(range, 3.49 * sd * std::pow(n, -1.0 / 3.0));
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  return bins_from_width(range, 2.0 * iqr * std::pow(n, -1.0 / 3.0));
}

Discretized discretize(std::span<const double> values, const BinRule& rule) {
  const int b = bin_count(values, rule);
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;

  Discretized out;
  out.symbols.reserve(values.size());
  if (!(range > 0.0)) {
    out.bin_count = 1;
    out.symbols.assign(values.size(), 1);
    return out;
  }
  out.bin_count = b;
  for (double v : values) {
    const auto raw = static_cast<long long>(std::floor((v - lo) * b / range));
    out.symbols.push_back(static_cast<int>(std::clamp<long long>(raw, 0, b - 1)) + 1);
  }
  return out;
}

std::vector<TimeSeries> dataset_sincos_generate(int count_each, int length, double noise_sd,
                                                std::uint64_t seed) {
  if (count_each < 1) invalid_argument("count_each must be >= 1");
  if (length < 2) invalid_argument("length must be >= 2");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) invalid_argument("noise sd must be >= 0");

  std::mt19937_64 rng(seed);
  std::vector<TimeSeries> out;
  out.reserve(static_cast<std::size_t>(2 * count_each));
  for (int wave = 0; wave < 2; ++wave) {
    for (int c = 1; c <= count_each; ++c) {
      std::vector<double> values(static_cast<std::size_t>(length));
      for (int t = 0; t < length; ++t) {
        const double phase = 2.0 * std::numbers::pi * t / length;
        const double clean = wave == 0 ? std::sin(phase) : std::cos(phase);
        values[static_cast<std::size_t>(t)] =
            noise_sd > 0.0 ? clean + noise_sd * detail::standard_normal(rng) : clean;
      }
      out.emplace_back((wave == 0 ? "sin_" : "cos_") + std::to_string(c), std::move(values));
    }
  }
  return out;
}

EventSeries random_ets(int horizon, int n_events, std::uint64_t seed, std::string id) {
  if (horizon < 1) invalid_argument("horizon must be >= 1");
  if (n_events < 0 || n_events > horizon) {
    invalid_argument("n_events must lie in [0, horizon]");
  }
  std::vector<int> pool(static_cast<std::size_t>(horizon));
  std::iota(pool.begin(), pool.end(), 1);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first n_events slots are a uniform sample.
  for (int k = 0; k < n_events; ++k) {
    const auto pick = detail::uniform_index(rng, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(horizon - 1));
    std::swap(pool[static_cast<std::size_t>(k)], pool[pick]);
  }
  pool.resize(static_cast<std::size_t>(n_events));
  std::sort(pool.begin(), pool.end());
  return EventSeries(std::move(id), horizon, std::move(pool));
}

}  // namespace tsnet
