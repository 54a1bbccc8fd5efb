#pragma once

#include <functional>
#include <optional>
#include <string>

#include "tsnet/distances.hpp"
#include "tsnet/series.hpp"

namespace tsnet {

using SeriesDistance = std::function<double(const TimeSeries&, const TimeSeries&)>;
using PairTest = std::function<bool(const TimeSeries&, const TimeSeries&)>;

/// A distance function over time series plus what the matrix engine needs
/// to know about it.
struct Kernel {
  std::string name;
  SeriesDistance distance;
  bool symmetric = true;
};

/// Named kernels and their parameters, as selected on the command line.
///
/// Event metrics (es, vr) read each series either as a 0/1 indicator
/// (nonzero = event) or, when `events_percentile` is set, extract events
/// with `events_from_ts` first.
struct KernelConfig {
  std::string metric = "cor";  // cor, ccf, nmi, voi, dtw, es, vr

  CorrelationMode mode = CorrelationMode::abs;
  std::optional<SignificanceSpec> significance;
  int tau_max = 0;  // ccf lag bound

  BinRule bins = bins::Sturges{};
  NmiNorm norm = NmiNorm::sqrt;

  std::optional<double> events_percentile;
  EventDirection events_direction = EventDirection::highest;
  EsParams es;
  VrParams vr;
};

Kernel make_kernel(const KernelConfig& config);

/// Pairwise significance predicate: Fisher test for cor, surrogate test
/// for es and vr.
PairTest make_significance_test(const KernelConfig& config);

/// Event view of a series under the config's event-extraction rule.
EventSeries to_events(const TimeSeries& series, const KernelConfig& config);

}  // namespace tsnet
