#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tsnet/series.hpp"

namespace tsnet {

// ---------------------------------------------------------------------------
// Correlation family

/// abs links correlated and anti-correlated pairs, pos only r > 0, neg only r < 0.
enum class CorrelationMode { abs, pos, neg };

/// Accepts abs/pos/neg and the shorthands "+" and "-".
CorrelationMode parse_correlation_mode(const std::string& text);
const char* to_string(CorrelationMode mode);

struct FisherZ {};
struct Surrogate {
  int n_surrogates = 100;
  std::uint64_t seed = 0;
};

struct SignificanceSpec {
  double alpha = 0.05;
  std::variant<FisherZ, Surrogate> method = FisherZ{};
};

/// Pearson correlation. Requires equal lengths >= 3 and non-constant inputs.
double pcc(std::span<const double> x, std::span<const double> y);
double pcc(const TimeSeries& x, const TimeSeries& y);

/// 1 - |r|, 1 - max(0, r) or 1 - max(0, -r).
double correlation_distance(double r, CorrelationMode mode);

struct ConfidenceInterval {
  double lo;
  double hi;
  bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Standard normal quantile.
double normal_quantile(double p);

/// Fisher z interval for a correlation r estimated from T samples.
ConfidenceInterval fisher_ci(double r, std::size_t length, double alpha);

/// True when r's interval excludes zero and r has the sign `mode` asks for.
/// A perfect correlation (|r| = 1) counts as significant.
bool correlation_significant(double r, std::size_t length, CorrelationMode mode, double alpha);

/// Correlation distance; with a Fisher test, non-significant pairs get 1.
double dist_cor(const TimeSeries& x, const TimeSeries& y, CorrelationMode mode,
                const std::optional<SignificanceSpec>& sig = std::nullopt);

/// r(X, Y lagged by tau) on the overlapping samples for tau in
/// [-tau_max, tau_max]; entry tau_max + tau. Lags whose overlap is constant
/// hold nullopt.
std::vector<std::optional<double>> cross_correlation(const TimeSeries& x, const TimeSeries& y,
                                                     int tau_max);

double dist_ccf(const TimeSeries& x, const TimeSeries& y, int tau_max, CorrelationMode mode);

// ---------------------------------------------------------------------------
// Information theory (natural log)

double entropy(std::span<const int> symbols);
double joint_entropy(std::span<const int> xs, std::span<const int> ys);
double mutual_info(std::span<const int> xs, std::span<const int> ys);

enum class NmiNorm { half_sum, min, max, sqrt };
NmiNorm parse_nmi_norm(const std::string& text);
const char* to_string(NmiNorm norm);

double dist_nmi(const TimeSeries& x, const TimeSeries& y, const BinRule& rule,
                NmiNorm norm = NmiNorm::sqrt);
double dist_voi(const TimeSeries& x, const TimeSeries& y, const BinRule& rule);

// ---------------------------------------------------------------------------
// Elastic

/// Cumulative DTW cost with |x_i - y_j| local cost.
double dtw(std::span<const double> x, std::span<const double> y);
double dtw(const TimeSeries& x, const TimeSeries& y);

// ---------------------------------------------------------------------------
// Event synchronization and van Rossum

struct FixedWindow {
  double tau;
};
/// Per-pair window: half the smallest neighbouring inter-event gap, capped
/// at tau_max when set.
struct LocalWindow {
  std::optional<double> tau_max;
};
using EsWindow = std::variant<FixedWindow, LocalWindow>;

enum class EsMode { symmetric, asymmetric };

struct EsParams {
  EsWindow window = FixedWindow{1.0};
  EsMode mode = EsMode::symmetric;
};

/// c(X|Y): how often an event of x follows an event of y within the window
/// (coincident events count 1/2).
double es_count(const EventSeries& x, const EventSeries& y, const EsWindow& window);

struct EsResult {
  double distance;
  /// Set when the raw value left [0, 1] and was clamped.
  bool clamped = false;
  double raw = 0.0;
};

EsResult dist_es(const EventSeries& x, const EventSeries& y, const EsParams& params);

using EventDistance = std::function<double(const EventSeries&, const EventSeries&)>;

struct SurrogateResult {
  double observed;
  std::vector<double> null_distribution;
  /// alpha-quantile of the null distribution.
  double threshold;
  bool significant;
};

/// Resamples both event sets uniformly without replacement (same counts and
/// horizons) `n_surrogates` times and compares the observed distance with
/// the alpha-quantile of the resulting null distribution.
SurrogateResult surrogate_test(const EventSeries& x, const EventSeries& y,
                               const EventDistance& distance, const Surrogate& spec,
                               double alpha);

struct EsSignificance {
  EsResult es;
  SurrogateResult test;
};

EsSignificance dist_es(const EventSeries& x, const EventSeries& y, const EsParams& params,
                       const SignificanceSpec& sig);

enum class VrKernel { gaussian, laplacian };

struct VrParams {
  VrKernel kernel = VrKernel::laplacian;
  double tau = 1.0;
};

/// L2 distance between the kernel-filtered event trains, integrated over
/// [0, horizon + 8 tau] with Simpson's rule on a grid of spacing <= tau/20
/// split at every event time.
double dist_vr(const EventSeries& x, const EventSeries& y, const VrParams& params);

/// Kernel-filtered train V(t) = 1/N sum h(t - t_i) u(t - t_i).
double vr_filtered(const EventSeries& events, const VrParams& params, double t);

}  // namespace tsnet
