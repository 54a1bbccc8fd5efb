#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "tsnet/distances.hpp"
#include "tsnet/error.hpp"

namespace tsnet {

CorrelationMode parse_correlation_mode(const std::string& text) {
  if (text == "abs") return CorrelationMode::abs;
  if (text == "pos" || text == "+") return CorrelationMode::pos;
  if (text == "neg" || text == "-") return CorrelationMode::neg;
  invalid_argument("unknown correlation mode '" + text + "' (abs, pos, neg)");
}

const char* to_string(CorrelationMode mode) {
  switch (mode) {
    case CorrelationMode::abs: return "abs";
    case CorrelationMode::pos: return "pos";
    case CorrelationMode::neg: return "neg";
  }
  return "abs";
}

namespace {

// nullopt when either side has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = x[k] - mx;
    const double dy = y[k] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double similarity(double r, CorrelationMode mode) {
  switch (mode) {
    case CorrelationMode::abs: return std::abs(r);
    case CorrelationMode::pos: return std::max(0.0, r);
    case CorrelationMode::neg: return std::max(0.0, -r);
  }
  return 0.0;
}

void require_equal_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    invalid_argument("series lengths differ (" + std::to_string(a) + " vs " +
                     std::to_string(b) + ")");
  }
}

}  // namespace

double pcc(std::span<const double> x, std::span<const double> y) {
  require_equal_lengths(x.size(), y.size());
  if (x.size() < 3) invalid_argument("correlation needs at least 3 samples");
  auto r = pearson(x, y);
  if (!r) degenerate_input("correlation of a constant series is undefined");
  return *r;
}

double pcc(const TimeSeries& x, const TimeSeries& y) { return pcc(x.values(), y.values()); }

double correlation_distance(double r, CorrelationMode mode) { return 1.0 - similarity(r, mode); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) invalid_argument("normal quantile needs p in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

ConfidenceInterval fisher_ci(double r, std::size_t length, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) invalid_argument("alpha must lie in (0, 1)");
  if (length < 4) invalid_argument("Fisher interval needs at least 4 samples");
  if (!(std::abs(r) < 1.0)) degenerate_input("Fisher transform undefined for |r| = 1");
  const double z = std::atanh(r);
  const double half = normal_quantile(1.0 - alpha / 2.0) / std::sqrt(static_cast<double>(length) - 3.0);
  return {std::tanh(z - half), std::tanh(z + half)};
}

bool correlation_significant(double r, std::size_t length, CorrelationMode mode, double alpha) {
  const bool sign_ok = mode == CorrelationMode::abs || (mode == CorrelationMode::pos && r > 0.0) ||
                       (mode == CorrelationMode::neg && r < 0.0);
  if (!sign_ok) return false;
  if (std::abs(r) >= 1.0) {
    if (length < 4) invalid_argument("Fisher interval needs at least 4 samples");
    return true;
  }
  return !fisher_ci(r, length, alpha).contains(0.0);
}

double dist_cor(const TimeSeries& x, const TimeSeries& y, CorrelationMode mode,
                const std::optional<SignificanceSpec>& sig) {
  const double r = pcc(x, y);
  if (sig) {
    if (!std::holds_alternative<FisherZ>(sig->method)) {
      invalid_argument("correlation distances support only the Fisher z test");
    }
    if (!correlation_significant(r, x.size(), mode, sig->alpha)) return 1.0;
  }
  return correlation_distance(r, mode);
}

std::vector<std::optional<double>> cross_correlation(const TimeSeries& x, const TimeSeries& y,
                                                     int tau_max) {
  require_equal_lengths(x.size(), y.size());
  if (tau_max < 0) invalid_argument("tau_max must be >= 0");
  const auto length = static_cast<long long>(x.size());
  if (length - tau_max < 3) {
    invalid_argument("tau_max " + std::to_string(tau_max) + " leaves fewer than 3 overlapping samples");
  }
  auto xv = x.values();
  auto yv = y.values();
  std::vector<std::optional<double>> out;
  out.reserve(static_cast<std::size_t>(2 * tau_max + 1));
  for (int tau = -tau_max; tau <= tau_max; ++tau) {
    const auto shift = static_cast<std::size_t>(std::abs(tau));
    const std::size_t overlap = x.size() - shift;
    // Y lagged by tau pairs x[t] with y[t + tau].
    auto xs = tau >= 0 ? xv.subspan(0, overlap) : xv.subspan(shift, overlap);
    auto ys = tau >= 0 ? yv.subspan(shift, overlap) : yv.subspan(0, overlap);
    out.push_back(pearson(xs, ys));
  }
  return out;
}

double dist_ccf(const TimeSeries& x, const TimeSeries& y, int tau_max, CorrelationMode mode) {
  const auto lags = cross_correlation(x, y, tau_max);
  std::optional<double> best;
  for (const auto& r : lags) {
    if (!r) continue;
    const double s = similarity(*r, mode);
    best = best ? std::max(*best, s) : s;
  }
  if (!best) degenerate_input("every lag of the cross-correlation is degenerate");
  return 1.0 - *best;
}

}  // namespace tsnet
