#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "tsnet/distances.hpp"
#include "tsnet/error.hpp"
#include "portable_random.hpp"

namespace tsnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest gap to the neighbouring events of times[k]; +inf for a lone event.
double neighbour_gap(std::span<const int> times, std::size_t k) {
  double gap = kInf;
  if (k + 1 < times.size()) gap = std::min(gap, static_cast<double>(times[k + 1] - times[k]));
  if (k > 0) gap = std::min(gap, static_cast<double>(times[k] - times[k - 1]));
  return gap;
}

double window_for(const EsWindow& window, std::span<const int> xt, std::size_t i,
                  std::span<const int> yt, std::size_t j) {
  if (const auto* fixed = std::get_if<FixedWindow>(&window)) return fixed->tau;
  const auto& local = std::get<LocalWindow>(window);
  double tau = std::min(neighbour_gap(xt, i), neighbour_gap(yt, j)) / 2.0;
  if (local.tau_max) tau = std::min(tau, *local.tau_max);
  return tau;
}

void validate(const EsWindow& window) {
  if (const auto* fixed = std::get_if<FixedWindow>(&window)) {
    if (!(fixed->tau > 0.0)) invalid_argument("event synchronization window tau must be > 0");
  } else if (const auto& local = std::get<LocalWindow>(window); local.tau_max) {
    if (!(*local.tau_max > 0.0)) invalid_argument("tau_max must be > 0");
  }
}

std::vector<int> sample_times(int horizon, std::size_t count, std::mt19937_64& rng) {
  std::vector<int> pool(static_cast<std::size_t>(horizon));
  std::iota(pool.begin(), pool.end(), 1);
  for (std::size_t k = 0; k < count; ++k) {
    std::swap(pool[k], pool[detail::uniform_index(rng, k, pool.size() - 1)]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

double es_count(const EventSeries& x, const EventSeries& y, const EsWindow& window) {
  validate(window);
  const auto xt = x.times();
  const auto yt = y.times();
  double c = 0.0;
  for (std::size_t i = 0; i < xt.size(); ++i) {
    for (std::size_t j = 0; j < yt.size(); ++j) {
      const int lag = xt[i] - yt[j];
      if (lag == 0) {
        c += 0.5;
      } else if (lag > 0 && lag <= window_for(window, xt, i, yt, j)) {
        c += 1.0;
      }
    }
  }
  return c;
}

EsResult dist_es(const EventSeries& x, const EventSeries& y, const EsParams& params) {
  if (x.count() == 0 || y.count() == 0) {
    degenerate_input("event synchronization needs at least one event in each series");
  }
  const double cxy = es_count(x, y, params.window);
  const double cyx = es_count(y, x, params.window);
  const double norm = std::sqrt(static_cast<double>(x.count()) * static_cast<double>(y.count()));
  double raw = 0.0;
  if (params.mode == EsMode::symmetric) {
    raw = 1.0 - (cxy + cyx) / norm;
  } else {
    raw = 1.0 - (cyx - cxy + norm) / (2.0 * norm);
  }
  const double clamped = std::clamp(raw, 0.0, 1.0);
  return {clamped, clamped != raw, raw};
}

SurrogateResult surrogate_test(const EventSeries& x, const EventSeries& y,
                               const EventDistance& distance, const Surrogate& spec,
                               double alpha) {
  if (spec.n_surrogates < 1) invalid_argument("surrogate test needs n_surrogates >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) invalid_argument("alpha must lie in (0, 1)");
  SurrogateResult result{distance(x, y), {}, 0.0, false};
  std::mt19937_64 rng(spec.seed);
  result.null_distribution.reserve(static_cast<std::size_t>(spec.n_surrogates));
  for (int s = 0; s < spec.n_surrogates; ++s) {
    EventSeries xs(x.id(), x.horizon(), sample_times(x.horizon(), x.count(), rng));
    EventSeries ys(y.id(), y.horizon(), sample_times(y.horizon(), y.count(), rng));
    result.null_distribution.push_back(distance(xs, ys));
  }
  result.threshold = quantile(result.null_distribution, alpha);
  result.significant = result.observed < result.threshold;
  return result;
}

EsSignificance dist_es(const EventSeries& x, const EventSeries& y, const EsParams& params,
                       const SignificanceSpec& sig) {
  const auto* surrogate = std::get_if<Surrogate>(&sig.method);
  if (!surrogate) invalid_argument("event synchronization supports only the surrogate test");
  EsResult es = dist_es(x, y, params);
  auto test = surrogate_test(
      x, y, [&](const EventSeries& a, const EventSeries& b) { return dist_es(a, b, params).distance; },
      *surrogate, sig.alpha);
  return {es, std::move(test)};
}

namespace {

double kernel_value(VrKernel kernel, double tau, double s) {
  if (kernel == VrKernel::gaussian) {
    return std::exp(-s * s / (2.0 * tau * tau)) / std::sqrt(2.0 * std::numbers::pi * tau * tau);
  }
  return std::exp(-std::abs(s) / tau) / (2.0 * tau);
}

// Beyond this lag a kernel contributes below 1e-17 relative to its peak.
double kernel_reach(VrKernel kernel, double tau) {
  return kernel == VrKernel::gaussian ? 9.0 * tau : 40.0 * tau;
}

// Filtered train on a segment with no interior events: only events at or
// before `active_until` contribute.
double filtered_on_segment(std::span<const int> times, const VrParams& p, double t,
                           double active_until) {
  if (times.empty()) return 0.0;
  const double reach = kernel_reach(p.kernel, p.tau);
  double v = 0.0;
  for (int ti : times) {
    const double ev = static_cast<double>(ti);
    if (ev > active_until) break;
    const double s = t - ev;
    if (s > reach) continue;
    v += kernel_value(p.kernel, p.tau, s);
  }
  return v / static_cast<double>(times.size());
}

}  // namespace

double vr_filtered(const EventSeries& events, const VrParams& params, double t) {
  return filtered_on_segment(events.times(), params, t, t);
}

double dist_vr(const EventSeries& x, const EventSeries& y, const VrParams& params) {
  if (!(params.tau > 0.0) || !std::isfinite(params.tau)) {
    invalid_argument("van Rossum tau must be > 0");
  }
  if (x.count() == 0 && y.count() == 0) return 0.0;
  const double end = static_cast<double>(std::max(x.horizon(), y.horizon())) + 8.0 * params.tau;

  std::vector<double> breaks{0.0, end};
  for (int t : x.times()) breaks.push_back(t);
  for (int t : y.times()) breaks.push_back(t);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const double max_step = params.tau / 20.0;
  double integral = 0.0;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double a = breaks[b];
    const double c = breaks[b + 1];
    auto intervals = static_cast<std::size_t>(std::ceil((c - a) / max_step));
    intervals = std::max<std::size_t>(2, intervals + (intervals % 2));
    const double h = (c - a) / static_cast<double>(intervals);
    auto sq_diff = [&](double t) {
      const double d = filtered_on_segment(x.times(), params, t, a) -
                       filtered_on_segment(y.times(), params, t, a);
      return d * d;
    };
    // Composite Simpson on [a, c].
    double sum = sq_diff(a) + sq_diff(c);
    for (std::size_t k = 1; k < intervals; ++k) {
      sum += (k % 2 ? 4.0 : 2.0) * sq_diff(a + h * static_cast<double>(k));
    }
    integral += sum * h / 3.0;
  }
  return std::sqrt(std::max(0.0, integral));
}

}  // namespace tsnet
