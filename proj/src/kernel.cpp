#include "tsnet/kernel.hpp"

#include "tsnet/error.hpp"

namespace tsnet {

EventSeries to_events(const TimeSeries& series, const KernelConfig& config) {
  if (config.events_percentile) {
    return events_from_ts(series, *config.events_percentile, config.events_direction);
  }
  return EventSeries::from_indicator(series);
}

namespace {

const SignificanceSpec& require_significance(const KernelConfig& config) {
  if (!config.significance) invalid_argument("metric '" + config.metric + "' has no significance test configured");
  return *config.significance;
}

const Surrogate& require_surrogate(const KernelConfig& config) {
  const auto& sig = require_significance(config);
  const auto* s = std::get_if<Surrogate>(&sig.method);
  if (!s) invalid_argument("metric '" + config.metric + "' needs the surrogate test");
  return *s;
}

}  // namespace

Kernel make_kernel(const KernelConfig& c) {
  const std::string& m = c.metric;
  if (m == "cor") {
    if (c.significance && !std::holds_alternative<FisherZ>(c.significance->method)) {
      invalid_argument("cor supports only the Fisher test");
    }
    return {m, [c](const TimeSeries& x, const TimeSeries& y) {
              return dist_cor(x, y, c.mode, c.significance);
            }};
  }
  if (c.significance && m != "es" && m != "vr") {
    invalid_argument("metric '" + m + "' has no significance test");
  }
  if (m == "ccf") {
    if (c.tau_max < 0) invalid_argument("tau_max must be >= 0");
    return {m, [c](const TimeSeries& x, const TimeSeries& y) {
              return dist_ccf(x, y, c.tau_max, c.mode);
            }};
  }
  if (m == "nmi") {
    return {m, [c](const TimeSeries& x, const TimeSeries& y) {
              return dist_nmi(x, y, c.bins, c.norm);
            }};
  }
  if (m == "voi") {
    return {m, [c](const TimeSeries& x, const TimeSeries& y) { return dist_voi(x, y, c.bins); }};
  }
  if (m == "dtw") {
    return {m, [](const TimeSeries& x, const TimeSeries& y) { return dtw(x, y); }};
  }
  if (m == "es") {
    if (c.significance) require_surrogate(c);
    const bool symmetric = c.es.mode == EsMode::symmetric;
    return {m,
            [c](const TimeSeries& x, const TimeSeries& y) {
              const auto ex = to_events(x, c);
              const auto ey = to_events(y, c);
              if (!c.significance) return dist_es(ex, ey, c.es).distance;
              const auto r = dist_es(ex, ey, c.es, *c.significance);
              return r.test.significant ? r.es.distance : 1.0;
            },
            symmetric};
  }
  if (m == "vr") {
    if (c.significance) require_surrogate(c);
    return {m, [c](const TimeSeries& x, const TimeSeries& y) {
              const auto ex = to_events(x, c);
              const auto ey = to_events(y, c);
              const double d = dist_vr(ex, ey, c.vr);
              if (!c.significance) return d;
              auto vr = [&c](const EventSeries& a, const EventSeries& b) {
                return dist_vr(a, b, c.vr);
              };
              const auto test = surrogate_test(ex, ey, vr, std::get<Surrogate>(c.significance->method),
                                               c.significance->alpha);
              return test.significant ? d : 1.0;
            }};
  }
  invalid_argument("unknown metric '" + m + "' (cor, ccf, nmi, voi, dtw, es, vr)");
}

PairTest make_significance_test(const KernelConfig& c) {
  const auto& sig = require_significance(c);
  if (c.metric == "cor") {
    if (!std::holds_alternative<FisherZ>(sig.method)) invalid_argument("cor supports only the Fisher test");
    return [c, alpha = sig.alpha](const TimeSeries& x, const TimeSeries& y) {
      return correlation_significant(pcc(x, y), x.size(), c.mode, alpha);
    };
  }
  if (c.metric == "es" || c.metric == "vr") {
    const auto& surrogate = require_surrogate(c);
    return [c, surrogate, alpha = sig.alpha](const TimeSeries& x, const TimeSeries& y) {
      const auto ex = to_events(x, c);
      const auto ey = to_events(y, c);
      EventDistance d;
      if (c.metric == "es") {
        d = [&c](const EventSeries& a, const EventSeries& b) { return dist_es(a, b, c.es).distance; };
      } else {
        d = [&c](const EventSeries& a, const EventSeries& b) { return dist_vr(a, b, c.vr); };
      }
      return surrogate_test(ex, ey, d, surrogate, alpha).significant;
    };
  }
  invalid_argument("metric '" + c.metric + "' has no significance test");
}

}  // namespace tsnet
