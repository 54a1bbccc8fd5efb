#include <algorithm>
#include <cmath>
#include <map>

#include "tsnet/distances.hpp"
#include "tsnet/error.hpp"

namespace tsnet {

namespace {

// Counts are summed in sorted order so that the result depends only on the
// multiset of counts; this keeps H(X,Y) == H(Y,X) bit for bit.
double entropy_from_counts(std::vector<std::size_t> counts, std::size_t total) {
  std::sort(counts.begin(), counts.end());
  const auto n = static_cast<double>(total);
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return h;
}

template <typename Key>
std::vector<std::size_t> tally(const std::map<Key, std::size_t>& m) {
  std::vector<std::size_t> counts;
  counts.reserve(m.size());
  for (const auto& [key, count] : m) counts.push_back(count);
  return counts;
}

}  // namespace

double entropy(std::span<const int> symbols) {
  if (symbols.empty()) invalid_argument("entropy of an empty sequence");
  std::map<int, std::size_t> counts;
  for (int s : symbols) ++counts[s];
  return entropy_from_counts(tally(counts), symbols.size());
}

double joint_entropy(std::span<const int> xs, std::span<const int> ys) {
  if (xs.size() != ys.size()) invalid_argument("symbol sequences differ in length");
  if (xs.empty()) invalid_argument("entropy of an empty sequence");
  std::map<std::pair<int, int>, std::size_t> counts;
  for (std::size_t k = 0; k < xs.size(); ++k) ++counts[{xs[k], ys[k]}];
  return entropy_from_counts(tally(counts), xs.size());
}

double mutual_info(std::span<const int> xs, std::span<const int> ys) {
  const double hxy = joint_entropy(xs, ys);
  return std::max(0.0, entropy(xs) + entropy(ys) - hxy);
}

NmiNorm parse_nmi_norm(const std::string& text) {
  if (text == "half_sum") return NmiNorm::half_sum;
  if (text == "min") return NmiNorm::min;
  if (text == "max") return NmiNorm::max;
  if (text == "sqrt") return NmiNorm::sqrt;
  invalid_argument("unknown NMI normalization '" + text + "' (half_sum, min, max, sqrt)");
}

const char* to_string(NmiNorm norm) {
  switch (norm) {
    case NmiNorm::half_sum: return "half_sum";
    case NmiNorm::min: return "min";
    case NmiNorm::max: return "max";
    case NmiNorm::sqrt: return "sqrt";
  }
  return "sqrt";
}

namespace {

struct InfoTerms {
  double hx;
  double hy;
  double mi;
};

InfoTerms information_terms(const TimeSeries& x, const TimeSeries& y, const BinRule& rule) {
  if (x.size() != y.size()) invalid_argument("series lengths differ");
  if (x.size() < 2) invalid_argument("information distances need at least 2 samples");
  const auto dx = discretize(x.values(), rule);
  const auto dy = discretize(y.values(), rule);
  const double hx = entropy(dx.symbols);
  const double hy = entropy(dy.symbols);
  const double hxy = joint_entropy(dx.symbols, dy.symbols);
  return {hx, hy, std::max(0.0, hx + hy - hxy)};
}

}  // namespace

double dist_nmi(const TimeSeries& x, const TimeSeries& y, const BinRule& rule, NmiNorm norm) {
  const auto [hx, hy, mi] = information_terms(x, y, rule);
  if (hx == 0.0 && hy == 0.0) return 0.0;
  double u = 0.0;
  switch (norm) {
    case NmiNorm::half_sum: u = 0.5 * (hx + hy); break;
    case NmiNorm::min: u = std::min(hx, hy); break;
    case NmiNorm::max: u = std::max(hx, hy); break;
    case NmiNorm::sqrt: u = std::sqrt(hx * hy); break;
  }
  const double nmi = u > 0.0 ? std::clamp(mi / u, 0.0, 1.0) : 0.0;
  return 1.0 - nmi;
}

double dist_voi(const TimeSeries& x, const TimeSeries& y, const BinRule& rule) {
  const auto [hx, hy, mi] = information_terms(x, y, rule);
  return std::max(0.0, hx + hy - 2.0 * mi);
}

}  // namespace tsnet
