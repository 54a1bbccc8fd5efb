#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tsnet/distances.hpp"
#include "tsnet/error.hpp"

namespace tsnet {

double dtw(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) invalid_argument("dtw needs non-empty series");
  constexpr double inf = std::numeric_limits<double>::infinity();
  // Two rows of the (|x|+1) x (|y|+1) table; column 0 is the infinite
  // boundary except at the origin.
  std::vector<double> prev(y.size() + 1, inf);
  std::vector<double> curr(y.size() + 1, inf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    curr[0] = inf;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      const double best = std::min({prev[j], curr[j - 1], prev[j - 1]});
      curr[j] = std::abs(x[i - 1] - y[j - 1]) + best;
    }
    std::swap(prev, curr);
  }
  return prev[y.size()];
}

double dtw(const TimeSeries& x, const TimeSeries& y) { return dtw(x.values(), y.values()); }

}  // namespace tsnet
