#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace arcpoly {

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Number of indices i with y[i+1] >= y[i].
inline int non_monotone_steps(std::span<const double> y) {
  int count = 0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i)
    if (y[i + 1] >= y[i]) ++count;
  return count;
}

/// Relative spread max/min - 1.
inline double relative_spread(std::span<const double> y) {
  double lo = INFINITY, hi = -INFINITY;
  for (double v : y) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi / lo - 1.0;
}

} // namespace arcpoly
