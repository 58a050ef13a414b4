#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

// Small statistics helpers shared by the unit and acceptance tests.

namespace testutil {

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_stddev(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline double standard_error(const std::vector<double>& v) {
  return sample_stddev(v) / std::sqrt(static_cast<double>(v.size()));
}

/// Two-sample Kolmogorov-Smirnov statistic; inputs need not be sorted.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t n = a.size(), m = b.size();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < n && j < m) {
    const double x = std::min(a[i], b[j]);
    while (i < n && a[i] <= x) ++i;
    while (j < m && b[j] <= x) ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(n);
    const double fb = static_cast<double>(j) / static_cast<double>(m);
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

/// Critical value of the two-sample KS test at significance alpha = 0.01.
inline double ks_critical_alpha01(std::size_t n, std::size_t m) {
  const double c = 1.62762;  // sqrt(-ln(alpha/2)/2) for alpha = 0.01
  return c * std::sqrt(static_cast<double>(n + m) /
                       (static_cast<double>(n) * static_cast<double>(m)));
}

/// Inter-click gaps of a slot sequence (consecutive differences).
inline std::vector<double> gaps_of(const std::vector<std::uint64_t>& slots) {
  std::vector<double> g;
  if (slots.size() < 2) return g;
  g.reserve(slots.size() - 1);
  for (std::size_t i = 1; i < slots.size(); ++i)
    g.push_back(static_cast<double>(slots[i] - slots[i - 1]));
  return g;
}

}  // namespace testutil
