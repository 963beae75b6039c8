#pragma once
// Independent reference computations used to check the library. Nothing here
// calls into kinex.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace oracle {

/// Mean-absolute-difference Gini: Σ_ij |m_i − m_j| / (2·N·Σ m).
inline double gini_mad(const std::vector<double>& m) {
  double diff = 0.0;
  double total = 0.0;
  for (double a : m) {
    total += a;
    for (double b : m) diff += std::abs(a - b);
  }
  return diff / (2.0 * static_cast<double>(m.size()) * total);
}

/// Area under the Lorenz curve of m by the trapezoid rule.
inline double lorenz_area(std::vector<double> m) {
  std::sort(m.begin(), m.end());
  double total = 0.0;
  for (double v : m) total += v;
  const double n = static_cast<double>(m.size());
  double area = 0.0;
  double prev = 0.0;
  double cum = 0.0;
  for (double v : m) {
    cum += v / total;
    area += 0.5 * (prev + cum) / n;
    prev = cum;
  }
  return area;
}

/// Probability mass of a unit exponential on [a, b).
inline double exp_mass(double a, double b) { return std::exp(-a) - std::exp(-b); }

/// Pearson chi-square statistic against equal expected counts.
inline double chi_square_uniform(const std::vector<std::size_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double chi2 = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    chi2 += d * d / expected;
  }
  return chi2;
}

inline std::vector<double> exponential_samples(std::size_t n, unsigned long long seed) {
  std::mt19937_64 gen(seed);
  std::exponential_distribution<double> dist(1.0);
  std::vector<double> out(n);
  for (double& v : out) v = dist(gen);
  return out;
}

}  // namespace oracle
