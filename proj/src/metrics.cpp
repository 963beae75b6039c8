#include "kinex/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "kinex/error.hpp"

namespace kinex {

namespace {

std::vector<double> sorted_copy(std::span<const double> wealth) {
  if (wealth.size() < 2) {
    throw Error(ErrorKind::InvalidConfig, "need at least 2 agents");
  }
  std::vector<double> r(wealth.begin(), wealth.end());
  std::stable_sort(r.begin(), r.end());
  return r;
}

}  // namespace

double gini(std::span<const double> wealth) {
  const std::vector<double> r = sorted_copy(wealth);
  const double n = static_cast<double>(r.size());
  double total = 0.0;
  double ranked = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    total += r[k];
    ranked += static_cast<double>(k + 1) * r[k];
  }
  if (!(total > 0.0)) {
    throw Error(ErrorKind::ZeroTotalWealth, "Gini index undefined: total wealth is zero");
  }
  const double g = 2.0 * ranked / (n * total) - (n + 1.0) / n;
  return std::clamp(g, 0.0, (n - 1.0) / n);
}

std::vector<LorenzPoint> lorenz(std::span<const double> wealth) {
  const std::vector<double> r = sorted_copy(wealth);
  const double total = std::accumulate(r.begin(), r.end(), 0.0);
  if (!(total > 0.0)) {
    throw Error(ErrorKind::ZeroTotalWealth, "Lorenz curve undefined: total wealth is zero");
  }
  const double n = static_cast<double>(r.size());
  std::vector<LorenzPoint> points;
  points.reserve(r.size() + 1);
  points.push_back({0.0, 0.0});
  double cum = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    cum += r[k];
    points.push_back({static_cast<double>(k + 1) / n, cum / total});
  }
  points.back() = {1.0, 1.0};
  return points;
}

double FlowAccumulator::finalize() const {
  if (events_ == 0) {
    throw Error(ErrorKind::EmptyInput, "total exchange undefined before the first event");
  }
  return volume_sum_ / (2.0 * static_cast<double>(events_));
}

std::uint64_t Histogram::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), underflow + overflow);
}

std::size_t Histogram::mode_bin() const noexcept {
  return static_cast<std::size_t>(
      std::distance(counts.begin(), std::max_element(counts.begin(), counts.end())));
}

Histogram histogram(std::span<const double> wealth, const HistogramOptions& options) {
  if (options.n_bins == 0) {
    throw Error(ErrorKind::InvalidConfig, "histogram needs at least one bin");
  }
  const bool log_scale = options.scheme == BinScheme::Logarithmic;

  double max_w = 0.0;
  double min_pos = std::numeric_limits<double>::infinity();
  for (double w : wealth) {
    max_w = std::max(max_w, w);
    if (w > 0.0) min_pos = std::min(min_pos, w);
  }

  double lo = options.lo.value_or(log_scale ? min_pos : 0.0);
  double hi = options.hi.value_or(std::nextafter(max_w, std::numeric_limits<double>::infinity()));
  if (!std::isfinite(lo)) lo = 1.0;  // no positive wealth at all
  if (!(hi > lo)) hi = log_scale ? lo * 2.0 : lo + 1.0;
  if (log_scale && !(lo > 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "logarithmic histogram needs a positive lower edge");
  }

  Histogram h{options.scheme, {}, std::vector<std::uint64_t>(options.n_bins, 0), 0, 0};
  h.edges.resize(options.n_bins + 1);
  const double nb = static_cast<double>(options.n_bins);
  for (std::size_t k = 0; k <= options.n_bins; ++k) {
    const double u = static_cast<double>(k) / nb;
    h.edges[k] = log_scale ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u;
  }
  h.edges.front() = lo;
  h.edges.back() = hi;

  for (double w : wealth) {
    if (w < lo || (log_scale && w <= 0.0)) {
      ++h.underflow;
      continue;
    }
    if (w >= hi) {
      ++h.overflow;
      continue;
    }
    // Locate the bin from the edges themselves so the half-open rule holds
    // exactly at the boundaries.
    auto it = std::upper_bound(h.edges.begin(), h.edges.end(), w);
    const auto bin = static_cast<std::size_t>(std::distance(h.edges.begin(), it)) - 1;
    ++h.counts[std::min(bin, options.n_bins - 1)];
  }
  return h;
}

double top_share(std::span<const double> wealth, double fraction) {
  std::vector<double> r = sorted_copy(wealth);
  const double total = std::accumulate(r.begin(), r.end(), 0.0);
  if (!(total > 0.0)) {
    throw Error(ErrorKind::ZeroTotalWealth, "top share undefined: total wealth is zero");
  }
  auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(r.size())));
  k = std::clamp<std::size_t>(k, 1, r.size());
  const double top = std::accumulate(r.end() - static_cast<std::ptrdiff_t>(k), r.end(), 0.0);
  return top / total;
}

}  // namespace kinex
