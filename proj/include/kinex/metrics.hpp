#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kinex/exchange.hpp"

namespace kinex {

/// Gini index from the ascending rank formula
///   g = 2·Σ i·r_i / (N·Σ r_i) − (N+1)/N,  i = 1..N.
/// The value is clamped to [0, (N−1)/N], the range the formula attains for
/// finite N; a single holder gives (N−1)/N rather than 1.
/// Throws ZeroTotalWealth when the wealths sum to zero and InvalidConfig for
/// fewer than two agents.
double gini(std::span<const double> wealth);
inline double gini(const WealthState& state) { return gini(state.wealth()); }

struct LorenzPoint {
  double population_share;
  double wealth_share;
};

/// N+1 points from (0,0) to (1,1) over the ascending wealths.
std::vector<LorenzPoint> lorenz(std::span<const double> wealth);
inline std::vector<LorenzPoint> lorenz(const WealthState& state) {
  return lorenz(state.wealth());
}

/// Running sum of per-event exchange volume.
class FlowAccumulator {
 public:
  void add(const PairOutcome& outcome) noexcept {
    volume_sum_ += outcome.volume;
    ++events_;
  }

  double volume_sum() const noexcept { return volume_sum_; }
  std::uint64_t events() const noexcept { return events_; }

  /// f = volume_sum / (2·events). Throws EmptyInput before the first event.
  double finalize() const;

 private:
  double volume_sum_ = 0.0;
  std::uint64_t events_ = 0;
};

enum class BinScheme { Linear, Logarithmic };

struct HistogramOptions {
  BinScheme scheme = BinScheme::Linear;
  std::size_t n_bins = 50;
  /// Explicit range [lo, hi). Defaults: linear [0, max], logarithmic
  /// [smallest positive, max], with the top edge nudged so max falls inside.
  std::optional<double> lo;
  std::optional<double> hi;
};

/// Counts over half-open bins [edge_k, edge_{k+1}). Values below the first
/// edge (including zero wealth under logarithmic binning) go to `underflow`,
/// values at or above the last edge to `overflow`; the three always add up
/// to N.
struct Histogram {
  BinScheme scheme;
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;

  std::uint64_t total() const noexcept;
  /// Index of the fullest bin; the first one on ties.
  std::size_t mode_bin() const noexcept;
};

Histogram histogram(std::span<const double> wealth, const HistogramOptions& options);

/// Share of total wealth held by the richest `fraction` of agents (at least one).
double top_share(std::span<const double> wealth, double fraction);

}  // namespace kinex
