#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kinex/simulation.hpp"

namespace kinex {

/// Composite redistribution parameter ξ/(t_p·10⁻³); empty unless Ex.
std::optional<double> x_ex(const ModelSpec& model) noexcept;
/// Composite mutual-aid parameter (1−λ)·γ; empty unless Nx.
std::optional<double> x_nx(const ModelSpec& model) noexcept;

/// Cartesian grid over the parameters that apply to `model`, with replicates.
struct SweepGrid {
  ModelKind model = ModelKind::Nx;
  std::vector<double> lambda;
  std::vector<double> xi;
  std::vector<std::uint64_t> tp;
  std::vector<double> gamma;
  std::size_t replicates = 1;
  std::size_t n_agents = 1000;
  std::uint64_t t_max = 1'000'000;
  std::uint64_t master_seed = 0;
  double initial_wealth = 1.0;

  void validate() const;

  /// Grid points in canonical order: lambda outermost, then xi, tp, gamma.
  std::vector<ModelSpec> points() const;

  friend bool operator==(const SweepGrid&, const SweepGrid&) = default;
};

struct SweepRow {
  std::size_t point = 0;
  ModelSpec model;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  double g = 0.0;
  double f = 0.0;
  /// Empty when g = 0.
  std::optional<double> f_over_g;
};

/// Runs every config and returns the records in input order. The OpenMP
/// version spreads runs over `jobs` threads; the result is bit-identical to
/// run_batch_serial. If any run throws, the exception of the lowest-index
/// failing run is rethrown after all runs finish.
std::vector<SimRecord> run_batch(std::span<const SimConfig> configs, int jobs);
std::vector<SimRecord> run_batch_serial(std::span<const SimConfig> configs);

/// One run per (point, replicate) with seed derive_seed(master_seed, point,
/// replicate); no checkpoints or snapshots. Rows come back ordered by point,
/// then replicate.
std::vector<SweepRow> run_points(std::span<const ModelSpec> points, std::size_t replicates,
                                 std::size_t n_agents, std::uint64_t t_max,
                                 std::uint64_t master_seed, int jobs,
                                 double initial_wealth = 1.0);

std::vector<SweepRow> run_sweep(const SweepGrid& grid, int jobs);
std::vector<SweepRow> run_sweep_serial(const SweepGrid& grid);

struct Moments {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for a single value
  std::size_t n = 0;
};

struct PointSummary {
  ModelSpec model;
  Moments g;
  Moments f;
  /// Per-replicate f/g, then averaged. Rows with g = 0 are left out.
  std::optional<Moments> f_over_g;
  std::size_t f_over_g_excluded = 0;
  /// mean f / mean g, for comparison with the per-replicate average.
  std::optional<double> ratio_of_means;
};

/// Groups rows by parameter set, in order of first appearance. Throws
/// EmptyInput on an empty table.
std::vector<PointSummary> aggregate(std::span<const SweepRow> rows);

}  // namespace kinex
