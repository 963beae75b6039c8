#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kinex/exchange.hpp"
#include "kinex/rng.hpp"

namespace kinex {

enum class ModelKind { Basic, Ex, Nx };

std::string_view to_string(ModelKind kind) noexcept;
/// "basic" | "ex" | "nx"; throws InvalidConfig otherwise.
ModelKind parse_model_kind(std::string_view name);

/// Exchange rule plus the parameters it uses. Parameters that do not apply to
/// the rule stay empty: xi and tp only for Ex, gamma only for Nx.
struct ModelSpec {
  ModelKind kind = ModelKind::Basic;
  double lambda = 0.0;
  std::optional<double> xi;
  std::optional<std::uint64_t> tp;
  std::optional<double> gamma;

  static ModelSpec basic(double lambda) { return {ModelKind::Basic, lambda, {}, {}, {}}; }
  static ModelSpec ex(double lambda, double xi, std::uint64_t tp) {
    return {ModelKind::Ex, lambda, xi, tp, {}};
  }
  static ModelSpec nx(double lambda, double gamma) {
    return {ModelKind::Nx, lambda, {}, {}, gamma};
  }

  /// Throws InvalidConfig on out-of-range or misplaced parameters.
  void validate() const;

  /// One event of this rule.
  PairOutcome step(double m_i, double m_j, double eps) const noexcept;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

enum class Spacing { Linear, Log };

/// Ascending, deduplicated event indices in [1, t_max], ending at t_max.
/// Throws InvalidConfig for n_points < 2 or t_max < 1.
std::vector<std::uint64_t> checkpoint_schedule(std::uint64_t t_max, std::size_t n_points,
                                               Spacing spacing);

struct SimConfig {
  ModelSpec model;
  std::size_t n_agents = 1000;
  std::uint64_t t_max = 1'000'000;
  std::uint64_t seed = 0;
  double initial_wealth = 1.0;
  /// Use checkpoint_schedule(t_max, 60, Spacing::Log) for the usual log grid.
  std::vector<std::uint64_t> checkpoint_times;
  std::vector<std::uint64_t> snapshot_times;

  void validate() const;
};

struct Checkpoint {
  std::uint64_t t;
  double gini;
  double volume_sum;
  double f_running;
  /// Bookkeeping for the conservation checks; not part of the CSV schema.
  double total_wealth;
  double min_wealth;
};

struct Snapshot {
  std::uint64_t t;
  std::vector<double> wealth;  // ascending
};

struct SimRecord {
  SimConfig config;
  std::vector<Checkpoint> checkpoints;
  std::vector<Snapshot> snapshots;
  double final_gini = 0.0;
  double final_f = 0.0;
  std::uint64_t redistributions = 0;
};

/// Uniform pair i ≠ j. Consumes exactly two draws: i uniform on [0, n), then
/// j uniform on the remaining n−1 indices.
std::pair<std::size_t, std::size_t> sample_pair(std::size_t n, Xoshiro256& rng) noexcept;

/// Runs t_max exchange events from equal initial wealth. Per event the draws
/// are the pair, then eps. Under Ex, redistribution happens after every
/// tp-th event that is followed by another event; observations at time t
/// (checkpoints, snapshots, the final state) see the wealths after event t
/// and before any redistribution scheduled at t.
///
/// Throws InvalidConfig for a bad config and ZeroTotalWealth when the
/// initial wealth is zero.
SimRecord run_simulation(const SimConfig& config);

}  // namespace kinex
