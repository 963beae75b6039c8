#include "kinex/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kinex/error.hpp"
#include "kinex/metrics.hpp"

namespace kinex {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); }

void check_unit(const char* name, double v) {
  if (!(v >= 0.0 && v <= 1.0)) invalid(std::string(name) + " must be within [0,1]");
}

void check_times(const char* name, const std::vector<std::uint64_t>& times, std::uint64_t t_max) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < 1 || times[k] > t_max) {
      invalid(std::string(name) + " entries must lie in [1, t_max]");
    }
    if (k > 0 && times[k] <= times[k - 1]) {
      invalid(std::string(name) + " must be strictly ascending");
    }
  }
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Basic: return "basic";
    case ModelKind::Ex: return "ex";
    case ModelKind::Nx: return "nx";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "basic") return ModelKind::Basic;
  if (name == "ex") return ModelKind::Ex;
  if (name == "nx") return ModelKind::Nx;
  invalid("unknown model '" + std::string(name) + "' (expected basic, ex or nx)");
}

void ModelSpec::validate() const {
  check_unit("lambda", lambda);
  switch (kind) {
    case ModelKind::Basic:
      if (xi || tp || gamma) invalid("basic model takes only lambda");
      break;
    case ModelKind::Ex:
      if (gamma) invalid("gamma does not apply to the ex model");
      if (!xi || !tp) invalid("ex model needs xi and tp");
      check_unit("xi", *xi);
      if (*tp < 1) invalid("tp must be >= 1");
      break;
    case ModelKind::Nx:
      if (xi || tp) invalid("xi/tp do not apply to the nx model");
      if (!gamma) invalid("nx model needs gamma");
      check_unit("gamma", *gamma);
      break;
  }
}

PairOutcome ModelSpec::step(double m_i, double m_j, double eps) const noexcept {
  switch (kind) {
    case ModelKind::Basic: return basic_step(m_i, m_j, lambda, eps);
    case ModelKind::Ex: return ex_step(m_i, m_j, lambda, eps);
    case ModelKind::Nx: return nx_step(m_i, m_j, lambda, *gamma, eps);
  }
  return {m_i, m_j, 0.0};
}

std::vector<std::uint64_t> checkpoint_schedule(std::uint64_t t_max, std::size_t n_points,
                                               Spacing spacing) {
  if (n_points < 2) invalid("checkpoint schedule needs at least 2 points");
  if (t_max < 1) invalid("t_max must be >= 1");
  std::vector<std::uint64_t> out;
  out.reserve(n_points);
  const double span = static_cast<double>(n_points - 1);
  const double top = static_cast<double>(t_max);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double u = static_cast<double>(k) / span;
    const double v = spacing == Spacing::Linear ? top * u : std::pow(10.0, std::log10(top) * u);
    auto t = static_cast<std::uint64_t>(std::llround(v));
    t = std::clamp<std::uint64_t>(t, 1, t_max);
    if (out.empty() || t > out.back()) out.push_back(t);
  }
  out.back() = t_max;
  return out;
}

void SimConfig::validate() const {
  model.validate();
  if (n_agents < 2) invalid("n must be >= 2");
  if (t_max < 1) invalid("t_max must be >= 1");
  if (!std::isfinite(initial_wealth) || initial_wealth < 0.0) {
    invalid("initial wealth must be finite and >= 0");
  }
  check_times("checkpoint times", checkpoint_times, t_max);
  check_times("snapshot times", snapshot_times, t_max);
}

std::pair<std::size_t, std::size_t> sample_pair(std::size_t n, Xoshiro256& rng) noexcept {
  const auto i = static_cast<std::size_t>(rng.below(n));
  auto j = static_cast<std::size_t>(rng.below(n - 1));
  if (j >= i) ++j;
  return {i, j};
}

SimRecord run_simulation(const SimConfig& config) {
  config.validate();
  if (config.initial_wealth == 0.0) {
    throw Error(ErrorKind::ZeroTotalWealth, "initial wealth is zero; Gini index undefined");
  }

  SimRecord record;
  record.config = config;
  record.checkpoints.reserve(config.checkpoint_times.size());
  record.snapshots.reserve(config.snapshot_times.size());

  WealthState state(config.n_agents, config.initial_wealth);
  std::span<double> m = state.wealth();
  const ModelSpec& model = config.model;
  const bool redistributes = model.kind == ModelKind::Ex && *model.xi > 0.0;
  const std::uint64_t tp = redistributes ? *model.tp : 0;

  Xoshiro256 rng(config.seed);
  FlowAccumulator flow;
  auto next_checkpoint = config.checkpoint_times.begin();
  auto next_snapshot = config.snapshot_times.begin();

  for (std::uint64_t t = 1; t <= config.t_max; ++t) {
    const auto [i, j] = sample_pair(m.size(), rng);
    const double eps = rng.uniform01();
    const PairOutcome out = model.step(m[i], m[j], eps);
    m[i] = out.new_i;
    m[j] = out.new_j;
    flow.add(out);

    if (next_checkpoint != config.checkpoint_times.end() && *next_checkpoint == t) {
      record.checkpoints.push_back({t, gini(m), flow.volume_sum(), flow.finalize(),
                                    state.total(), *std::min_element(m.begin(), m.end())});
      ++next_checkpoint;
    }
    if (next_snapshot != config.snapshot_times.end() && *next_snapshot == t) {
      std::vector<double> sorted(m.begin(), m.end());
      std::sort(sorted.begin(), sorted.end());
      record.snapshots.push_back({t, std::move(sorted)});
      ++next_snapshot;
    }
    if (redistributes && t % tp == 0 && t < config.t_max) {
      redistribute(m, *model.xi);
      ++record.redistributions;
    }
  }

  record.final_gini = gini(m);
  record.final_f = flow.finalize();
  return record;
}

}  // namespace kinex
