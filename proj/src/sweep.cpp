#include "kinex/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <exception>
#include <string>

#include "kinex/error.hpp"

namespace kinex {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); }

Moments moments(const std::vector<double>& v) {
  Moments m;
  m.n = v.size();
  if (v.empty()) return m;
  double sum = 0.0;
  for (double x : v) sum += x;
  m.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return m;
}

SimConfig sweep_config(const ModelSpec& model, std::size_t n_agents, std::uint64_t t_max,
                       std::uint64_t seed, double initial_wealth) {
  SimConfig c;
  c.model = model;
  c.n_agents = n_agents;
  c.t_max = t_max;
  c.seed = seed;
  c.initial_wealth = initial_wealth;
  return c;
}

}  // namespace

std::optional<double> x_ex(const ModelSpec& model) noexcept {
  if (model.kind != ModelKind::Ex || !model.xi || !model.tp) return std::nullopt;
  return 1000.0 * *model.xi / static_cast<double>(*model.tp);
}

std::optional<double> x_nx(const ModelSpec& model) noexcept {
  if (model.kind != ModelKind::Nx || !model.gamma) return std::nullopt;
  return (1.0 - model.lambda) * *model.gamma;
}

void SweepGrid::validate() const {
  if (lambda.empty()) invalid("lambda list must not be empty");
  if (replicates < 1) invalid("replicates must be >= 1");
  if (n_agents < 2) invalid("n must be >= 2");
  if (t_max < 1) invalid("t_max must be >= 1");
  switch (model) {
    case ModelKind::Basic:
      if (!xi.empty() || !tp.empty() || !gamma.empty()) invalid("basic grid takes only lambda");
      break;
    case ModelKind::Ex:
      if (!gamma.empty()) invalid("gamma does not apply to an ex grid");
      if (xi.empty() || tp.empty()) invalid("ex grid needs xi and tp lists");
      break;
    case ModelKind::Nx:
      if (!xi.empty() || !tp.empty()) invalid("xi/tp do not apply to an nx grid");
      if (gamma.empty()) invalid("nx grid needs a gamma list");
      break;
  }
  for (const ModelSpec& p : points()) p.validate();
}

std::vector<ModelSpec> SweepGrid::points() const {
  std::vector<ModelSpec> out;
  for (double l : lambda) {
    switch (model) {
      case ModelKind::Basic:
        out.push_back(ModelSpec::basic(l));
        break;
      case ModelKind::Ex:
        for (double x : xi)
          for (std::uint64_t p : tp) out.push_back(ModelSpec::ex(l, x, p));
        break;
      case ModelKind::Nx:
        for (double g : gamma) out.push_back(ModelSpec::nx(l, g));
        break;
    }
  }
  return out;
}

std::vector<SimRecord> run_batch(std::span<const SimConfig> configs, int jobs) {
  const auto n = static_cast<std::ptrdiff_t>(configs.size());
  std::vector<SimRecord> records(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs > 0 ? jobs : 1)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      records[static_cast<std::size_t>(k)] = run_simulation(configs[static_cast<std::size_t>(k)]);
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return records;
}

std::vector<SimRecord> run_batch_serial(std::span<const SimConfig> configs) {
  std::vector<SimRecord> records;
  records.reserve(configs.size());
  for (const SimConfig& c : configs) records.push_back(run_simulation(c));
  return records;
}

namespace {

std::vector<SweepRow> points_impl(std::span<const ModelSpec> points, std::size_t replicates,
                                  std::size_t n_agents, std::uint64_t t_max,
                                  std::uint64_t master_seed, double initial_wealth,
                                  std::optional<int> jobs) {
  std::vector<SimConfig> configs;
  std::vector<SweepRow> rows;
  configs.reserve(points.size() * replicates);
  rows.reserve(points.size() * replicates);
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t r = 0; r < replicates; ++r) {
      const std::uint64_t seed = derive_seed(master_seed, p, r);
      configs.push_back(sweep_config(points[p], n_agents, t_max, seed, initial_wealth));
      rows.push_back({p, points[p], r, seed, 0.0, 0.0, std::nullopt});
    }
  }
  const std::vector<SimRecord> records =
      jobs ? run_batch(configs, *jobs) : run_batch_serial(configs);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].g = records[k].final_gini;
    rows[k].f = records[k].final_f;
    if (rows[k].g > 0.0) rows[k].f_over_g = rows[k].f / rows[k].g;
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> run_points(std::span<const ModelSpec> points, std::size_t replicates,
                                 std::size_t n_agents, std::uint64_t t_max,
                                 std::uint64_t master_seed, int jobs, double initial_wealth) {
  return points_impl(points, replicates, n_agents, t_max, master_seed, initial_wealth, jobs);
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid, int jobs) {
  grid.validate();
  const auto pts = grid.points();
  return points_impl(pts, grid.replicates, grid.n_agents, grid.t_max, grid.master_seed,
                     grid.initial_wealth, jobs);
}

std::vector<SweepRow> run_sweep_serial(const SweepGrid& grid) {
  grid.validate();
  const auto pts = grid.points();
  return points_impl(pts, grid.replicates, grid.n_agents, grid.t_max, grid.master_seed,
                     grid.initial_wealth, std::nullopt);
}

std::vector<PointSummary> aggregate(std::span<const SweepRow> rows) {
  if (rows.empty()) throw Error(ErrorKind::EmptyInput, "no sweep rows to aggregate");

  struct Group {
    ModelSpec model;
    std::vector<double> g, f, fg;
    std::size_t excluded = 0;
  };
  std::vector<Group> groups;
  for (const SweepRow& row : rows) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Group& grp) { return grp.model == row.model; });
    if (it == groups.end()) {
      groups.push_back({row.model, {}, {}, {}, 0});
      it = std::prev(groups.end());
    }
    it->g.push_back(row.g);
    it->f.push_back(row.f);
    if (row.f_over_g) {
      it->fg.push_back(*row.f_over_g);
    } else {
      ++it->excluded;
    }
  }

  std::vector<PointSummary> out;
  out.reserve(groups.size());
  for (const Group& grp : groups) {
    PointSummary s;
    s.model = grp.model;
    s.g = moments(grp.g);
    s.f = moments(grp.f);
    if (!grp.fg.empty()) s.f_over_g = moments(grp.fg);
    s.f_over_g_excluded = grp.excluded;
    if (s.g.mean > 0.0) s.ratio_of_means = s.f.mean / s.g.mean;
    out.push_back(s);
  }
  return out;
}

}  // namespace kinex
