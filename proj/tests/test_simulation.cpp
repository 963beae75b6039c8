#include <doctest.h>

#include <map>
#include <vector>

#include "kinex/error.hpp"
#include "kinex/metrics.hpp"
#include "kinex/simulation.hpp"
#include "oracles.hpp"

using namespace kinex;

namespace {

SimConfig small_config(ModelSpec model, std::uint64_t seed = 1) {
  SimConfig c;
  c.model = model;
  c.n_agents = 200;
  c.t_max = 50'000;
  c.seed = seed;
  c.checkpoint_times = checkpoint_schedule(c.t_max, 30, Spacing::Log);
  c.snapshot_times = {1000, 50'000};
  return c;
}

}  // namespace

TEST_CASE("checkpoint schedule examples") {
  CHECK(checkpoint_schedule(100, 3, Spacing::Linear) == std::vector<std::uint64_t>{1, 50, 100});
  CHECK(checkpoint_schedule(1'000'000, 7, Spacing::Log) ==
        std::vector<std::uint64_t>{1, 10, 100, 1000, 10'000, 100'000, 1'000'000});
  CHECK(checkpoint_schedule(5, 10, Spacing::Linear) == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  CHECK(checkpoint_schedule(1, 4, Spacing::Log) == std::vector<std::uint64_t>{1});
  CHECK_THROWS_AS(checkpoint_schedule(10, 1, Spacing::Log), Error);

  const auto sixty = checkpoint_schedule(1'000'000, 60, Spacing::Log);
  CHECK(sixty.front() == 1);
  CHECK(sixty.back() == 1'000'000);
  CHECK(std::is_sorted(sixty.begin(), sixty.end()));
  CHECK(std::adjacent_find(sixty.begin(), sixty.end()) == sixty.end());
}

TEST_CASE("sample_pair") {
  Xoshiro256 rng(4);
  for (int k = 0; k < 100; ++k) {
    auto [i, j] = sample_pair(2, rng);
    CHECK(((i == 0 && j == 1) || (i == 1 && j == 0)));
  }
  for (int k = 0; k < 100'000; ++k) {
    auto [i, j] = sample_pair(1000, rng);
    REQUIRE(i != j);
    REQUIRE(i < 1000);
    REQUIRE(j < 1000);
  }

  // Unordered pairs of 3 agents: uniform, checked by count and chi-square.
  std::vector<std::size_t> counts(3, 0);
  for (int k = 0; k < 1'000'000; ++k) {
    auto [i, j] = sample_pair(3, rng);
    counts[i + j - 1]++;  // {0,1}->0, {0,2}->1, {1,2}->2
  }
  for (auto c : counts) CHECK(c / 1e6 == doctest::Approx(1.0 / 3.0).epsilon(0.002 * 3));
  // 99.9% quantile of chi-square with 2 degrees of freedom.
  CHECK(oracle::chi_square_uniform(counts) < 13.82);

  // Ordered draws over a small population are uniform too.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> ordered;
  for (int k = 0; k < 200'000; ++k) ordered[sample_pair(4, rng)]++;
  CHECK(ordered.size() == 12);
  std::vector<std::size_t> oc;
  for (const auto& [key, c] : ordered) oc.push_back(c);
  CHECK(oracle::chi_square_uniform(oc) < 31.26);  // 99.9% quantile, 11 dof
}

TEST_CASE("each event consumes exactly three draws") {
  SimConfig c = small_config(ModelSpec::nx(0.25, 0.5), 8);
  c.t_max = 10;
  c.checkpoint_times.clear();
  c.snapshot_times = {10};
  const SimRecord rec = run_simulation(c);

  Xoshiro256 rng(8);
  std::vector<double> m(c.n_agents, 1.0);
  for (int t = 0; t < 10; ++t) {
    auto [i, j] = sample_pair(m.size(), rng);
    const double eps = rng.uniform01();
    const auto out = nx_step(m[i], m[j], 0.25, 0.5, eps);
    m[i] = out.new_i;
    m[j] = out.new_j;
  }
  std::sort(m.begin(), m.end());
  CHECK(rec.snapshots[0].wealth == m);
}

TEST_CASE("config validation") {
  SimConfig c = small_config(ModelSpec::basic(0.0));
  c.t_max = 0;
  c.checkpoint_times.clear();
  c.snapshot_times.clear();
  CHECK_THROWS_AS(run_simulation(c), Error);

  auto expect_invalid = [](const SimConfig& cfg) {
    try {
      (void)run_simulation(cfg);
      FAIL("expected InvalidConfig");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidConfig);
    }
  };
  expect_invalid(small_config(ModelSpec::ex(1.5, 0.5, 10)));
  expect_invalid(small_config(ModelSpec::nx(0.25, -0.1)));
  expect_invalid(small_config(ModelSpec::ex(0.25, 0.5, 0)));
  ModelSpec wrong = ModelSpec::nx(0.25, 0.5);
  wrong.xi = 0.2;
  expect_invalid(small_config(wrong));
  SimConfig one = small_config(ModelSpec::basic(0.1));
  one.n_agents = 1;
  expect_invalid(one);
  SimConfig late = small_config(ModelSpec::basic(0.1));
  late.snapshot_times = {60'000};
  expect_invalid(late);

  SimConfig zero = small_config(ModelSpec::basic(0.1));
  zero.initial_wealth = 0.0;
  try {
    (void)run_simulation(zero);
    FAIL("expected ZeroTotalWealth");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroTotalWealth);
  }
}

TEST_CASE("runs conserve wealth and stay nonnegative at every checkpoint") {
  for (const ModelSpec& model : {ModelSpec::basic(0.0), ModelSpec::ex(0.25, 0.0, 1),
                                 ModelSpec::ex(0.25, 0.5, 997), ModelSpec::nx(0.25, 0.1),
                                 ModelSpec::nx(0.9, 1.0)}) {
    const SimRecord rec = run_simulation(small_config(model, 3));
    REQUIRE(!rec.checkpoints.empty());
    for (const Checkpoint& cp : rec.checkpoints) {
      CHECK(std::abs(cp.total_wealth - 200.0) <= 1e-9 * 200.0);
      CHECK(cp.min_wealth >= 0.0);
    }
    double prev_volume = -1.0;
    for (const Checkpoint& cp : rec.checkpoints) {
      CHECK(cp.volume_sum >= prev_volume);
      prev_volume = cp.volume_sum;
      CHECK(cp.f_running == doctest::Approx(cp.volume_sum / (2.0 * cp.t)));
    }
    for (const Snapshot& s : rec.snapshots) {
      CHECK(std::is_sorted(s.wealth.begin(), s.wealth.end()));
    }
  }
}

TEST_CASE("identical configs give identical records") {
  const SimConfig c = small_config(ModelSpec::ex(0.25, 0.5, 1000), 42);
  const SimRecord a = run_simulation(c);
  const SimRecord b = run_simulation(c);
  CHECK(a.final_gini == b.final_gini);
  CHECK(a.final_f == b.final_f);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    CHECK(a.snapshots[k].wealth == b.snapshots[k].wealth);
  }
  const SimRecord other = run_simulation(small_config(ModelSpec::ex(0.25, 0.5, 1000), 43));
  CHECK(other.final_gini != a.final_gini);
}

TEST_CASE("redistribution schedule") {
  SimConfig c = small_config(ModelSpec::ex(0.25, 0.5, 1000), 2);
  c.t_max = 10'000;
  c.checkpoint_times = {999, 1000, 1001, 10'000};
  c.snapshot_times = {1000, 1001};
  const SimRecord rec = run_simulation(c);
  // Periods at 1000..9000; the boundary at t_max closes the run instead.
  CHECK(rec.redistributions == 9);
  // The observation at t = 1000 precedes that period's redistribution, which
  // pulls every agent toward the mean before event 1001.
  const auto& at = rec.snapshots[0].wealth;
  const auto& after = rec.snapshots[1].wealth;
  CHECK(after.back() < at.back());
  CHECK(rec.checkpoints[2].gini < rec.checkpoints[1].gini);
  CHECK(rec.final_gini == rec.checkpoints.back().gini);

  SimConfig none = c;
  none.model = ModelSpec::ex(0.25, 0.0, 1000);
  CHECK(run_simulation(none).redistributions == 0);
}

TEST_CASE("gamma = 0 reproduces the ex model and gamma = 1 the basic model") {
  SimConfig nx0 = small_config(ModelSpec::nx(0.25, 0.0), 9);
  SimConfig ex = small_config(ModelSpec::ex(0.25, 0.0, 1), 9);
  CHECK(run_simulation(nx0).final_gini == doctest::Approx(run_simulation(ex).final_gini).epsilon(1e-9));
  SimConfig nx1 = small_config(ModelSpec::nx(0.3, 1.0), 9);
  SimConfig basic = small_config(ModelSpec::basic(0.3), 9);
  CHECK(run_simulation(nx1).final_gini ==
        doctest::Approx(run_simulation(basic).final_gini).epsilon(1e-9));
}
