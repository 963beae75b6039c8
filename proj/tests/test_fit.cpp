#include <doctest.h>

#include <cmath>
#include <random>

#include "kinex/error.hpp"
#include "kinex/fit.hpp"

using namespace kinex;

TEST_CASE("saturation fit recovers the planted curve") {
  std::vector<XY> pts;
  for (double x : {0.05, 0.1, 0.2, 0.5, 1.0}) pts.push_back({x, 2.0 * (1.0 - std::exp(-5.0 * x))});
  const FitResult fit = fit_saturation(pts);
  CHECK(fit.c0 == doctest::Approx(2.0).epsilon(1e-6 / 2.0));
  CHECK(std::abs(fit.c1 - 5.0) <= 1e-4);
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.n_points == 5);
  CHECK(!fit.degenerate);
}

TEST_CASE("saturation fit on 100 random planted curves") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> ua(0.5, 5.0);
  std::uniform_real_distribution<double> ub(0.5, 20.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = ua(gen);
    const double b = ub(gen);
    std::vector<XY> pts;
    for (int k = 0; k < 10; ++k) {
      const double x = 0.02 * std::pow(50.0, k / 9.0);
      pts.push_back({x, a * (1.0 - std::exp(-b * x))});
    }
    const FitResult fit = fit_saturation(pts);
    REQUIRE(std::abs(fit.c0 - a) <= 1e-3 * a);
    REQUIRE(std::abs(fit.c1 - b) <= 1e-3 * b);
    REQUIRE(fit.c1 > 0.0);
  }
}

TEST_CASE("saturation fit degenerate inputs") {
  const std::vector<XY> zeros = {{0.1, 0.0}, {0.2, 0.0}, {0.5, 0.0}};
  const FitResult flat = fit_saturation(zeros);
  CHECK(flat.c0 == 0.0);
  CHECK(flat.degenerate);
  CHECK(std::isnan(flat.r_squared));

  auto expect_degenerate = [](const std::vector<XY>& pts) {
    try {
      (void)fit_saturation(pts);
      FAIL("expected DegenerateInput");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateInput);
    }
  };
  expect_degenerate({{0.1, 1.0}, {0.2, 2.0}});
  expect_degenerate({{0.3, 1.0}, {0.3, 2.0}, {0.3, 3.0}});
  CHECK_THROWS_AS(fit_saturation(std::vector<XY>{{-0.1, 1.0}, {0.2, 2.0}, {0.3, 2.0}}), Error);
}

TEST_CASE("noisy saturation data keeps R^2 in [0, 1]") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<XY> pts;
  for (int k = 0; k < 40; ++k) {
    const double x = 0.025 * (k + 1);
    pts.push_back({x, 2.0 * (1.0 - std::exp(-5.0 * x)) + noise(gen)});
  }
  const FitResult fit = fit_saturation(pts);
  CHECK(fit.r_squared > 0.8);
  CHECK(fit.r_squared <= 1.0);
  CHECK(fit.c0 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("logarithmic fit") {
  std::vector<XY> pts;
  for (double x : {0.02, 0.05, 0.1, 0.3, 0.7, 1.0}) pts.push_back({x, 0.403 * std::log(x) + 1.92});
  const FitResult fit = fit_logarithmic(pts);
  CHECK(fit.c0 == doctest::Approx(0.403).epsilon(1e-12));
  CHECK(fit.c1 == doctest::Approx(1.92).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK(fit.predict(0.5) == doctest::Approx(0.403 * std::log(0.5) + 1.92));

  const FitResult two = fit_logarithmic(std::vector<XY>{{1.0, 1.0}, {std::exp(1.0), 2.0}});
  CHECK(two.c0 == doctest::Approx(1.0));
  CHECK(two.c1 == doctest::Approx(1.0));

  try {
    (void)fit_logarithmic(std::vector<XY>{{0.0, 1.0}, {1.0, 2.0}});
    FAIL("expected NonpositiveX");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonpositiveX);
  }
  CHECK_THROWS_AS(fit_logarithmic(std::vector<XY>{{1.0, 1.0}, {1.0, 2.0}}), Error);
  CHECK(fit_logarithmic(std::vector<XY>{{1.0, 3.0}, {2.0, 3.0}}).degenerate);
}

TEST_CASE("xi-gamma equivalence") {
  const auto target = xi_gamma_equivalence(0.25, 2500, 0.267);
  CHECK(target.xi == doctest::Approx(0.5).epsilon(0.01));
  CHECK(!target.out_of_range);

  CHECK(xi_gamma_equivalence(1.0, 777, 0.9).xi == 0.0);

  const auto long_period = xi_gamma_equivalence(0.25, 5000, 0.267);
  CHECK(long_period.xi == 1.0);
  CHECK(long_period.raw == doctest::Approx(1.0).epsilon(0.01));
  CHECK(long_period.out_of_range);

  CHECK(xi_gamma_equivalence(0.25, 1250, 0.267).xi == doctest::Approx(0.25).epsilon(0.01));
  CHECK(xi_gamma_equivalence(0.25, 625, 0.267).xi == doctest::Approx(0.125).epsilon(0.01));
  CHECK_THROWS_AS(xi_gamma_equivalence(1.2, 100, 0.5), Error);
}
