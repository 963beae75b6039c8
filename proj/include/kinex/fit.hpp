#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace kinex {

struct XY {
  double x;
  double y;
};

enum class FitFamily {
  Saturation,   // y = a·(1 − exp(−b·x))
  Logarithmic,  // y = slope·ln x + intercept
};

std::string_view to_string(FitFamily family) noexcept;

struct FitResult {
  FitFamily family = FitFamily::Saturation;
  /// Saturation: {a, b}. Logarithmic: {slope, intercept}.
  double c0 = 0.0;
  double c1 = 0.0;
  /// NaN when `degenerate` (constant y leaves R² undefined).
  double r_squared = 0.0;
  double rss = 0.0;
  std::size_t n_points = 0;
  bool degenerate = false;
  std::vector<double> residuals;

  double predict(double x) const noexcept;
};

/// Least squares for y = a·(1 − e^{−bx}). The model is linear in a, so for
/// each b the best a is Σ y·u / Σ u² with u = 1 − e^{−bx}; b is scanned on
/// 200 log-spaced values over [1e-3, 1e3] and then refined by golden-section
/// search to relative width 1e-6.
///
/// Throws DegenerateInput for fewer than 3 points or fewer than 2 distinct x,
/// and InvalidConfig for negative x. Constant y yields a flagged fit.
FitResult fit_saturation(std::span<const XY> points);

/// Ordinary least squares of y on ln x. Throws NonpositiveX if any x ≤ 0 and
/// DegenerateInput for fewer than 2 distinct x. Constant y yields a flagged
/// fit.
FitResult fit_logarithmic(std::span<const XY> points);

struct XiEquivalence {
  double xi;         // clamped to [0, 1]
  double raw;        // unclamped
  bool out_of_range;
};

/// Transfer rate that puts an Ex model with period tp at the same composite
/// parameter as an Nx model with (lambda, gamma): ξ = (1−λ)·γ·t_p·10⁻³.
XiEquivalence xi_gamma_equivalence(double lambda, double tp, double gamma);

}  // namespace kinex
