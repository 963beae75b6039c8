#include "kinex/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kinex/error.hpp"

namespace kinex {

namespace {

constexpr double kBMin = 1e-3;
constexpr double kBMax = 1e3;
constexpr int kScanPoints = 200;
constexpr double kRelWidth = 1e-6;

std::size_t distinct_x(std::span<const XY> pts) {
  std::vector<double> xs;
  xs.reserve(pts.size());
  for (const XY& p : pts) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  return static_cast<std::size_t>(std::unique(xs.begin(), xs.end()) - xs.begin());
}

double total_ss(std::span<const XY> pts) {
  double mean = 0.0;
  for (const XY& p : pts) mean += p.y;
  mean /= static_cast<double>(pts.size());
  double ss = 0.0;
  for (const XY& p : pts) ss += (p.y - mean) * (p.y - mean);
  return ss;
}

void finish(FitResult& fit, std::span<const XY> pts) {
  fit.n_points = pts.size();
  fit.residuals.clear();
  fit.rss = 0.0;
  for (const XY& p : pts) {
    const double r = p.y - fit.predict(p.x);
    fit.residuals.push_back(r);
    fit.rss += r * r;
  }
  const double sst = total_ss(pts);
  if (sst > 0.0) {
    fit.r_squared = 1.0 - fit.rss / sst;
  } else {
    fit.degenerate = true;
    fit.r_squared = std::numeric_limits<double>::quiet_NaN();
  }
}

// Best a for fixed b, and the residual sum of squares it leaves.
struct Profile {
  double a;
  double rss;
};

Profile profile(std::span<const XY> pts, double b) {
  double yu = 0.0;
  double uu = 0.0;
  for (const XY& p : pts) {
    const double u = -std::expm1(-b * p.x);
    yu += p.y * u;
    uu += u * u;
  }
  const double a = uu > 0.0 ? yu / uu : 0.0;
  double rss = 0.0;
  for (const XY& p : pts) {
    const double r = p.y + a * std::expm1(-b * p.x);
    rss += r * r;
  }
  return {a, rss};
}

}  // namespace

std::string_view to_string(FitFamily family) noexcept {
  return family == FitFamily::Saturation ? "saturation" : "logarithmic";
}

double FitResult::predict(double x) const noexcept {
  if (family == FitFamily::Saturation) return -c0 * std::expm1(-c1 * x);
  return c0 * std::log(x) + c1;
}

FitResult fit_saturation(std::span<const XY> points) {
  if (points.size() < 3) {
    throw Error(ErrorKind::DegenerateInput, "saturation fit needs at least 3 points");
  }
  for (const XY& p : points) {
    if (!(p.x >= 0.0) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorKind::InvalidConfig, "saturation fit needs finite x >= 0 and finite y");
    }
  }
  if (distinct_x(points) < 2) {
    throw Error(ErrorKind::DegenerateInput, "saturation fit needs at least 2 distinct x values");
  }

  // Coarse scan in log b.
  const double log_lo = std::log(kBMin);
  const double step = (std::log(kBMax) - log_lo) / (kScanPoints - 1);
  int best = 0;
  double best_rss = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kScanPoints; ++k) {
    const double rss = profile(points, std::exp(log_lo + step * k)).rss;
    if (rss < best_rss) {
      best_rss = rss;
      best = k;
    }
  }

  // Golden-section on the bracket around the best grid value, in log b.
  double lo = log_lo + step * std::max(best - 1, 0);
  double hi = log_lo + step * std::min(best + 1, kScanPoints - 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = profile(points, std::exp(c)).rss;
  double fd = profile(points, std::exp(d)).rss;
  // Width in log b approximates relative width in b.
  while (hi - lo > kRelWidth) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = profile(points, std::exp(c)).rss;
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = profile(points, std::exp(d)).rss;
    }
  }
  double b = std::exp(0.5 * (lo + hi));
  Profile prof = profile(points, b);
  // Keep the grid value if refinement somehow lost ground.
  if (best_rss < prof.rss) {
    b = std::exp(log_lo + step * best);
    prof = profile(points, b);
  }

  FitResult fit;
  fit.family = FitFamily::Saturation;
  fit.c0 = prof.a;
  fit.c1 = b;
  finish(fit, points);
  return fit;
}

FitResult fit_logarithmic(std::span<const XY> points) {
  for (const XY& p : points) {
    if (!(p.x > 0.0)) {
      throw Error(ErrorKind::NonpositiveX,
                  "logarithmic fit needs x > 0, got " + std::to_string(p.x));
    }
  }
  if (points.size() < 2 || distinct_x(points) < 2) {
    throw Error(ErrorKind::DegenerateInput, "logarithmic fit needs at least 2 distinct x values");
  }
  const double n = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const XY& p : points) {
    mx += std::log(p.x);
    my += p.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const XY& p : points) {
    const double dx = std::log(p.x) - mx;
    sxx += dx * dx;
    sxy += dx * (p.y - my);
  }
  FitResult fit;
  fit.family = FitFamily::Logarithmic;
  fit.c0 = sxy / sxx;
  fit.c1 = my - fit.c0 * mx;
  finish(fit, points);
  return fit;
}

XiEquivalence xi_gamma_equivalence(double lambda, double tp, double gamma) {
  if (!(lambda >= 0.0 && lambda <= 1.0) || !(gamma >= 0.0 && gamma <= 1.0) || !(tp >= 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "need lambda, gamma in [0,1] and tp >= 1");
  }
  const double raw = (1.0 - lambda) * gamma * tp * 1e-3;
  return {std::clamp(raw, 0.0, 1.0), raw, raw > 1.0};
}

}  // namespace kinex
