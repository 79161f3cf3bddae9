#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace sparsinv {

// Order statistics use the nearest-rank convention: the p-quantile of n
// sorted samples is x[ceil(p n) - 1]. For p = 1/2 this is the lower median,
// x[(n - 1) / 2], which the acceptance bands are stated against.
struct Summary {
  std::size_t count = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

// Throws DomainError on empty input.
Summary summarize(std::span<const double> samples);
double quantile_sorted(std::span<const double> sorted, double p);

// sup over sample points of |F_n - F|, evaluated on both sides of each jump.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

inline constexpr double kZ95 = 1.959963984540054;

// Wilson score interval for k successes out of n trials.
Interval wilson_interval(std::size_t k, std::size_t n, double z = kZ95);

// Dvoretzky-Kiefer-Wolfowitz half-width: sup|F_n - F| <= band with
// probability >= 1 - alpha. sqrt(ln(2/alpha) / (2n)); 1.358/sqrt(n) at 95%.
double dkw_band(std::size_t n, double alpha = 0.05);

double normal_cdf(double x) noexcept;
// CDF of |g|, g standard normal: erf(x / sqrt 2) for x >= 0.
double half_normal_cdf(double x) noexcept;
// Median of |g|: Phi^{-1}(3/4).
inline constexpr double kHalfNormalMedian = 0.6744897501960817;

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
};
// Ordinary least squares y = intercept + slope * x. Needs >= 2 distinct x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace sparsinv
