#pragma once

#include <cstddef>
#include <span>

namespace mpsdfe {

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  /// Unbiased sample variance; 0 for fewer than two values.
  double variance = 0.0;
  double std_error = 0.0;
};

/// Summation runs in index order, so results are reproducible.
Summary summarize(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = slope x + intercept.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

}  // namespace mpsdfe
