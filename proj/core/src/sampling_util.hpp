#pragma once

#include <array>
#include <cmath>
#include <string>

#include "mpsdfe/errors.hpp"

namespace mpsdfe::detail {

/// Unnormalized conditional weights are exactly nonnegative; roundoff
/// negatives down to -1e-12 (relative to the total mass) are clamped to zero.
inline void clamp_weights(std::array<double, 4>& w, const char* what) {
  double mass = 0.0;
  for (double x : w) mass += std::abs(x);
  for (double& x : w) {
    if (!std::isfinite(x)) throw NumericalError(std::string(what) + ": non-finite conditional weight");
    if (x < 0.0) {
      if (x < -1e-12 * mass) throw NumericalError(std::string(what) + ": negative conditional weight " + std::to_string(x));
      x = 0.0;
    }
  }
  if (!(w[0] + w[1] + w[2] + w[3] > 0.0))
    throw NumericalError(std::string(what) + ": all four conditional weights vanish");
}

}  // namespace mpsdfe::detail
