#include "mpsdfe/precision.hpp"

#include <cmath>
#include <limits>

#include "mpsdfe/errors.hpp"

namespace mpsdfe {

PrecisionParams PrecisionParams::from(double eps, double delta, std::optional<std::size_t> settings_override) {
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  detail::require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  PrecisionParams p{eps, delta, 0};
  if (settings_override) {
    detail::require(*settings_override >= 1, "l must be >= 1");
    p.settings = *settings_override;
  } else {
    p.settings = static_cast<std::size_t>(ceil_count(1.0 / (eps * eps * delta)));
  }
  return p;
}

std::uint64_t ceil_count(double x) {
  if (!(x > 0.0)) return 0;
  if (!std::isfinite(x) || x >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-12 * std::max(1.0, x)) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::ceil(x));
}

ShotBudget hoeffding_shots(double group_size, double normalization, double weight, double dimension,
                           const PrecisionParams& params, std::optional<std::uint64_t> cap) {
  if (!(weight > 0.0)) throw NumericalError("shot budget: nonpositive sampling weight");
  const double l = static_cast<double>(params.settings);
  const double raw = 2.0 * group_size * normalization /
                     (weight * dimension * l * params.eps * params.eps) * std::log(2.0 / params.delta);
  ShotBudget budget{std::max<std::uint64_t>(1, ceil_count(raw)), false};
  if (cap && budget.shots > *cap) {
    budget.shots = *cap;
    budget.capped = true;
  }
  return budget;
}

}  // namespace mpsdfe
