#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

namespace mpsdfe {

/// Additive error eps, failure probability delta and the number of sampled
/// settings l (ceil(1 / (eps^2 delta)) unless overridden).
struct PrecisionParams {
  double eps = 0.1;
  double delta = 0.1;
  std::size_t settings = 1000;

  static PrecisionParams from(double eps, double delta, std::optional<std::size_t> settings_override = {});
};

/// ceil() that ignores relative roundoff below 1e-12, so ceil(1000.0000000000001) == 1000.
std::uint64_t ceil_count(double x);

struct ShotBudget {
  std::uint64_t shots = 0;
  bool capped = false;
};

/// Hoeffding-type shot count
///   ceil( 2 |g| Z / (p d l eps^2) * ln(2 / delta) )
/// with |g| = 1 for plain DFE and Z = 1 for pure-state targets. An enabled
/// cap truncates the count and marks it as biasing.
ShotBudget hoeffding_shots(double group_size, double normalization, double weight, double dimension,
                           const PrecisionParams& params, std::optional<std::uint64_t> cap = {});

}  // namespace mpsdfe
