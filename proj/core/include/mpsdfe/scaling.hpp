#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpsdfe/stats.hpp"
#include "mpsdfe/tensor.hpp"

namespace mpsdfe {

struct ScalingConfig {
  std::vector<std::size_t> sizes{16, 32, 64, 128};
  Index bond_for_sizes = 8;
  std::vector<Index> bonds{2, 4, 8, 16};
  std::size_t size_for_bonds = 32;
  std::uint64_t seed = 7;
  /// Each timing repeats the operation until at least this much time passed.
  double min_seconds = 0.05;
  /// Timings are the median of this many repetitions.
  int repeats = 5;
};

/// One timed curve. For size series the fit is linear in x; for bond series
/// it is a log-log fit whose slope estimates the exponent.
struct ScalingSeries {
  std::string name;
  std::string axis;  // "n" or "B"
  std::vector<double> x;
  std::vector<double> seconds;
  LinearFit fit;
  /// Expected power of x (1 for size series).
  double expected_exponent = 1.0;

  /// Size series: R^2 > 0.95. Bond series: slope within [e/2, 2e].
  bool consistent() const;
};

struct ScalingResult {
  std::vector<ScalingSeries> series;
};

/// Per-setting sampling time and per-shot snapshot time against n, and
/// sampling and group-weight times against the bond dimension for MPS and
/// MPO targets.
ScalingResult bench_scaling(const ScalingConfig& config);

std::string scaling_csv(const ScalingResult& result);
std::string scaling_json(const ScalingResult& result);

}  // namespace mpsdfe
