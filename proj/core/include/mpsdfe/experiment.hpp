#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mpsdfe/estimation.hpp"

namespace mpsdfe {

/// Random-MPS fidelity experiment: DFE and GDFE against the depolarized
/// target over repeated independent trials on one fixed target.
struct ExperimentConfig {
  std::size_t n = 12;
  Index max_bond = 4;
  double lambda = 0.1;
  PrecisionParams params = PrecisionParams::from(0.1, 0.1);
  std::size_t trials = 100;
  std::uint64_t seed = 20240611;
  SortingPolicy sorting_policy = SortingPolicy::Fixed;
  std::optional<std::uint64_t> shot_cap;
  unsigned workers = 1;
};

/// Across-trial statistics after the first `settings` settings of each trial.
struct CurvePoint {
  std::size_t settings = 0;
  double mean = 0.0, mean_lo = 0.0, mean_hi = 0.0;
  /// Squared error against the exact depolarized fidelity.
  double mse = 0.0, mse_lo = 0.0, mse_hi = 0.0;
  /// Squared error against 1.
  double mse_vs_one = 0.0;
  /// Cumulative shots.
  double shots = 0.0, shots_lo = 0.0, shots_hi = 0.0;
};

struct MethodOutcome {
  Method method = Method::Dfe;
  std::vector<double> final_estimates;
  std::vector<std::uint64_t> total_shots;
  std::vector<CurvePoint> curve;
  std::size_t biased_trials = 0;

  double mean_final_estimate() const;
  double final_mse() const;
  double mean_total_shots() const;
};

struct ExperimentResult {
  ExperimentConfig config;
  /// (1 - lambda) + lambda / d.
  double truth = 0.0;
  std::vector<Index> bond_dims;
  MethodOutcome dfe;
  MethodOutcome gdfe;
  double seconds = 0.0;
};

/// Runs every trial of both methods. Trial t of method m uses master seed
/// derive_key(stream_key(seed, Trial, t), m); trials run on `workers` threads
/// and the result does not depend on the worker count. `progress` is called
/// after each finished trial with the number of finished trials.
ExperimentResult experiment_fig5(const ExperimentConfig& config,
                                 const std::function<void(std::size_t)>& progress = {});

/// Long-format curves: method,settings,mean,meanLo,meanHi,mse,mseLo,mseHi,mseVsOne,shots,shotsLo,shotsHi.
std::string experiment_curves_csv(const ExperimentResult& result);

/// Per-trial final estimates and shot totals.
std::string experiment_trials_csv(const ExperimentResult& result);

/// Config, truth, final MSEs, their ratio and shot totals.
std::string experiment_summary_json(const ExperimentResult& result);

}  // namespace mpsdfe
