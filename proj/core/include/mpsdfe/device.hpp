#pragma once

#include <cstdint>
#include <vector>

#include "mpsdfe/mps.hpp"
#include "mpsdfe/outcomes.hpp"
#include "mpsdfe/pauli.hpp"

namespace mpsdfe {

/// Simulated preparation of sigma = (1 - lambda) |psi><psi| + lambda I/d.
class DeviceModel {
 public:
  /// The target is canonicalized if needed and must have unit norm.
  DeviceModel(Mps target, double lambda);

  const Mps& target() const noexcept { return target_; }
  double lambda() const noexcept { return lambda_; }

 private:
  Mps target_;
  double lambda_;
};

/// `shots` independent product-basis measurements of sigma. Sites labelled I
/// are measured in Z. Shot k draws from stream derive_key(stream_key, k)
/// only, so any subset of shots can be regenerated on its own.
std::vector<SignVector> measure(const DeviceModel& device, const PauliString& setting, std::uint64_t shots,
                                std::uint64_t stream_key);

/// Outcome histogram with the same distribution as `measure`, drawn by
/// splitting the shot count down the outcome tree with binomial draws. Cost
/// scales with the number of distinct outcomes rather than with `shots`.
OutcomeHistogram measure_counts(const DeviceModel& device, const PauliString& setting, std::uint64_t shots,
                                std::uint64_t stream_key);

/// Plug-in estimate of chi_{sigma,P}: mean over shots of prod_{i: P_i != I} s_i,
/// divided by sqrt(d).
double estimate_chi_sigma(const OutcomeHistogram& records, const PauliString& p);

/// Mean of the parity prod_{i: P_i != I} s_i over the shots.
double mean_parity(const OutcomeHistogram& records, const PauliString& p);

}  // namespace mpsdfe
