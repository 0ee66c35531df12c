#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpsdfe/device.hpp"
#include "mpsdfe/grouping.hpp"
#include "mpsdfe/mpo_engine.hpp"
#include "mpsdfe/mps.hpp"
#include "mpsdfe/outcomes.hpp"
#include "mpsdfe/precision.hpp"

namespace mpsdfe {

enum class Method { Dfe, Gdfe };
enum class TargetKind { Mps, Mpo };
enum class SortingPolicy { Fixed, PerSample };

std::string to_string(Method m);
std::string to_string(TargetKind k);
std::string to_string(SortingPolicy p);
Method method_from_string(const std::string& s);
SortingPolicy sorting_policy_from_string(const std::string& s);

/// Estimation target: a normalized right-canonical MPS, or a Hermitian MPO
/// with its canonicalized operator-space chain.
class Target {
 public:
  static Target from_mps(const Mps& mps);
  static Target from_mpo(const Mpo& mpo);

  TargetKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept;
  /// d = 2^n as a double.
  double dimension() const noexcept;

  const Mps& mps() const;
  const Mpo& mpo() const;
  const InducedGamma& gamma() const;

  std::vector<SampledSetting> sample(std::size_t count, std::uint64_t seed, unsigned workers) const;
  double chi(const PauliString& p) const;
  double group_weight(const PauliString& representative, const SortingString& g) const;
  double snapshot_mean(const GroupedSetting& grouped, const OutcomeHistogram& hist) const;

 private:
  TargetKind kind_ = TargetKind::Mps;
  Mps mps_;
  Mpo mpo_;
  InducedGamma gamma_;
};

/// Sampled settings with their measured strings and shot budgets. For plain
/// DFE each entry has an empty sorting string, representative = latent
/// string, group_exponent = 0 and group_weight = latent weight.
struct Plan {
  Method method = Method::Dfe;
  TargetKind target = TargetKind::Mps;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  PrecisionParams params;
  SortingPolicy sorting_policy = SortingPolicy::Fixed;
  std::optional<std::uint64_t> shot_cap;
  std::vector<GroupedSetting> settings;

  std::uint64_t total_shots() const;
  bool biased() const;
};

struct PlanOptions {
  Method method = Method::Gdfe;
  PrecisionParams params;
  std::uint64_t seed = 0;
  SortingPolicy sorting_policy = SortingPolicy::Fixed;
  std::optional<std::uint64_t> shot_cap;
  unsigned workers = 1;
};

struct PhaseTimings {
  double sampling_seconds = 0.0;
  double probability_seconds = 0.0;
  double online_seconds = 0.0;
};

/// Offline phase: draw l settings and (for GDFE) their sorting strings and
/// group weights, then fix every shot budget.
Plan make_plan(const Target& target, const PlanOptions& options, PhaseTimings* timings = nullptr);

/// Per-setting outcome histograms, indexed like Plan::settings.
using MeasurementData = std::vector<OutcomeHistogram>;

/// Simulated measurements of every planned setting. Setting j draws from
/// stream (seed, Shots, j).
MeasurementData simulate_measurements(const DeviceModel& device, const Plan& plan, std::uint64_t seed,
                                      unsigned workers = 1);

struct SettingEstimate {
  std::size_t index = 0;
  std::uint64_t shots = 0;
  /// Single-setting estimator R-hat.
  double value = 0.0;
};

struct EstimationReport {
  Method method = Method::Dfe;
  TargetKind target = TargetKind::Mps;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  PrecisionParams params;
  SortingPolicy sorting_policy = SortingPolicy::Fixed;
  std::optional<std::uint64_t> shot_cap;
  std::optional<double> lambda;
  /// "device", "records" or "exact".
  std::string source;
  double estimate = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  std::uint64_t total_shots = 0;
  bool biased = false;
  /// Target normalization Z (1 for states).
  double normalization = 1.0;
  std::vector<SettingEstimate> settings;
  PhaseTimings timings;
};

/// Online phase: single-setting estimators from outcome histograms.
/// DFE: R = Z chi_sigma-hat / chi. GDFE: shot-weighted mean snapshot.
EstimationReport estimate_from_data(const Target& target, const Plan& plan, const MeasurementData& data,
                                    unsigned workers = 1);

/// Shot-free estimators with exact sigma characteristic values
/// (Z chi_sigma / chi, or the ideal group estimator). Test-scale n.
EstimationReport estimate_exact(const Target& target, const Plan& plan, const DenseOperator& sigma);

/// Full pipelines against a simulated device: plan, measure, estimate.
EstimationReport run_dfe(const Target& target, const DeviceModel& device, PlanOptions options);
EstimationReport run_gdfe(const Target& target, const DeviceModel& device, PlanOptions options);

}  // namespace mpsdfe
