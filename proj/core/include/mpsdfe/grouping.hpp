#pragma once

#include <cstdint>
#include <optional>

#include "mpsdfe/mps.hpp"
#include "mpsdfe/outcomes.hpp"
#include "mpsdfe/pauli.hpp"
#include "mpsdfe/precision.hpp"
#include "mpsdfe/sampler.hpp"

namespace mpsdfe {

/// A sampled latent P together with the group it falls into under g.
struct GroupedSetting {
  SampledSetting latent;
  SortingString sorting;
  PauliString representative;
  unsigned group_exponent = 0;
  /// p_g(P): total sampling weight of the group.
  double group_weight = 0.0;
  ShotBudget budget;

  double group_size() const;
};

/// p_g for the group of `representative` under g, by contracting four copies
/// of the MPS through the restricted Pauli sum. Cost O(n B^5). Gauge
/// invariant, so canonical form is not required; the MPS must be normalized.
double group_weight(const Mps& mps, const PauliString& representative, const SortingString& g);

/// Builds the grouped setting and its shot budget for precision `params`.
GroupedSetting make_grouped_setting(const Mps& mps, SampledSetting latent, SortingString g,
                                    const PrecisionParams& params, std::optional<std::uint64_t> cap = {});

/// Shot count ceil(2 |g| / (p_g d l eps^2) ln(2/delta)) (times Z for MPO
/// targets, taken from the latent record).
ShotBudget shot_budget(const GroupedSetting& grouped, const PrecisionParams& params, double dimension,
                       std::optional<std::uint64_t> cap = {});

/// Snapshot value <psi| (x)_i M_i |psi> / (p_g d) for one measured sign vector.
double snapshot(const Mps& mps, const GroupedSetting& grouped, const SignVector& signs);

/// Snapshot values for every histogram entry, in histogram order.
std::vector<double> snapshot_values(const Mps& mps, const GroupedSetting& grouped, const OutcomeHistogram& hist);

/// Shot-weighted mean snapshot over a histogram.
double snapshot_mean(const Mps& mps, const GroupedSetting& grouped, const OutcomeHistogram& hist);

/// Infinite-shot group estimator R_g = (1/p_g) sum_{P in group} chi_rho,P chi_sigma,P
/// against a dense sigma. Test-scale only (n <= 12).
double ideal_group_estimator(const Mps& mps, const DenseOperator& sigma, const GroupedSetting& grouped);

namespace detail {
/// Per-site factors M_i(+1), M_i(-1) for the grouped snapshot.
std::vector<std::array<Matrix2, 2>> snapshot_factor_table(const PauliString& latent, const SortingString& g);
double real_part_checked(Complex z, const char* what);
}  // namespace detail

}  // namespace mpsdfe
