#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mpsdfe/grouping.hpp"
#include "mpsdfe/mps.hpp"
#include "mpsdfe/outcomes.hpp"
#include "mpsdfe/pauli.hpp"
#include "mpsdfe/precision.hpp"
#include "mpsdfe/random.hpp"
#include "mpsdfe/sampler.hpp"

namespace mpsdfe {

/// Operator-space local matrices Gamma_i^{(Q)}, indexed by Pauli code.
using GammaSite = std::array<Matrix, 4>;

/// The MPO viewed as an MPS with physical dimension 4 over Pauli labels:
/// chi_{O,P} = Gamma_1^{(P_1)} ... Gamma_n^{(P_n)}.
struct InducedGamma {
  std::vector<GammaSite> sites;
  bool canonical = false;

  std::size_t size() const noexcept { return sites.size(); }
};

/// Gamma^{(P)} = 2^{-1/2} sum_{out,in} A^{(out,in)} P(in,out). Rejects MPOs
/// without the Hermitian flag.
InducedGamma induce_gamma(const Mpo& mpo);

/// Right-to-left QR gauge fix so that sum_Q Gamma Gamma^dagger = I at sites
/// 2..n. Every chi value is unchanged.
InducedGamma canonicalize(const InducedGamma& gamma);

/// induce_gamma followed by canonicalize.
InducedGamma prepare_mpo(const Mpo& mpo);

/// Z = sum_P chi_{O,P}^2 = tr(O^2). Any gauge.
double normalization(const InducedGamma& gamma);

/// max over sites 2..n of |sum_Q Gamma Gamma^dagger - I|.
double gamma_residual(const InducedGamma& gamma);

double chi_of_mpo(const InducedGamma& gamma, const PauliString& p);

/// Draws P with probability chi_{O,P}^2 / Z. Requires a canonical chain.
/// The returned record carries normalization = Z.
SampledSetting sample_setting_mpo(const InducedGamma& gamma, Stream& rng);

std::vector<SampledSetting> sample_settings_mpo(const InducedGamma& gamma, std::size_t count, std::uint64_t seed,
                                                unsigned workers = 1);

/// p_g = H_n / Z with H_i = sum_{Q in preimage} Gamma^{(Q)dagger} H Gamma^{(Q)}.
double group_weight_mpo(const InducedGamma& gamma, const PauliString& representative, const SortingString& g);

GroupedSetting make_grouped_setting_mpo(const InducedGamma& gamma, SampledSetting latent, SortingString g,
                                        const PrecisionParams& params, std::optional<std::uint64_t> cap = {});

/// ceil(2 |g| Z / (p_g d l eps^2) ln(2/delta)).
ShotBudget shot_budget_mpo(const GroupedSetting& grouped, const PrecisionParams& params, double dimension,
                           std::optional<std::uint64_t> cap = {});

/// tr[O (x)_i M_i] / (p_g d).
double snapshot_mpo(const Mpo& mpo, const GroupedSetting& grouped, const SignVector& signs);

std::vector<double> snapshot_values_mpo(const Mpo& mpo, const GroupedSetting& grouped, const OutcomeHistogram& hist);

double snapshot_mean_mpo(const Mpo& mpo, const GroupedSetting& grouped, const OutcomeHistogram& hist);

}  // namespace mpsdfe
