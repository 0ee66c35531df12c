#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mpsdfe/mps.hpp"
#include "mpsdfe/pauli.hpp"
#include "mpsdfe/random.hpp"

namespace mpsdfe {

/// One importance sample P ~ chi_{target,P}^2 / Z.
///
/// For MPS targets Z = 1. MPO targets reuse this record with Z = tr(O^2);
/// see mpo_engine.hpp.
struct SampledSetting {
  std::size_t index = 0;
  PauliString pauli;
  /// chi_{target,P} = tr(target P) / sqrt(d). May be negative.
  double chi = 0.0;
  /// p(P) = chi^2 / Z.
  double weight = 0.0;
  /// Z, the total squared Pauli mass of the target.
  double normalization = 1.0;
  /// Per-site conditional distributions over (I, X, Y, Z).
  std::vector<std::array<double, 4>> conditionals;
  std::uint64_t stream_key = 0;
};

/// Forward message B_i after sampling the prefix P_1..P_i. `value` is an
/// alpha_i x alpha_i Hermitian matrix; after the last site it is the scalar
/// tr(rho P).
struct ForwardMessage {
  std::size_t site = 0;
  Matrix value = Matrix::Ones(1, 1);
  PauliString prefix;
};

/// Candidate messages for the next site, one per Pauli label (by code).
std::array<Matrix, 4> candidate_messages(const Mps& mps, const ForwardMessage& message);

/// Extends the message by one label.
ForwardMessage advance(const Mps& mps, const ForwardMessage& message, Pauli label);

/// Draws one Pauli string from p(P) = tr(rho P)^2 / d by a single forward
/// sweep. Requires a normalized right-canonical MPS. Cost O(n B^3).
SampledSetting sample_setting(const Mps& mps, Stream& rng);

/// Draws `count` settings; setting j uses stream (seed, Settings, j), so the
/// result does not depend on `workers`.
std::vector<SampledSetting> sample_settings(const Mps& mps, std::size_t count, std::uint64_t seed,
                                            unsigned workers = 1);

/// The sampler's per-site conditional distributions along a fixed string.
/// The product of entry i at label p_i is the probability of drawing p (zero
/// outside the support; later sites are then left zero).
std::vector<std::array<double, 4>> conditionals_along(const Mps& mps, const PauliString& p);

/// chi_{rho,P} along the same contraction path as sample_setting.
double chi_of(const Mps& mps, const PauliString& p);

/// Sum of p(P) over all completions of `prefix`.
double marginal_weight(const Mps& mps, const PauliString& prefix);

/// Index into the four labels chosen by inverse CDF with one uniform draw.
/// Zero weights are never selected.
int draw_categorical(const std::array<double, 4>& weights, double uniform);

}  // namespace mpsdfe
