#pragma once

// Dense brute-force references for small chains (n <= 6). Slow by design;
// they certify the tensor-network code paths in tests.

#include <optional>
#include <vector>

#include "mpsdfe/grouping.hpp"
#include "mpsdfe/mps.hpp"
#include "mpsdfe/pauli.hpp"
#include "mpsdfe/precision.hpp"

namespace mpsdfe {

inline constexpr std::size_t kOracleMaxQubits = 6;

/// Amplitudes psi[x] with site 1 as the most significant bit.
DenseState dense_from_mps(const Mps& mps);
DenseOperator dense_from_mpo(const Mpo& mpo);
DenseOperator dense_from_product(const ProductOperator& op);
DenseOperator dense_pauli(const PauliString& p);

DenseOperator density(const DenseState& psi);

/// (1 - lambda) rho + lambda I/d.
DenseOperator depolarize(const DenseOperator& rho, double lambda);

/// tr(A P) / sqrt(d) in O(d n), without forming P. Allowed up to n = 12.
double dense_chi(const DenseOperator& a, const PauliString& p);

struct PauliWeight {
  PauliString pauli;
  double chi = 0.0;
  double chi2 = 0.0;
};

/// All 4^n characteristic values in lexicographic IXYZ order.
std::vector<PauliWeight> full_pauli_weights(const DenseOperator& a);

struct FidelityCheck {
  double direct = 0.0;     // tr(rho sigma)
  double pauli_sum = 0.0;  // sum_P chi_rho,P chi_sigma,P
};

FidelityCheck exact_fidelity(const DenseOperator& rho, const DenseOperator& sigma);

struct GroupStatistics {
  /// sum over the group of chi^2 / Z.
  double group_weight = 0.0;
  /// sum over the group of |chi|.
  double l1_mass = 0.0;
  std::size_t group_size = 0;
  /// R_g = (1/p_g) sum chi_target chi_sigma against sigma, when given.
  std::optional<double> ideal_estimator;
  /// Shot count from the exact l1 rule, when precision parameters are given.
  std::optional<std::uint64_t> l1_shots;
};

/// Enumerates the group of `representative` under g for a Hermitian target
/// (state density or observable); Z = tr(target^2).
GroupStatistics exact_group_statistics(const DenseOperator& target, const SortingString& g,
                                       const PauliString& representative, const DenseOperator* sigma = nullptr,
                                       const PrecisionParams* params = nullptr);

/// Born probabilities tr(sigma Pi_s) of all 2^n sign vectors in SignVector
/// order for a measurement of the I-free setting (I sites measured in Z).
std::vector<double> exact_outcome_probabilities(const DenseOperator& sigma, const PauliString& setting);

/// All 2^n sign vectors in SignVector order.
std::vector<SignVector> all_sign_vectors(std::size_t n);

/// sum_s tr(sigma Pi_s) tr(target M_s) / (p_g d), enumerating every outcome.
double exact_snapshot_expectation(const DenseOperator& target, const DenseOperator& sigma,
                                  const GroupedSetting& grouped);

}  // namespace mpsdfe
