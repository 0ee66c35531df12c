#include <gtest/gtest.h>

#include <map>

#include "mpsdfe/errors.hpp"
#include "mpsdfe/mpo_engine.hpp"
#include "mpsdfe/oracle.hpp"
#include "test_support.hpp"

using namespace mpsdfe;
using namespace mpsdfe::testing;

namespace {

const PrecisionParams kParams = PrecisionParams::from(0.1, 0.1);

Mpo z_mpo() {
  ProductOperator op{{pauli_matrix(Pauli::Z)}};
  return product_mpo(op, true);
}

GroupedSetting grouped_for(const InducedGamma& gamma, const PauliString& latent, const SortingString& g) {
  SampledSetting s;
  s.pauli = latent;
  s.chi = chi_of_mpo(gamma, latent);
  s.normalization = normalization(gamma);
  s.weight = s.chi * s.chi / s.normalization;
  return make_grouped_setting_mpo(gamma, s, g, kParams);
}

}  // namespace

TEST(InduceGamma, IdentityMpo) {
  const auto gamma = induce_gamma(identity_mpo(3));
  for (const auto& site : gamma.sites) {
    EXPECT_NEAR(std::abs(site[0](0, 0) - std::sqrt(2.0)), 0.0, 1e-15);
    for (int q = 1; q < 4; ++q) EXPECT_NEAR(site[q].norm(), 0.0, 1e-15);
  }
  EXPECT_NEAR(chi_of_mpo(gamma, PauliString::identity(3)), std::sqrt(8.0), 1e-14);
  EXPECT_NEAR(normalization(gamma), 8.0, 1e-12);
}

TEST(InduceGamma, SingleZ) {
  const auto gamma = induce_gamma(z_mpo());
  EXPECT_NEAR(chi_of_mpo(gamma, PauliString::parse("Z")), std::sqrt(2.0), 1e-15);
  for (const char* p : {"I", "X", "Y"}) EXPECT_NEAR(chi_of_mpo(gamma, PauliString::parse(p)), 0.0, 1e-15);
  EXPECT_NEAR(normalization(gamma), 2.0, 1e-14);
}

TEST(InduceGamma, RejectsUnflaggedMpo) { EXPECT_THROW(induce_gamma(random_mpo(2, 2, 1)), ValidationError); }

TEST(InduceGamma, ChiMatchesDenseForEveryString) {
  const Mpo mpo = random_hermitian_mpo(4, 2, 15);
  const auto gamma = induce_gamma(mpo);
  const auto canon = canonicalize(gamma);
  const auto weights = full_pauli_weights(dense_from_mpo(mpo));
  ASSERT_EQ(weights.size(), 256u);
  double z = 0.0;
  for (const auto& w : weights) {
    EXPECT_NEAR(chi_of_mpo(gamma, w.pauli), w.chi, 1e-10);
    EXPECT_NEAR(chi_of_mpo(canon, w.pauli), w.chi, 1e-10);
    z += w.chi2;
  }
  const DenseOperator o = dense_from_mpo(mpo);
  EXPECT_NEAR(z, (o * o).trace().real(), 1e-8);
  EXPECT_NEAR(normalization(gamma), z, 1e-8);
  EXPECT_NEAR(normalization(canon), z, 1e-8);
  EXPECT_LE(gamma_residual(canon), 1e-12);
  EXPECT_TRUE(canon.canonical);
}

TEST(SampleMpo, DegenerateTargets) {
  const auto id = prepare_mpo(identity_mpo(3));
  const auto zed = prepare_mpo(z_mpo());
  for (std::uint64_t k = 0; k < 20; ++k) {
    Stream a(k), b(k);
    const auto s = sample_setting_mpo(id, a);
    EXPECT_EQ(s.pauli.str(), "III");
    EXPECT_NEAR(s.weight, 1.0, 1e-12);
    EXPECT_NEAR(s.normalization, 8.0, 1e-12);
    const auto t = sample_setting_mpo(zed, b);
    EXPECT_EQ(t.pauli.str(), "Z");
    EXPECT_NEAR(t.normalization, 2.0, 1e-12);
  }
}

TEST(SampleMpo, RequiresCanonicalChain) {
  Stream rng(0);
  EXPECT_THROW(sample_setting_mpo(induce_gamma(identity_mpo(2)), rng), ValidationError);
}

TEST(SampleMpo, ConditionalsReproduceWeights) {
  const Mpo mpo = random_hermitian_mpo(4, 2, 3);
  const auto gamma = prepare_mpo(mpo);
  const DenseOperator o = dense_from_mpo(mpo);
  for (const auto& s : sample_settings_mpo(gamma, 50, 8)) {
    const double chi = dense_chi(o, s.pauli);
    EXPECT_NEAR(s.chi, chi, 1e-10);
    EXPECT_NEAR(s.weight, chi * chi / s.normalization, 1e-10);
    EXPECT_NEAR(conditional_product(s, s.pauli), s.weight, 1e-10);
  }
}

TEST(SampleMpo, EmpiricalDistributionMatches) {
  const Mpo mpo = random_hermitian_mpo(3, 2, 44);
  const auto gamma = prepare_mpo(mpo);
  const auto weights = full_pauli_weights(dense_from_mpo(mpo));
  const double z = normalization(gamma);
  const std::size_t draws = 100000;
  std::map<PauliString, double> freq;
  for (const auto& s : sample_settings_mpo(gamma, draws, 2)) freq[s.pauli] += 1.0 / draws;
  double tv = 0.0;
  for (const auto& w : weights) tv += std::abs(freq[w.pauli] - w.chi2 / z);
  EXPECT_LE(0.5 * tv, 0.02);
}

TEST(GroupWeightMpo, Examples) {
  const auto id = prepare_mpo(identity_mpo(3));
  const auto g = SortingString::parse("XYZ");
  EXPECT_NEAR(group_weight_mpo(id, PauliString::parse("XYZ"), g), 1.0, 1e-12);
  const auto zed = prepare_mpo(z_mpo());
  EXPECT_NEAR(group_weight_mpo(zed, PauliString::parse("Z"), SortingString::parse("Z")), 1.0, 1e-12);
}

TEST(GroupWeightMpo, MatchesEnumeration) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Mpo mpo = random_hermitian_mpo(4, 2, 70 + seed);
    const auto gamma = prepare_mpo(mpo);
    const auto g = random_sorting(4, seed);
    Stream rng(seed);
    const auto rep = representative(sample_setting_mpo(gamma, rng).pauli, g);
    const auto stats = exact_group_statistics(dense_from_mpo(mpo), g, rep);
    EXPECT_NEAR(group_weight_mpo(gamma, rep, g), stats.group_weight, 1e-10);
    EXPECT_NEAR(group_weight_mpo(induce_gamma(mpo), rep, g), stats.group_weight, 1e-10);
  }
}

TEST(ShotBudgetMpo, IdentityArithmetic) {
  const auto id = prepare_mpo(identity_mpo(3));
  const auto grouped = grouped_for(id, PauliString::identity(3), SortingString::parse("ZZZ"));
  EXPECT_NEAR(grouped.group_weight, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(grouped.group_size(), 8.0);
  EXPECT_EQ(shot_budget_mpo(grouped, kParams, 8.0).shots, 5u);
  EXPECT_EQ(grouped.budget.shots, 5u);
}

TEST(SnapshotMpo, IdentityGivesOne) {
  const Mpo mpo = identity_mpo(3);
  const auto gamma = prepare_mpo(mpo);
  const auto grouped = grouped_for(gamma, PauliString::identity(3), SortingString::parse("XZY"));
  for (const auto& s : all_sign_vectors(3)) EXPECT_NEAR(snapshot_mpo(mpo, grouped, s), 1.0, 1e-12);
}

TEST(SnapshotMpo, ProjectorReproducesMpsSnapshots) {
  const Mps mps = canonical_random_mps(4, 2, 9);
  const Mpo proj = projector_mpo(mps);
  const auto gamma = prepare_mpo(proj);
  const auto g = SortingString::parse("ZXYX");
  const auto latent = PauliString::parse("XIZY");
  const auto grouped_mpo = grouped_for(gamma, latent, g);
  SampledSetting s;
  s.pauli = latent;
  s.chi = chi_of(mps, latent);
  s.weight = s.chi * s.chi;
  const auto grouped_mps = make_grouped_setting(mps, s, g, kParams);
  EXPECT_NEAR(grouped_mpo.group_weight, grouped_mps.group_weight, 1e-10);
  EXPECT_NEAR(normalization(gamma), 1.0, 1e-10);
  for (const auto& sv : all_sign_vectors(4))
    EXPECT_NEAR(snapshot_mpo(proj, grouped_mpo, sv), snapshot(mps, grouped_mps, sv), 1e-9);
}

TEST(SnapshotMpo, UnbiasedByEnumeration) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Mpo mpo = random_hermitian_mpo(4, 2, 200 + seed);
    const auto gamma = prepare_mpo(mpo);
    const DenseOperator o = dense_from_mpo(mpo);
    const auto g = random_sorting(4, seed);
    Stream rng(seed);
    const auto grouped = grouped_for(gamma, sample_setting_mpo(gamma, rng).pauli, g);
    const DenseOperator rho = density(dense_from_mps(canonical_random_mps(4, 2, 300 + seed)));
    for (const DenseOperator& sigma : {rho, depolarize(rho, 1.0), depolarize(rho, 0.1)}) {
      const auto probs = exact_outcome_probabilities(sigma, grouped.representative);
      const auto signs = all_sign_vectors(4);
      double expectation = 0.0;
      for (std::size_t k = 0; k < signs.size(); ++k) expectation += probs[k] * snapshot_mpo(mpo, grouped, signs[k]);
      const auto stats = exact_group_statistics(o, g, grouped.representative, &sigma);
      ASSERT_TRUE(stats.ideal_estimator.has_value());
      EXPECT_NEAR(expectation, *stats.ideal_estimator, 1e-8);
      EXPECT_NEAR(expectation, exact_snapshot_expectation(o, sigma, grouped), 1e-8);
    }
  }
}

// E_P[Z chi_sigma / chi_O] over P ~ chi_O^2 / Z equals tr(O sigma).
TEST(PlainMpoEstimator, ExpectationIsOverlap) {
  const Mpo mpo = random_hermitian_mpo(3, 2, 5);
  const DenseOperator o = dense_from_mpo(mpo);
  const DenseOperator sigma = depolarize(density(dense_from_mps(canonical_random_mps(3, 2, 6))), 0.2);
  const auto gamma = prepare_mpo(mpo);
  const double z = normalization(gamma);
  double expectation = 0.0;
  for (const auto& w : full_pauli_weights(o)) {
    if (w.chi2 == 0.0) continue;
    expectation += (w.chi2 / z) * z * dense_chi(sigma, w.pauli) / w.chi;
  }
  EXPECT_NEAR(expectation, (o * sigma).trace().real(), 1e-10);
}
