#include <gtest/gtest.h>

#include <map>

#include "mpsdfe/errors.hpp"
#include "mpsdfe/oracle.hpp"
#include "mpsdfe/sampler.hpp"
#include "test_support.hpp"

using namespace mpsdfe;
using namespace mpsdfe::testing;

TEST(Sampler, SingleQubitZero) {
  const Mps zero = product_zero_mps(1);
  for (std::uint64_t k = 0; k < 8; ++k) {
    Stream rng(k);
    const auto s = sample_setting(zero, rng);
    EXPECT_NEAR(s.conditionals[0][0], 0.5, 1e-15);
    EXPECT_NEAR(s.conditionals[0][1], 0.0, 1e-15);
    EXPECT_NEAR(s.conditionals[0][2], 0.0, 1e-15);
    EXPECT_NEAR(s.conditionals[0][3], 0.5, 1e-15);
    EXPECT_TRUE(s.pauli.str() == "I" || s.pauli.str() == "Z");
    EXPECT_NEAR(s.chi, 1.0 / std::sqrt(2.0), 1e-15);
  }
}

TEST(Sampler, BellSupport) {
  const Mps bell = canonicalize_right(ghz_mps(2));
  std::map<std::string, int> counts;
  for (std::uint64_t k = 0; k < 400; ++k) {
    Stream rng(k);
    const auto s = sample_setting(bell, rng);
    for (int q = 0; q < 4; ++q) EXPECT_NEAR(s.conditionals[0][q], 0.25, 1e-14);
    EXPECT_NEAR(s.weight, 0.25, 1e-14);
    ++counts[s.pauli.str()];
  }
  for (const auto& [p, c] : counts) EXPECT_TRUE(p == "II" || p == "XX" || p == "YY" || p == "ZZ") << p;
  EXPECT_EQ(counts.size(), 4u);
}

TEST(Sampler, RejectsNonCanonicalOrUnnormalized) {
  Stream rng(1);
  EXPECT_THROW(sample_setting(random_mps(3, 2, 1), rng), ValidationError);
  const Mps raw = random_mps(3, 2, 1);
  std::vector<MpsSite> sites = canonicalize_right(raw).sites();
  sites[0][0] *= 2.0;
  EXPECT_THROW(sample_setting(Mps(sites, CanonicalForm::RightCanonicalCenterFirst), rng), ValidationError);
}

// Every string's probability of being drawn equals chi^2 from the dense state.
TEST(Sampler, ConditionalProductMatchesDenseWeights) {
  const Mps mps = canonical_random_mps(5, 3, 17);
  const auto weights = full_pauli_weights(density(dense_from_mps(mps)));
  double total = 0.0;
  for (const auto& w : weights) {
    const double p = conditional_product(SampledSetting{.conditionals = conditionals_along(mps, w.pauli)}, w.pauli);
    EXPECT_NEAR(p, w.chi2, 1e-10) << w.pauli.str();
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Sampler, SampledRecordIsConsistent) {
  const Mps mps = canonical_random_mps(5, 3, 23);
  const DenseOperator rho = density(dense_from_mps(mps));
  for (const auto& s : sample_settings(mps, 40, 5)) {
    EXPECT_NEAR(conditional_product(s, s.pauli), s.weight, 1e-10);
    EXPECT_NEAR(s.chi, dense_chi(rho, s.pauli), 1e-10);
    EXPECT_GT(s.weight, 0.0);
  }
}

TEST(ChiOf, Examples) {
  EXPECT_NEAR(chi_of(product_zero_mps(3), PauliString::parse("ZZZ")), 1.0 / std::sqrt(8.0), 1e-15);
  EXPECT_NEAR(chi_of(ghz_mps(2), PauliString::parse("XZ")), 0.0, 1e-15);
  const Mps mps = canonical_random_mps(4, 3, 2);
  const DenseOperator rho = density(dense_from_mps(mps));
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto p = random_pauli(4, k);
    EXPECT_NEAR(chi_of(mps, p), dense_chi(rho, p), 1e-10);
  }
}

TEST(MarginalWeight, Examples) {
  const Mps bell = canonicalize_right(ghz_mps(2));
  EXPECT_NEAR(marginal_weight(bell, PauliString()), 1.0, 1e-14);
  EXPECT_NEAR(marginal_weight(bell, PauliString::parse("X")), 0.25, 1e-14);

  const Mps mps = canonical_random_mps(5, 3, 31);
  const auto weights = full_pauli_weights(density(dense_from_mps(mps)));
  const auto prefix = PauliString::parse("YZ");
  double expected = 0.0;
  for (const auto& w : weights)
    if (w.pauli[0] == prefix[0] && w.pauli[1] == prefix[1]) expected += w.chi2;
  EXPECT_NEAR(marginal_weight(mps, prefix), expected, 1e-10);
  EXPECT_NEAR(marginal_weight(mps, PauliString()), 1.0, 1e-12);
}

TEST(Sampler, DeterministicAndWorkerIndependent) {
  const Mps mps = canonical_random_mps(8, 4, 3);
  const auto a = sample_settings(mps, 64, 99, 1);
  const auto b = sample_settings(mps, 64, 99, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    EXPECT_EQ(a[j].pauli, b[j].pauli);
    EXPECT_EQ(a[j].chi, b[j].chi);
    EXPECT_EQ(a[j].stream_key, b[j].stream_key);
    EXPECT_EQ(a[j].index, j);
  }
  const auto c = sample_settings(mps, 64, 100, 1);
  int differing = 0;
  for (std::size_t j = 0; j < a.size(); ++j) differing += a[j].pauli != c[j].pauli;
  EXPECT_GT(differing, 0);
}

TEST(Sampler, MessagesAdvanceLikeTheSweep) {
  const Mps mps = canonical_random_mps(4, 2, 8);
  const auto p = PauliString::parse("XZIY");
  ForwardMessage m;
  for (std::size_t i = 0; i < 4; ++i) m = advance(mps, m, p[i]);
  EXPECT_EQ(m.prefix, p);
  EXPECT_NEAR(m.value(0, 0).real() / 4.0, chi_of(mps, p), 1e-12);
  EXPECT_THROW(candidate_messages(mps, m), ValidationError);
}

TEST(DrawCategorical, SkipsZeroWeights) {
  EXPECT_EQ(draw_categorical({0.0, 1.0, 0.0, 1.0}, 0.0), 1);
  EXPECT_EQ(draw_categorical({0.0, 1.0, 0.0, 1.0}, 0.75), 3);
  EXPECT_EQ(draw_categorical({1.0, 0.0, 0.0, 0.0}, 0.999999), 0);
  EXPECT_THROW(draw_categorical({0.0, 0.0, 0.0, 0.0}, 0.5), NumericalError);
}
