#include <gtest/gtest.h>

#include <map>

#include "mpsdfe/device.hpp"
#include "mpsdfe/errors.hpp"
#include "mpsdfe/oracle.hpp"
#include "mpsdfe/outcomes.hpp"
#include "test_support.hpp"

using namespace mpsdfe;
using namespace mpsdfe::testing;

namespace {

// Pearson statistic over the 2^n outcomes against dense Born probabilities.
double chi_square(const OutcomeHistogram& hist, const std::vector<double>& probs, std::size_t n) {
  const auto signs = all_sign_vectors(n);
  std::map<SignVector, double> observed;
  for (const auto& o : hist) observed[o.signs] = static_cast<double>(o.count);
  const double total = static_cast<double>(total_shots(hist));
  double stat = 0.0;
  for (std::size_t k = 0; k < signs.size(); ++k) {
    const double expected = total * probs[k];
    if (expected < 1e-9) {
      EXPECT_EQ(observed[signs[k]], 0.0);
      continue;
    }
    const double diff = observed[signs[k]] - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

// Upper 0.001 quantile of the chi-square distribution with 15 degrees of freedom.
constexpr double kChiSquare15 = 37.697;

}  // namespace

TEST(Device, ZeroStateAlwaysPlus) {
  const DeviceModel device(product_zero_mps(1), 0.0);
  for (const auto& s : measure(device, PauliString::parse("Z"), 200, 5)) EXPECT_EQ(s.str(), "+");
  const auto hist = measure_counts(device, PauliString::parse("Z"), 200, 5);
  ASSERT_EQ(hist.size(), 1u);
  EXPECT_EQ(hist[0].count, 200u);
}

TEST(Device, Validation) {
  EXPECT_THROW(DeviceModel(product_zero_mps(2), 1.5), ValidationError);
  const DeviceModel device(product_zero_mps(2), 0.0);
  EXPECT_THROW(measure(device, PauliString::parse("Z"), 1, 0), ValidationError);
}

TEST(Device, FullyDepolarizedIsUnbiased) {
  const DeviceModel device(canonical_random_mps(3, 2, 4), 1.0);
  const std::uint64_t shots = 100000;
  for (const bool counts : {false, true}) {
    const OutcomeHistogram hist = counts ? measure_counts(device, PauliString::parse("XYZ"), shots, 9)
                                         : make_histogram(measure(device, PauliString::parse("XYZ"), shots, 9));
    for (const char* p : {"XII", "IYI", "IIZ"}) {
      const double bias = mean_parity(hist, PauliString::parse(p));
      EXPECT_LE(std::abs(bias), 4.0 / std::sqrt(double(shots))) << p;
    }
  }
}

TEST(Device, OutcomeFrequenciesMatchBornRule) {
  const Mps mps = canonical_random_mps(4, 3, 19);
  const DeviceModel device(mps, 0.1);
  const DenseOperator sigma = depolarize(density(dense_from_mps(mps)), 0.1);
  for (std::uint64_t trial = 0; trial < 3; ++trial) {
    const auto setting = random_pauli(4, 70 + trial);
    const auto probs = exact_outcome_probabilities(sigma, setting);
    const auto per_shot = make_histogram(measure(device, setting, 100000, trial));
    const auto counts = measure_counts(device, setting, 100000, trial);
    EXPECT_LT(chi_square(per_shot, probs, 4), kChiSquare15) << setting.str();
    EXPECT_LT(chi_square(counts, probs, 4), kChiSquare15) << setting.str();
  }
}

TEST(Device, DeterministicPerShot) {
  const DeviceModel device(canonical_random_mps(5, 2, 1), 0.3);
  const auto setting = PauliString::parse("XYZIX");
  const auto a = measure(device, setting, 50, 77);
  const auto b = measure(device, setting, 50, 77);
  EXPECT_EQ(a, b);
  // Shot k depends only on (key, k).
  const auto prefix = measure(device, setting, 20, 77);
  for (std::size_t k = 0; k < 20; ++k) EXPECT_EQ(prefix[k], a[k]);
  EXPECT_EQ(measure_counts(device, setting, 5000, 3).size(), measure_counts(device, setting, 5000, 3).size());
  const auto c1 = measure_counts(device, setting, 5000, 3);
  const auto c2 = measure_counts(device, setting, 5000, 3);
  for (std::size_t k = 0; k < c1.size(); ++k) {
    EXPECT_EQ(c1[k].signs, c2[k].signs);
    EXPECT_EQ(c1[k].count, c2[k].count);
  }
  EXPECT_EQ(total_shots(c1), 5000u);
}

TEST(Device, BellParityEstimate) {
  const DeviceModel device(ghz_mps(2), 0.0);
  const auto xx = PauliString::parse("XX");
  const auto hist = measure_counts(device, xx, 20000, 1);
  EXPECT_NEAR(estimate_chi_sigma(hist, xx), 0.5, 1e-12);  // XX is a stabilizer: every shot has parity +1
  EXPECT_NEAR(estimate_chi_sigma(hist, PauliString::parse("II")), 0.5, 1e-15);
}

TEST(Device, DepolarizedChiConverges) {
  const Mps mps = canonical_random_mps(4, 2, 8);
  const double lambda = 0.1;
  const DeviceModel device(mps, lambda);
  const DenseOperator rho = density(dense_from_mps(mps));
  for (std::uint64_t k = 0; k < 4; ++k) {
    auto p = random_pauli(4, 900 + k);
    if (p == PauliString::identity(4)) continue;
    const std::uint64_t shots = 100000;
    const auto hist = measure_counts(device, p, shots, k);
    const double expected = (1.0 - lambda) * dense_chi(rho, p);
    const double sigma_chi = 1.0 / std::sqrt(16.0 * double(shots));
    EXPECT_NEAR(estimate_chi_sigma(hist, p), expected, 4.0 * sigma_chi) << p.str();
  }
}

TEST(Outcomes, HistogramRoundTrip) {
  std::vector<SignVector> shots{SignVector::parse("+-"), SignVector::parse("--"), SignVector::parse("+-")};
  const auto hist = make_histogram(shots);
  ASSERT_EQ(hist.size(), 2u);
  EXPECT_EQ(hist[0].signs.str(), "--");
  EXPECT_EQ(hist[1].count, 2u);
  EXPECT_EQ(total_shots(hist), 3u);
  EXPECT_EQ(expand_histogram(hist).size(), 3u);
}
