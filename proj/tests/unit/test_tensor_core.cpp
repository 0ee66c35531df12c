#include <gtest/gtest.h>

#include "mpsdfe/errors.hpp"
#include "mpsdfe/mps.hpp"
#include "mpsdfe/oracle.hpp"
#include "test_support.hpp"

using namespace mpsdfe;
using namespace mpsdfe::testing;

TEST(BondProfile, SaturatesAtMaxBond) {
  EXPECT_EQ(default_bond_profile(6, 3), (std::vector<Index>{1, 2, 3, 3, 3, 2, 1}));
  EXPECT_EQ(default_bond_profile(4, 16), (std::vector<Index>{1, 2, 4, 2, 1}));
  EXPECT_THROW(default_bond_profile(4, 0), ValidationError);
}

TEST(Mps, RejectsMismatchedBonds) {
  std::vector<MpsSite> sites(2);
  sites[0] = {Matrix::Ones(1, 2), Matrix::Ones(1, 2)};
  sites[1] = {Matrix::Ones(3, 1), Matrix::Ones(3, 1)};
  EXPECT_THROW(Mps{sites}, ValidationError);
  sites[1] = {Matrix::Ones(2, 2), Matrix::Ones(2, 2)};
  EXPECT_THROW(Mps{sites}, ValidationError);  // right boundary must be 1
}

TEST(Canonicalize, RightCanonicalAndSameState) {
  const Mps raw = random_mps(4, 3, 11);
  const Mps canon = canonicalize_right(raw);
  EXPECT_EQ(canon.canonical_form(), CanonicalForm::RightCanonicalCenterFirst);
  for (std::size_t i = 1; i < canon.size(); ++i) {
    Matrix acc = canon.site(i)[0] * canon.site(i)[0].adjoint() + canon.site(i)[1] * canon.site(i)[1].adjoint();
    EXPECT_LE((acc - Matrix::Identity(acc.rows(), acc.cols())).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_NEAR(overlap_modulus(dense_from_mps(raw), dense_from_mps(canon)), 1.0, 1e-10);
  EXPECT_NEAR(norm_squared(raw), norm_squared(canon), 1e-12);
}

TEST(Canonicalize, SvdMatchesQrAndReportsSpectra) {
  const Mps raw = random_mps(5, 4, 3);
  std::vector<Eigen::VectorXd> spectra;
  const Mps svd = canonicalize_right(raw, OrthoMethod::Svd, &spectra);
  const Mps qr = canonicalize_right(raw, OrthoMethod::Qr);
  EXPECT_LE(right_canonical_residual(svd), 1e-12);
  EXPECT_NEAR(overlap_modulus(dense_from_mps(svd), dense_from_mps(qr)), 1.0, 1e-10);
  ASSERT_EQ(spectra.size(), 5u);
  EXPECT_EQ(spectra[0].size(), 0);
  for (std::size_t i = 1; i < 5; ++i) EXPECT_GT(spectra[i].size(), 0);
}

TEST(Canonicalize, ZeroStateIsNumericalError) {
  std::vector<MpsSite> sites(2);
  sites[0] = {Matrix::Zero(1, 1), Matrix::Zero(1, 1)};
  sites[1] = {Matrix::Ones(1, 1), Matrix::Zero(1, 1)};
  EXPECT_THROW(canonicalize_right(Mps(sites)), NumericalError);
}

TEST(Canonicalize, NormalizeGivesUnitNorm) {
  const Mps m = normalize(random_mps(5, 2, 8));
  EXPECT_NEAR(norm_squared(m), 1.0, 1e-12);
  EXPECT_NEAR(dense_from_mps(m).norm(), 1.0, 1e-12);
}

TEST(ExpectationProduct, MatchesDenseOracle) {
  const Mps mps = random_mps(5, 3, 21);
  for (std::uint64_t k = 0; k < 6; ++k) {
    const auto p = random_pauli(5, 100 + k);
    const auto op = as_product_operator(p);
    const DenseState psi = dense_from_mps(mps);
    const Complex dense = psi.dot(dense_pauli(p) * psi);
    const Complex tn = expectation_product(mps, op);
    EXPECT_NEAR(std::abs(tn - dense), 0.0, 1e-10) << p.str();
    EXPECT_LE(std::abs(tn.imag()), 1e-10);
  }
}

TEST(ExpectationProduct, EmptyPauliGivesNormSquared) {
  const Mps mps = random_mps(4, 2, 5);
  EXPECT_NEAR(expectation_product(mps, as_product_operator(PauliString::identity(4))).real(), norm_squared(mps),
              1e-12);
  EXPECT_THROW(expectation_product(mps, as_product_operator(PauliString::identity(3))), ValidationError);
}

TEST(ExpectationProductMpo, MatchesDenseOracle) {
  const Mpo mpo = random_hermitian_mpo(4, 2, 9);
  const DenseOperator o = dense_from_mpo(mpo);
  EXPECT_LE((o - o.adjoint()).cwiseAbs().maxCoeff(), 1e-10);
  for (std::uint64_t k = 0; k < 6; ++k) {
    const auto p = random_pauli(4, 300 + k);
    const Complex dense = (o * dense_pauli(p)).trace();
    EXPECT_NEAR(std::abs(expectation_product_mpo(mpo, as_product_operator(p)) - dense), 0.0, 1e-10);
  }
}

TEST(Constructors, GhzAndW) {
  const DenseState ghz = dense_from_mps(ghz_mps(3));
  DenseState expect = DenseState::Zero(8);
  expect(0) = expect(7) = 1.0 / std::sqrt(2.0);
  EXPECT_LE((ghz - expect).norm(), 1e-12);
  EXPECT_NEAR(dense_from_mps(ghz_mps(6)).norm(), 1.0, 1e-12);

  const DenseState w = dense_from_mps(w_mps(4));
  DenseState w_expect = DenseState::Zero(16);
  for (int i = 0; i < 4; ++i) w_expect(1 << i) = 0.5;
  EXPECT_LE((w - w_expect).norm(), 1e-12);
  EXPECT_THROW(ghz_mps(1), ValidationError);
}

TEST(Constructors, ProductZeroAndIdentityMpo) {
  const DenseState zero = dense_from_mps(product_zero_mps(3));
  EXPECT_NEAR(std::abs(zero(0)), 1.0, 1e-15);
  EXPECT_LE((dense_from_mpo(identity_mpo(2)) - DenseOperator::Identity(4, 4)).norm(), 1e-15);
}

TEST(Constructors, ProjectorMpoMatchesDensity) {
  const Mps mps = canonical_random_mps(3, 2, 4);
  const DenseOperator rho = density(dense_from_mps(mps));
  const Mpo proj = projector_mpo(mps);
  EXPECT_LE((dense_from_mpo(proj) - rho).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(proj.hermitian());
}

TEST(Constructors, SymmetrizeIsHermitianPart) {
  const Mpo m = random_mpo(3, 2, 12);
  const DenseOperator dense = dense_from_mpo(m);
  const DenseOperator sym = dense_from_mpo(mpo_symmetrize(m));
  EXPECT_LE((sym - 0.5 * (dense + dense.adjoint())).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(mpo_symmetrize(m).hermitian());
}

TEST(Constructors, RandomMpsIsDeterministic) {
  const Mps a = random_mps(6, 4, 99);
  const Mps b = random_mps(6, 4, 99);
  const Mps c = random_mps(6, 4, 100);
  for (std::size_t i = 0; i < 6; ++i)
    for (int x = 0; x < 2; ++x) {
      EXPECT_EQ(a.site(i)[x], b.site(i)[x]);
    }
  EXPECT_NE(a.site(2)[0], c.site(2)[0]);
  EXPECT_NEAR(norm_squared(a), 1.0, 1e-12);
}
