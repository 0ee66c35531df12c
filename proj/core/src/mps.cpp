#include "mpsdfe/mps.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "chain.hpp"
#include "mpsdfe/errors.hpp"
#include "mpsdfe/random.hpp"

namespace mpsdfe {

namespace {

template <std::size_t D>
void validate_chain(const std::vector<std::array<Matrix, D>>& sites, const char* what) {
  using detail::require;
  require(!sites.empty(), std::string(what) + ": at least one site required");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto& s = sites[i];
    for (std::size_t b = 1; b < D; ++b)
      require(s[b].rows() == s[0].rows() && s[b].cols() == s[0].cols(),
              std::string(what) + ": inconsistent slice shapes at site " + std::to_string(i));
    require(s[0].rows() >= 1 && s[0].cols() >= 1,
            std::string(what) + ": empty bond at site " + std::to_string(i));
    if (i > 0)
      require(sites[i - 1][0].cols() == s[0].rows(),
              std::string(what) + ": bond dimension mismatch between sites " + std::to_string(i - 1) +
                  " and " + std::to_string(i));
  }
  require(sites.front()[0].rows() == 1, std::string(what) + ": left boundary bond must be 1");
  require(sites.back()[0].cols() == 1, std::string(what) + ": right boundary bond must be 1");
}

template <std::size_t D>
std::vector<Index> chain_bonds(const std::vector<std::array<Matrix, D>>& sites) {
  std::vector<Index> bonds;
  bonds.reserve(sites.size() + 1);
  bonds.push_back(sites.empty() ? 1 : sites.front()[0].rows());
  for (const auto& s : sites) bonds.push_back(s[0].cols());
  return bonds;
}

Matrix random_block(Index rows, Index cols, std::mt19937_64& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) {
      const double re = normal(engine);
      const double im = normal(engine);
      m(r, c) = Complex(re, im);
    }
  return m;
}

void require_length(std::size_t n, const ProductOperator& op, const char* what) {
  if (op.size() != n)
    throw ValidationError(std::string(what) + ": operator has " + std::to_string(op.size()) +
                          " factors for " + std::to_string(n) + " sites");
}

}  // namespace

Mps::Mps(std::vector<MpsSite> sites, CanonicalForm form, Provenance provenance)
    : sites_(std::move(sites)), form_(form), provenance_(std::move(provenance)) {
  validate_chain(sites_, "MPS");
}

std::vector<Index> Mps::bond_dims() const { return chain_bonds(sites_); }

Index Mps::max_bond() const {
  const auto b = bond_dims();
  return *std::max_element(b.begin(), b.end());
}

Mpo::Mpo(std::vector<MpoSite> sites, bool hermitian, Provenance provenance)
    : sites_(std::move(sites)), hermitian_(hermitian), provenance_(std::move(provenance)) {
  validate_chain(sites_, "MPO");
}

std::vector<Index> Mpo::bond_dims() const { return chain_bonds(sites_); }

Index Mpo::max_bond() const {
  const auto b = bond_dims();
  return *std::max_element(b.begin(), b.end());
}

Mps canonicalize_right(const Mps& mps, OrthoMethod method, std::vector<Eigen::VectorXd>* spectra) {
  auto sites = mps.sites();
  detail::orthonormalize_right(sites, method, spectra);
  return Mps(std::move(sites), CanonicalForm::RightCanonicalCenterFirst, mps.provenance());
}

Mps normalize(const Mps& mps) {
  auto sites = canonicalize_right(mps).sites();
  const double norm = std::sqrt(sites[0][0].squaredNorm() + sites[0][1].squaredNorm());
  for (auto& s : sites[0]) s /= norm;
  return Mps(std::move(sites), CanonicalForm::RightCanonicalCenterFirst, mps.provenance());
}

double norm_squared(const Mps& mps) {
  ProductOperator id;
  id.factors.assign(mps.size(), Matrix2::Identity());
  return expectation_product(mps, id).real();
}

double right_canonical_residual(const Mps& mps) { return detail::right_residual(mps.sites()); }

Complex expectation_product(const Mps& mps, const ProductOperator& op) {
  require_length(mps.size(), op, "expectation_product");
  Matrix env = Matrix::Ones(1, 1);
  for (std::size_t i = 0; i < mps.size(); ++i) env = detail::left_transfer(env, mps.site(i), op.factors[i]);
  return env(0, 0);
}

Complex expectation_product_mpo(const Mpo& mpo, const ProductOperator& op) {
  require_length(mpo.size(), op, "expectation_product_mpo");
  RowVector v = RowVector::Ones(1);
  for (std::size_t i = 0; i < mpo.size(); ++i) {
    const auto& s = mpo.site(i);
    const Matrix2& m = op.factors[i];
    // tr[O M] = sum_{out,in} O_{out,in} M_{in,out}
    Matrix local = Matrix::Zero(s[0].rows(), s[0].cols());
    for (int out = 0; out < 2; ++out)
      for (int in = 0; in < 2; ++in)
        if (m(in, out) != Complex(0.0)) local += m(in, out) * s[mpo_slot(out, in)];
    v = v * local;
  }
  return v(0);
}

std::vector<Index> default_bond_profile(std::size_t n, Index max_bond) {
  detail::require(n >= 1, "bond profile: n must be >= 1");
  detail::require(max_bond >= 1, "bond profile: maxBond must be >= 1");
  std::vector<Index> bonds(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const std::size_t left = std::min<std::size_t>(i, 62);
    const std::size_t right = std::min<std::size_t>(n - i, 62);
    const Index edge = static_cast<Index>(std::min(std::uint64_t{1} << left, std::uint64_t{1} << right));
    bonds[i] = std::min(edge, max_bond);
  }
  return bonds;
}

Mps random_mps(std::size_t n, Index max_bond, std::uint64_t seed) {
  const auto bonds = default_bond_profile(n, max_bond);
  std::mt19937_64 engine(stream_key(seed, Phase::Target, 0));
  std::vector<MpsSite> sites(n);
  for (std::size_t i = 0; i < n; ++i)
    for (auto& slice : sites[i]) slice = random_block(bonds[i], bonds[i + 1], engine);
  Mps raw(std::move(sites));
  const double norm = std::sqrt(norm_squared(raw));
  if (!(norm > 0.0)) throw NumericalError("random_mps: zero-norm draw");
  auto scaled = raw.sites();
  for (auto& s : scaled[0]) s /= norm;
  return Mps(std::move(scaled), CanonicalForm::None,
             Provenance{"random", seed, static_cast<int>(max_bond)});
}

Mps product_zero_mps(std::size_t n) {
  detail::require(n >= 1, "product_zero_mps: n must be >= 1");
  std::vector<MpsSite> sites(n);
  for (auto& s : sites) {
    s[0] = Matrix::Ones(1, 1);
    s[1] = Matrix::Zero(1, 1);
  }
  return Mps(std::move(sites), CanonicalForm::RightCanonicalCenterFirst, Provenance{"product-zero", {}, 1});
}

Mps ghz_mps(std::size_t n) {
  detail::require(n >= 2, "ghz_mps: n must be >= 2");
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<MpsSite> sites(n);
  sites[0][0] = Matrix{{r, 0.0}};
  sites[0][1] = Matrix{{0.0, r}};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    sites[i][0] = Matrix{{1.0, 0.0}, {0.0, 0.0}};
    sites[i][1] = Matrix{{0.0, 0.0}, {0.0, 1.0}};
  }
  sites[n - 1][0] = Matrix{{1.0}, {0.0}};
  sites[n - 1][1] = Matrix{{0.0}, {1.0}};
  return Mps(std::move(sites), CanonicalForm::None, Provenance{"ghz", {}, 2});
}

Mps w_mps(std::size_t n) {
  detail::require(n >= 2, "w_mps: n must be >= 2");
  const double r = 1.0 / std::sqrt(static_cast<double>(n));
  // Bond state 0: no excitation seen yet; 1: excitation already placed.
  std::vector<MpsSite> sites(n);
  sites[0][0] = Matrix{{r, 0.0}};
  sites[0][1] = Matrix{{0.0, r}};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    sites[i][0] = Matrix{{1.0, 0.0}, {0.0, 1.0}};
    sites[i][1] = Matrix{{0.0, 1.0}, {0.0, 0.0}};
  }
  sites[n - 1][0] = Matrix{{0.0}, {1.0}};
  sites[n - 1][1] = Matrix{{1.0}, {0.0}};
  return Mps(std::move(sites), CanonicalForm::None, Provenance{"w", {}, 2});
}

Mpo identity_mpo(std::size_t n) {
  ProductOperator id;
  id.factors.assign(n, Matrix2::Identity());
  auto mpo = product_mpo(id, true);
  mpo.set_provenance(Provenance{"identity", {}, 1});
  return mpo;
}

Mpo product_mpo(const ProductOperator& op, bool hermitian) {
  detail::require(op.size() >= 1, "product_mpo: at least one factor required");
  std::vector<MpoSite> sites(op.size());
  for (std::size_t i = 0; i < op.size(); ++i)
    for (int out = 0; out < 2; ++out)
      for (int in = 0; in < 2; ++in) sites[i][mpo_slot(out, in)] = Matrix::Constant(1, 1, op.factors[i](out, in));
  return Mpo(std::move(sites), hermitian, Provenance{"product", {}, 1});
}

Mpo projector_mpo(const Mps& mps) {
  std::vector<MpoSite> sites(mps.size());
  for (std::size_t i = 0; i < mps.size(); ++i) {
    const auto& a = mps.site(i);
    for (int out = 0; out < 2; ++out)
      for (int in = 0; in < 2; ++in)
        sites[i][mpo_slot(out, in)] = Eigen::kroneckerProduct(a[out], a[in].conjugate());
  }
  return Mpo(std::move(sites), true, Provenance{"projector", mps.provenance().seed, {}});
}

Mpo random_mpo(std::size_t n, Index max_bond, std::uint64_t seed) {
  const auto bonds = default_bond_profile(n, max_bond);
  std::mt19937_64 engine(stream_key(seed, Phase::Target, 1));
  std::vector<MpoSite> sites(n);
  const double scale = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i)
    for (auto& slice : sites[i]) slice = scale * random_block(bonds[i], bonds[i + 1], engine);
  return Mpo(std::move(sites), false, Provenance{"random-mpo", seed, static_cast<int>(max_bond)});
}

Mpo mpo_symmetrize(const Mpo& mpo) {
  const std::size_t n = mpo.size();
  std::vector<MpoSite> sites(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = mpo.site(i);
    for (int out = 0; out < 2; ++out)
      for (int in = 0; in < 2; ++in) {
        const Matrix& m = s[mpo_slot(out, in)];
        // (M^dagger)_{out,in} = conj(M_{in,out}), same bond structure.
        const Matrix adj = s[mpo_slot(in, out)].conjugate();
        const Index r = m.rows();
        const Index c = m.cols();
        Matrix block;
        if (n == 1) {
          block = 0.5 * (m + adj);
        } else if (i == 0) {
          block.resize(1, 2 * c);
          block << 0.5 * m, 0.5 * adj;
        } else if (i + 1 == n) {
          block.resize(2 * r, 1);
          block << m, adj;
        } else {
          block = Matrix::Zero(2 * r, 2 * c);
          block.topLeftCorner(r, c) = m;
          block.bottomRightCorner(r, c) = adj;
        }
        sites[i][mpo_slot(out, in)] = std::move(block);
      }
  }
  return Mpo(std::move(sites), true, mpo.provenance());
}

Mpo random_hermitian_mpo(std::size_t n, Index max_bond, std::uint64_t seed) {
  auto mpo = mpo_symmetrize(random_mpo(n, max_bond, seed));
  mpo.set_provenance(Provenance{"random-hermitian-mpo", seed, static_cast<int>(max_bond)});
  return mpo;
}

}  // namespace mpsdfe
