#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpsdfe/tensor.hpp"

namespace mpsdfe {

class PauliString;

enum class CanonicalForm { None, RightCanonicalCenterFirst };

enum class OrthoMethod { Qr, Svd };

/// Physical slices of one MPS site. `slice[b]` is the alpha_{i-1} x alpha_i
/// matrix A_i^{(b)}, i.e. index order (leftBond, rightBond, physical).
using MpsSite = std::array<Matrix, 2>;

/// Physical slices of one MPO site. `slice[2 * out + in]` is the
/// beta_{i-1} x beta_i matrix for <out| . |in>, index order
/// (leftBond, rightBond, physOut, physIn).
using MpoSite = std::array<Matrix, 4>;

constexpr std::size_t mpo_slot(int out, int in) noexcept { return static_cast<std::size_t>(2 * out + in); }

/// Where a tensor chain came from; persisted alongside the tensors.
struct Provenance {
  std::string generator;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_bond;
};

/// Open-boundary matrix product state on n qubits.
class Mps {
 public:
  Mps() = default;
  explicit Mps(std::vector<MpsSite> sites, CanonicalForm form = CanonicalForm::None,
               Provenance provenance = {});

  std::size_t size() const noexcept { return sites_.size(); }
  const MpsSite& site(std::size_t i) const { return sites_.at(i); }
  const std::vector<MpsSite>& sites() const noexcept { return sites_; }

  /// alpha_0 .. alpha_n.
  std::vector<Index> bond_dims() const;
  Index max_bond() const;

  CanonicalForm canonical_form() const noexcept { return form_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = std::move(p); }

 private:
  std::vector<MpsSite> sites_;
  CanonicalForm form_ = CanonicalForm::None;
  Provenance provenance_;
};

/// Open-boundary matrix product operator on n qubits.
class Mpo {
 public:
  Mpo() = default;
  explicit Mpo(std::vector<MpoSite> sites, bool hermitian = false, Provenance provenance = {});

  std::size_t size() const noexcept { return sites_.size(); }
  const MpoSite& site(std::size_t i) const { return sites_.at(i); }
  const std::vector<MpoSite>& sites() const noexcept { return sites_; }

  std::vector<Index> bond_dims() const;
  Index max_bond() const;

  /// Caller's assertion that the operator is Hermitian.
  bool hermitian() const noexcept { return hermitian_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = std::move(p); }

 private:
  std::vector<MpoSite> sites_;
  bool hermitian_ = false;
  Provenance provenance_;
};

/// Right-to-left orthonormalization sweep leaving the orthogonality center on
/// the first site. The state (including its norm) is unchanged. With
/// OrthoMethod::Svd the singular values of every bond are written to
/// `spectra` (index i holds bond i, for i = 1..n-1; entry 0 is empty).
/// Throws NumericalError for a zero-norm state.
Mps canonicalize_right(const Mps& mps, OrthoMethod method = OrthoMethod::Qr,
                       std::vector<Eigen::VectorXd>* spectra = nullptr);

/// canonicalize_right followed by rescaling the first site to unit norm.
Mps normalize(const Mps& mps);

/// <psi|psi>.
double norm_squared(const Mps& mps);

/// max_i>=2 of max |sum_b A_i^{(b)} A_i^{(b)dagger} - I|.
double right_canonical_residual(const Mps& mps);

/// <psi| (x)_i M_i |psi> by a left-to-right boundary sweep.
Complex expectation_product(const Mps& mps, const ProductOperator& op);

/// tr[O (x)_i M_i] by a boundary-vector sweep.
Complex expectation_product_mpo(const Mpo& mpo, const ProductOperator& op);

/// alpha_i = min(2^i, 2^(n-i), max_bond), i = 0..n.
std::vector<Index> default_bond_profile(std::size_t n, Index max_bond);

/// Entries i.i.d. complex standard normal (real and imaginary parts N(0,1))
/// on the default bond profile, normalized. Not canonicalized.
Mps random_mps(std::size_t n, Index max_bond, std::uint64_t seed);

Mps product_zero_mps(std::size_t n);
Mps ghz_mps(std::size_t n);
Mps w_mps(std::size_t n);

Mpo identity_mpo(std::size_t n);
/// Bond-1 MPO for a tensor product of single-site operators.
Mpo product_mpo(const ProductOperator& op, bool hermitian);
/// |psi><psi| with bond dimension alpha^2.
Mpo projector_mpo(const Mps& mps);
/// Random (generally non-Hermitian) MPO, complex-normal entries.
Mpo random_mpo(std::size_t n, Index max_bond, std::uint64_t seed);
/// (M + M^dagger) / 2 as an MPO of doubled bond dimension.
Mpo mpo_symmetrize(const Mpo& mpo);
Mpo random_hermitian_mpo(std::size_t n, Index max_bond, std::uint64_t seed);

}  // namespace mpsdfe
