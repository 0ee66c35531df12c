#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mpsdfe/random.hpp"
#include "mpsdfe/tensor.hpp"

namespace mpsdfe {

/// Single-qubit Pauli label, stored as a 2-bit code.
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline constexpr std::array<Pauli, 4> kPaulis{Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
inline constexpr std::array<Pauli, 3> kNonIdentityPaulis{Pauli::X, Pauli::Y, Pauli::Z};

constexpr int code(Pauli p) noexcept { return static_cast<int>(p); }

const Matrix2& pauli_matrix(Pauli p) noexcept;
char to_char(Pauli p) noexcept;
Pauli pauli_from_char(char c);

/// Normalized eigenvector of a non-identity Pauli for eigenvalue `sign` (+1/-1).
Eigen::Vector2cd eigenvector(Pauli p, int sign);

/// Rank-1 projector (I + sign * P) / 2.
Matrix2 eigenprojector(Pauli p, int sign);

class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> labels) : labels_(std::move(labels)) {}

  /// Parses a string over "IXYZ", e.g. "XIYIZ".
  static PauliString parse(std::string_view text);
  static PauliString identity(std::size_t n) { return PauliString(std::vector<Pauli>(n, Pauli::I)); }

  std::size_t size() const noexcept { return labels_.size(); }
  Pauli operator[](std::size_t i) const { return labels_[i]; }
  std::span<const Pauli> labels() const noexcept { return labels_; }
  bool has_identity() const noexcept;
  std::string str() const;

  auto operator<=>(const PauliString&) const = default;

 private:
  std::vector<Pauli> labels_;
};

/// Identity-free string assigning each qubit its preferred grouping label.
class SortingString {
 public:
  SortingString() = default;
  explicit SortingString(std::vector<Pauli> labels);

  static SortingString parse(std::string_view text);
  /// Uniform draw from {X,Y,Z}^n.
  static SortingString uniform(std::size_t n, Stream& rng);

  std::size_t size() const noexcept { return labels_.size(); }
  Pauli operator[](std::size_t i) const { return labels_[i]; }
  std::string str() const;

  auto operator<=>(const SortingString&) const = default;

 private:
  std::vector<Pauli> labels_;
};

/// Measured signs s in {+1,-1}^n, text form "+-++-".
class SignVector {
 public:
  SignVector() = default;
  explicit SignVector(std::vector<std::int8_t> signs);

  static SignVector parse(std::string_view text);

  std::size_t size() const noexcept { return signs_.size(); }
  int operator[](std::size_t i) const { return signs_[i]; }
  std::span<const std::int8_t> values() const noexcept { return signs_; }
  std::string str() const;

  auto operator<=>(const SignVector&) const = default;

 private:
  std::vector<std::int8_t> signs_;
};

/// Single-site preimage r^{-1}_a(q): {I, q} if q == a, else {q}.
struct Preimage {
  std::array<Pauli, 2> labels{};
  int count = 0;

  std::span<const Pauli> view() const noexcept { return {labels.data(), static_cast<std::size_t>(count)}; }
};

Preimage preimage(Pauli preferred, Pauli q);

/// Site-wise: g_i where p_i is I or g_i, otherwise p_i.
PauliString representative(const PauliString& p, const SortingString& g);

/// Number of sites where the representative takes the sorting label; the
/// group has 2^k members.
unsigned group_exponent(const PauliString& p, const SortingString& g);
double group_size(const PauliString& p, const SortingString& g);

/// All P with representative(P, g) == q. Test-scale only: n <= 12, at most
/// 2^16 members.
std::vector<PauliString> enumerate_group(const PauliString& q, const SortingString& g);

/// Qubit-wise commutation: at every site one label is I or both agree.
bool qwc(const PauliString& a, const PauliString& b);

/// Local factors M_i = I + s_i g_i where p_i is I or g_i, else s_i p_i.
ProductOperator snapshot_factors(const PauliString& p, const SortingString& g, const SignVector& s);

/// Pauli labels as a product operator.
ProductOperator as_product_operator(const PauliString& p);

/// Product of s_i over sites where p_i != I.
int sign_parity(const PauliString& p, const SignVector& s);

}  // namespace mpsdfe
