#include "mpsdfe/pauli.hpp"

#include <cmath>

#include "mpsdfe/errors.hpp"

namespace mpsdfe {

namespace {

const std::array<Matrix2, 4>& pauli_table() {
  static const std::array<Matrix2, 4> table = [] {
    const Complex i(0.0, 1.0);
    std::array<Matrix2, 4> t;
    t[0] << 1, 0, 0, 1;
    t[1] << 0, 1, 1, 0;
    t[2] << 0, -i, i, 0;
    t[3] << 1, 0, 0, -1;
    return t;
  }();
  return table;
}

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                          std::to_string(b) + ")");
  }
}

}  // namespace

const Matrix2& pauli_matrix(Pauli p) noexcept { return pauli_table()[code(p)]; }

char to_char(Pauli p) noexcept { return "IXYZ"[code(p)]; }

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw ValidationError(std::string("invalid Pauli label '") + c + "'");
  }
}

Eigen::Vector2cd eigenvector(Pauli p, int sign) {
  detail::require(sign == 1 || sign == -1, "eigenvector: sign must be +1 or -1");
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  Eigen::Vector2cd v;
  switch (p) {
    case Pauli::X: v << r, sign * r; break;
    case Pauli::Y: v << r, static_cast<double>(sign) * i * r; break;
    case Pauli::Z:
      if (sign > 0) v << 1, 0;
      else v << 0, 1;
      break;
    case Pauli::I: throw ValidationError("eigenvector: identity has no distinguished eigenbasis");
  }
  return v;
}

Matrix2 eigenprojector(Pauli p, int sign) {
  detail::require(p != Pauli::I, "eigenprojector: identity label");
  return 0.5 * (Matrix2::Identity() + static_cast<double>(sign) * pauli_matrix(p));
}

PauliString PauliString::parse(std::string_view text) {
  std::vector<Pauli> labels;
  labels.reserve(text.size());
  for (char c : text) labels.push_back(pauli_from_char(c));
  return PauliString(std::move(labels));
}

bool PauliString::has_identity() const noexcept {
  for (Pauli p : labels_)
    if (p == Pauli::I) return true;
  return false;
}

std::string PauliString::str() const {
  std::string out;
  out.reserve(labels_.size());
  for (Pauli p : labels_) out.push_back(to_char(p));
  return out;
}

SortingString::SortingString(std::vector<Pauli> labels) : labels_(std::move(labels)) {
  for (Pauli p : labels_) detail::require(p != Pauli::I, "sorting string must not contain I");
}

SortingString SortingString::parse(std::string_view text) {
  const auto parsed = PauliString::parse(text);
  return SortingString(std::vector<Pauli>(parsed.labels().begin(), parsed.labels().end()));
}

SortingString SortingString::uniform(std::size_t n, Stream& rng) {
  std::vector<Pauli> labels(n);
  for (auto& p : labels) p = kNonIdentityPaulis[static_cast<std::size_t>(rng.uniform() * 3.0)];
  return SortingString(std::move(labels));
}

std::string SortingString::str() const {
  std::string out;
  for (Pauli p : labels_) out.push_back(to_char(p));
  return out;
}

SignVector::SignVector(std::vector<std::int8_t> signs) : signs_(std::move(signs)) {
  for (auto s : signs_) detail::require(s == 1 || s == -1, "sign vector entries must be +1 or -1");
}

SignVector SignVector::parse(std::string_view text) {
  std::vector<std::int8_t> signs;
  signs.reserve(text.size());
  for (char c : text) {
    if (c == '+') signs.push_back(1);
    else if (c == '-') signs.push_back(-1);
    else throw ValidationError(std::string("invalid sign character '") + c + "'");
  }
  return SignVector(std::move(signs));
}

std::string SignVector::str() const {
  std::string out;
  out.reserve(signs_.size());
  for (auto s : signs_) out.push_back(s > 0 ? '+' : '-');
  return out;
}

Preimage preimage(Pauli preferred, Pauli q) {
  detail::require(preferred != Pauli::I && q != Pauli::I, "preimage: labels must be non-identity");
  if (q == preferred) return Preimage{{Pauli::I, q}, 2};
  return Preimage{{q, q}, 1};
}

PauliString representative(const PauliString& p, const SortingString& g) {
  require_same_length(p.size(), g.size(), "representative");
  std::vector<Pauli> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = (p[i] == Pauli::I || p[i] == g[i]) ? g[i] : p[i];
  return PauliString(std::move(out));
}

unsigned group_exponent(const PauliString& p, const SortingString& g) {
  require_same_length(p.size(), g.size(), "group_size");
  unsigned k = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] == Pauli::I || p[i] == g[i]) ++k;
  return k;
}

double group_size(const PauliString& p, const SortingString& g) {
  return std::ldexp(1.0, static_cast<int>(group_exponent(p, g)));
}

std::vector<PauliString> enumerate_group(const PauliString& q, const SortingString& g) {
  require_same_length(q.size(), g.size(), "enumerate_group");
  detail::require(!q.has_identity(), "enumerate_group: representative must be identity-free");
  detail::require(q.size() <= 12, "enumerate_group: limited to n <= 12");
  const unsigned k = group_exponent(q, g);
  detail::require(k <= 16, "enumerate_group: group larger than 2^16");

  std::vector<std::size_t> free_sites;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i] == g[i]) free_sites.push_back(i);

  std::vector<PauliString> out;
  out.reserve(std::size_t{1} << k);
  std::vector<Pauli> labels(q.labels().begin(), q.labels().end());
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    for (std::size_t j = 0; j < free_sites.size(); ++j)
      labels[free_sites[j]] = ((mask >> j) & 1u) ? q[free_sites[j]] : Pauli::I;
    out.emplace_back(labels);
  }
  return out;
}

bool qwc(const PauliString& a, const PauliString& b) {
  require_same_length(a.size(), b.size(), "qwc");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != Pauli::I && b[i] != Pauli::I && a[i] != b[i]) return false;
  return true;
}

ProductOperator snapshot_factors(const PauliString& p, const SortingString& g, const SignVector& s) {
  require_same_length(p.size(), g.size(), "snapshot_factors");
  require_same_length(p.size(), s.size(), "snapshot_factors");
  ProductOperator op;
  op.factors.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double si = s[i];
    if (p[i] == Pauli::I || p[i] == g[i]) op.factors.push_back(Matrix2::Identity() + si * pauli_matrix(g[i]));
    else op.factors.push_back(si * pauli_matrix(p[i]));
  }
  return op;
}

ProductOperator as_product_operator(const PauliString& p) {
  ProductOperator op;
  op.factors.reserve(p.size());
  for (Pauli l : p.labels()) op.factors.push_back(pauli_matrix(l));
  return op;
}

int sign_parity(const PauliString& p, const SignVector& s) {
  require_same_length(p.size(), s.size(), "sign_parity");
  int parity = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != Pauli::I) parity *= s[i];
  return parity;
}

}  // namespace mpsdfe
