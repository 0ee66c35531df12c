#include "mpsdfe/oracle.hpp"

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "mpsdfe/errors.hpp"

namespace mpsdfe {

namespace {

void require_small(std::size_t n, std::size_t cap = kOracleMaxQubits) {
  detail::require(n >= 1 && n <= cap, "oracle: n must lie in [1, " + std::to_string(cap) + "]");
}

std::size_t qubits_of(const DenseOperator& a) {
  detail::require(a.rows() == a.cols() && a.rows() >= 2, "oracle: operator must be square of size 2^n");
  std::size_t n = 0;
  while ((Index{1} << n) < a.rows()) ++n;
  detail::require((Index{1} << n) == a.rows(), "oracle: operator size is not a power of two");
  return n;
}

PauliString pauli_from_index(std::size_t index, std::size_t n) {
  std::vector<Pauli> labels(n);
  for (std::size_t i = n; i-- > 0;) {
    labels[i] = kPaulis[index & 3];
    index >>= 2;
  }
  return PauliString(std::move(labels));
}

}  // namespace

DenseState dense_from_mps(const Mps& mps) {
  require_small(mps.size());
  Matrix acc = Matrix::Ones(1, 1);  // rows: basis prefixes, cols: right bond
  for (const auto& site : mps.sites()) {
    Matrix next(acc.rows() * 2, site[0].cols());
    for (Index r = 0; r < acc.rows(); ++r)
      for (int x = 0; x < 2; ++x) next.row(2 * r + x) = acc.row(r) * site[x];
    acc = std::move(next);
  }
  return acc.col(0);
}

DenseOperator dense_from_mpo(const Mpo& mpo) {
  require_small(mpo.size());
  Index dim = 1;
  std::vector<RowVector> blocks{RowVector::Ones(1)};  // (out, in) prefix -> boundary row
  for (const auto& site : mpo.sites()) {
    const Index next_dim = dim * 2;
    std::vector<RowVector> next(static_cast<std::size_t>(next_dim * next_dim));
    for (Index out = 0; out < dim; ++out)
      for (Index in = 0; in < dim; ++in)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            next[static_cast<std::size_t>((2 * out + a) * next_dim + 2 * in + b)] =
                blocks[static_cast<std::size_t>(out * dim + in)] * site[mpo_slot(a, b)];
    blocks = std::move(next);
    dim = next_dim;
  }
  DenseOperator op(dim, dim);
  for (Index out = 0; out < dim; ++out)
    for (Index in = 0; in < dim; ++in) op(out, in) = blocks[static_cast<std::size_t>(out * dim + in)](0);
  return op;
}

DenseOperator dense_from_product(const ProductOperator& op) {
  require_small(op.size(), 12);
  Matrix acc = Matrix::Ones(1, 1);
  for (const auto& f : op.factors) acc = Eigen::kroneckerProduct(acc, Matrix(f)).eval();
  return acc;
}

DenseOperator dense_pauli(const PauliString& p) { return dense_from_product(as_product_operator(p)); }

DenseOperator density(const DenseState& psi) { return psi * psi.adjoint(); }

DenseOperator depolarize(const DenseOperator& rho, double lambda) {
  detail::require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0, 1]");
  const double d = static_cast<double>(rho.rows());
  return (1.0 - lambda) * rho + (lambda / d) * DenseOperator::Identity(rho.rows(), rho.cols());
}

double dense_chi(const DenseOperator& a, const PauliString& p) {
  const std::size_t n = qubits_of(a);
  detail::require(p.size() == n, "dense_chi: length mismatch");
  require_small(n, 12);
  // P|x> = phase(x) |x ^ flip>, so tr(A P) = sum_x A(x, x^flip) P(x^flip, x).
  std::size_t flip = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (p[i] == Pauli::X || p[i] == Pauli::Y) flip |= std::size_t{1} << (n - 1 - i);
  Complex sum = 0.0;
  const std::size_t d = std::size_t{1} << n;
  for (std::size_t x = 0; x < d; ++x) {
    Complex phase = 1.0;
    const std::size_t y = x ^ flip;
    for (std::size_t i = 0; i < n; ++i) {
      const int xb = static_cast<int>((x >> (n - 1 - i)) & 1);
      const int yb = static_cast<int>((y >> (n - 1 - i)) & 1);
      phase *= pauli_matrix(p[i])(yb, xb);
    }
    sum += a(static_cast<Index>(x), static_cast<Index>(y)) * phase;
  }
  return sum.real() / std::sqrt(static_cast<double>(d));
}

std::vector<PauliWeight> full_pauli_weights(const DenseOperator& a) {
  const std::size_t n = qubits_of(a);
  require_small(n);
  const std::size_t count = std::size_t{1} << (2 * n);
  std::vector<PauliWeight> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k].pauli = pauli_from_index(k, n);
    out[k].chi = dense_chi(a, out[k].pauli);
    out[k].chi2 = out[k].chi * out[k].chi;
  }
  return out;
}

FidelityCheck exact_fidelity(const DenseOperator& rho, const DenseOperator& sigma) {
  detail::require(rho.rows() == sigma.rows(), "exact_fidelity: dimension mismatch");
  require_small(qubits_of(rho));
  FidelityCheck out;
  out.direct = (rho * sigma).trace().real();
  const auto wr = full_pauli_weights(rho);
  const auto ws = full_pauli_weights(sigma);
  for (std::size_t k = 0; k < wr.size(); ++k) out.pauli_sum += wr[k].chi * ws[k].chi;
  return out;
}

GroupStatistics exact_group_statistics(const DenseOperator& target, const SortingString& g,
                                       const PauliString& representative, const DenseOperator* sigma,
                                       const PrecisionParams* params) {
  const std::size_t n = qubits_of(target);
  require_small(n);
  detail::require(g.size() == n && representative.size() == n, "exact_group_statistics: length mismatch");
  const double z = (target * target).trace().real();
  detail::require(z > 0.0, "exact_group_statistics: zero target");
  GroupStatistics out;
  double mass = 0.0;
  double overlap = 0.0;
  const auto members = enumerate_group(representative, g);
  for (const auto& p : members) {
    const double chi = dense_chi(target, p);
    mass += chi * chi;
    out.l1_mass += std::abs(chi);
    if (sigma) overlap += chi * dense_chi(*sigma, p);
  }
  out.group_size = members.size();
  out.group_weight = mass / z;
  if (sigma) out.ideal_estimator = overlap / out.group_weight;
  if (params) {
    // Exact l1 rule, with chi normalized by sqrt(Z) so it covers observables too.
    const double d = static_cast<double>(target.rows());
    const double l1 = out.l1_mass / std::sqrt(z);
    const double raw = 2.0 * l1 * l1 /
                       (out.group_weight * out.group_weight * d * static_cast<double>(params->settings) *
                        params->eps * params->eps) *
                       std::log(2.0 / params->delta);
    out.l1_shots = std::max<std::uint64_t>(1, ceil_count(raw));
  }
  return out;
}

std::vector<SignVector> all_sign_vectors(std::size_t n) {
  require_small(n, 12);
  std::vector<SignVector> out;
  const std::size_t count = std::size_t{1} << n;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<std::int8_t> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = (k >> (n - 1 - i)) & 1 ? std::int8_t{1} : std::int8_t{-1};
    out.emplace_back(std::move(s));
  }
  return out;
}

std::vector<double> exact_outcome_probabilities(const DenseOperator& sigma, const PauliString& setting) {
  const std::size_t n = qubits_of(sigma);
  require_small(n);
  detail::require(setting.size() == n, "exact_outcome_probabilities: length mismatch");
  std::vector<double> out;
  for (const auto& s : all_sign_vectors(n)) {
    ProductOperator proj;
    for (std::size_t i = 0; i < n; ++i)
      proj.factors.push_back(eigenprojector(setting[i] == Pauli::I ? Pauli::Z : setting[i], s[i]));
    out.push_back((sigma * dense_from_product(proj)).trace().real());
  }
  return out;
}

double exact_snapshot_expectation(const DenseOperator& target, const DenseOperator& sigma,
                                  const GroupedSetting& grouped) {
  const std::size_t n = qubits_of(target);
  require_small(n);
  const auto probs = exact_outcome_probabilities(sigma, grouped.representative);
  const auto signs = all_sign_vectors(n);
  const double d = static_cast<double>(target.rows());
  double sum = 0.0;
  for (std::size_t k = 0; k < signs.size(); ++k) {
    const auto m = dense_from_product(snapshot_factors(grouped.latent.pauli, grouped.sorting, signs[k]));
    sum += probs[k] * (target * m).trace().real() / (grouped.group_weight * d);
  }
  return sum;
}

}  // namespace mpsdfe
