#include "mpsdfe/grouping.hpp"

#include <cmath>

#include "chain.hpp"
#include "mpsdfe/errors.hpp"
#include "mpsdfe/oracle.hpp"
#include "snapshot_batch.hpp"

namespace mpsdfe {

namespace {

struct Entry {
  int in;   // column index e (ket)
  int out;  // row index f (bra)
  Complex coef;
};

// Nonzero entries P(f, e) of a single-qubit Pauli.
std::array<Entry, 2> entries(Pauli p) {
  const Complex i(0.0, 1.0);
  switch (p) {
    case Pauli::I: return {{{0, 0, 1.0}, {1, 1, 1.0}}};
    case Pauli::X: return {{{1, 0, 1.0}, {0, 1, 1.0}}};
    case Pauli::Y: return {{{1, 0, -i}, {0, 1, i}}};
    case Pauli::Z: return {{{0, 0, 1.0}, {1, 1, -1.0}}};
  }
  return {};
}

// Contracts the leading index of `t` (viewed as lead x rest) with `a`
// (lead x new), putting the new index last: result is rest x new.
Matrix rotate(const Matrix& t, Index lead, const Matrix& a) {
  const Eigen::Map<const Matrix> view(t.data(), lead, t.size() / lead);
  return view.transpose() * a;
}

}  // namespace

double GroupedSetting::group_size() const { return std::ldexp(1.0, static_cast<int>(group_exponent)); }

double group_weight(const Mps& mps, const PauliString& rep, const SortingString& g) {
  const std::size_t n = mps.size();
  detail::require(rep.size() == n && g.size() == n, "group_weight: length mismatch");
  // G holds four bond indices (ket, bra, ket, bra) flattened column-major.
  Matrix gt = Matrix::Ones(1, 1);
  Index lead = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = mps.site(i);
    const std::array<Matrix, 2> conj{a[0].conjugate(), a[1].conjugate()};
    const Index next = a[0].cols();
    const std::array<Matrix, 2> first{rotate(gt, lead, a[0]), rotate(gt, lead, a[1])};
    Matrix acc;
    for (Pauli p : preimage(g[i], rep[i]).view()) {
      const auto es = entries(p);
      Matrix w = es[0].coef * rotate(first[es[0].in], lead, conj[es[0].out]);
      w.noalias() += es[1].coef * rotate(first[es[1].in], lead, conj[es[1].out]);
      const std::array<Matrix, 2> third{rotate(w, lead, a[0]), rotate(w, lead, a[1])};
      Matrix t = es[0].coef * rotate(third[es[0].in], lead, conj[es[0].out]);
      t.noalias() += es[1].coef * rotate(third[es[1].in], lead, conj[es[1].out]);
      if (acc.size() == 0) acc = std::move(t);
      else acc += t;
    }
    gt = std::move(acc);
    lead = next;
  }
  const double value = detail::real_part_checked(gt(0, 0), "group_weight");
  const double weight = std::ldexp(value, -static_cast<int>(n));
  if (weight < -1e-12) throw NumericalError("group_weight: negative group weight " + std::to_string(weight));
  return std::max(weight, 0.0);
}

ShotBudget shot_budget(const GroupedSetting& grouped, const PrecisionParams& params, double dimension,
                       std::optional<std::uint64_t> cap) {
  return hoeffding_shots(grouped.group_size(), grouped.latent.normalization, grouped.group_weight, dimension,
                         params, cap);
}

GroupedSetting make_grouped_setting(const Mps& mps, SampledSetting latent, SortingString g,
                                    const PrecisionParams& params, std::optional<std::uint64_t> cap) {
  detail::require(g.size() == latent.pauli.size(), "sorting string length mismatch");
  GroupedSetting out;
  out.representative = representative(latent.pauli, g);
  out.group_exponent = group_exponent(latent.pauli, g);
  out.group_weight = group_weight(mps, out.representative, g);
  out.latent = std::move(latent);
  out.sorting = std::move(g);
  out.budget = shot_budget(out, params, std::ldexp(1.0, static_cast<int>(mps.size())), cap);
  return out;
}

double snapshot(const Mps& mps, const GroupedSetting& grouped, const SignVector& signs) {
  detail::require(signs.size() == mps.size(), "snapshot: sign vector length mismatch");
  const auto op = snapshot_factors(grouped.latent.pauli, grouped.sorting, signs);
  const double value = detail::real_part_checked(expectation_product(mps, op), "snapshot");
  return value / (grouped.group_weight * std::ldexp(1.0, static_cast<int>(mps.size())));
}

std::vector<double> snapshot_values(const Mps& mps, const GroupedSetting& grouped, const OutcomeHistogram& hist) {
  const std::size_t n = mps.size();
  for (const auto& o : hist) detail::require(o.signs.size() == n, "snapshot: sign vector length mismatch");
  const auto table = detail::snapshot_factor_table(grouped.latent.pauli, grouped.sorting);
  const auto pick = [&](std::size_t site, int sign) -> const Matrix2& { return table[site][sign > 0 ? 0 : 1]; };
  const Matrix one = Matrix::Ones(1, 1);
  const auto raw = detail::batch_expectations(
      hist, n, one, one,
      [&](const Matrix& env, std::size_t site, int sign) {
        return detail::left_transfer(env, mps.site(site), pick(site, sign));
      },
      [&](const Matrix& env, std::size_t site, int sign) {
        return detail::right_transfer(env, mps.site(site), pick(site, sign));
      },
      [](const Matrix& l, const Matrix& r) { return l.cwiseProduct(r).sum(); });
  const double scale = 1.0 / (grouped.group_weight * std::ldexp(1.0, static_cast<int>(n)));
  std::vector<double> out(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) out[j] = detail::real_part_checked(raw[j], "snapshot") * scale;
  return out;
}

double snapshot_mean(const Mps& mps, const GroupedSetting& grouped, const OutcomeHistogram& hist) {
  const auto values = snapshot_values(mps, grouped, hist);
  double sum = 0.0;
  std::uint64_t shots = 0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    sum += static_cast<double>(hist[j].count) * values[j];
    shots += hist[j].count;
  }
  detail::require(shots > 0, "snapshot_mean: empty histogram");
  return sum / static_cast<double>(shots);
}

double ideal_group_estimator(const Mps& mps, const DenseOperator& sigma, const GroupedSetting& grouped) {
  double sum = 0.0;
  for (const auto& p : enumerate_group(grouped.representative, grouped.sorting))
    sum += chi_of(mps, p) * dense_chi(sigma, p);
  return sum / grouped.group_weight;
}

namespace detail {

std::vector<std::array<Matrix2, 2>> snapshot_factor_table(const PauliString& latent, const SortingString& g) {
  require(latent.size() == g.size(), "snapshot: length mismatch");
  std::vector<std::array<Matrix2, 2>> table(latent.size());
  for (std::size_t i = 0; i < latent.size(); ++i) {
    const bool grouped = latent[i] == Pauli::I || latent[i] == g[i];
    const Matrix2& label = pauli_matrix(grouped ? g[i] : latent[i]);
    const Matrix2 base = grouped ? Matrix2(Matrix2::Identity()) : Matrix2(Matrix2::Zero());
    table[i][0] = base + label;
    table[i][1] = base - label;
  }
  return table;
}

double real_part_checked(Complex z, const char* what) {
  if (std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z.real())))
    throw NumericalError(std::string(what) + ": value has imaginary part " + std::to_string(z.imag()));
  return z.real();
}

}  // namespace detail

}  // namespace mpsdfe
