#include "mpsdfe/mpo_engine.hpp"

#include <cmath>

#include "chain.hpp"
#include "mpsdfe/errors.hpp"
#include "mpsdfe/parallel.hpp"
#include "sampling_util.hpp"
#include "snapshot_batch.hpp"

namespace mpsdfe {

namespace {

// sum_{out,in} M(in,out) A^{(out,in)}, the site matrix of tr[O M].
Matrix local_trace(const MpoSite& site, const Matrix2& m) {
  Matrix local = Matrix::Zero(site[0].rows(), site[0].cols());
  for (int out = 0; out < 2; ++out)
    for (int in = 0; in < 2; ++in)
      if (m(in, out) != Complex(0.0)) local += m(in, out) * site[mpo_slot(out, in)];
  return local;
}

void require_sampling_ready(const InducedGamma& gamma) {
  if (!gamma.canonical) throw ValidationError("MPO sampler: induced chain must be canonicalized");
  detail::require(gamma.size() >= 1, "MPO sampler: empty chain");
}

double real_chi(Complex z, const char* what) {
  if (std::abs(z.imag()) > 1e-10 * std::max(1.0, std::abs(z.real())))
    throw NumericalError(std::string(what) + ": chi has imaginary part " + std::to_string(z.imag()) +
                         " (is the MPO Hermitian?)");
  return z.real();
}

}  // namespace

InducedGamma induce_gamma(const Mpo& mpo) {
  if (!mpo.hermitian()) throw ValidationError("MPO target must be flagged Hermitian");
  const double scale = 1.0 / std::sqrt(2.0);
  InducedGamma out;
  out.sites.reserve(mpo.size());
  for (const auto& site : mpo.sites()) {
    GammaSite g;
    for (Pauli p : kPaulis) g[code(p)] = scale * local_trace(site, pauli_matrix(p));
    out.sites.push_back(std::move(g));
  }
  return out;
}

InducedGamma canonicalize(const InducedGamma& gamma) {
  InducedGamma out = gamma;
  detail::orthonormalize_right<4>(out.sites, OrthoMethod::Qr, nullptr);
  out.canonical = true;
  return out;
}

InducedGamma prepare_mpo(const Mpo& mpo) { return canonicalize(induce_gamma(mpo)); }

double normalization(const InducedGamma& gamma) {
  Matrix h = Matrix::Ones(1, 1);
  for (const auto& site : gamma.sites) {
    Matrix next = site[0].adjoint() * h * site[0];
    for (int q = 1; q < 4; ++q) next.noalias() += site[q].adjoint() * h * site[q];
    h = std::move(next);
  }
  return h(0, 0).real();
}

double gamma_residual(const InducedGamma& gamma) { return detail::right_residual<4>(gamma.sites); }

double chi_of_mpo(const InducedGamma& gamma, const PauliString& p) {
  detail::require(p.size() == gamma.size(), "chi_of_mpo: length mismatch");
  RowVector v = RowVector::Ones(1);
  for (std::size_t i = 0; i < p.size(); ++i) v = v * gamma.sites[i][code(p[i])];
  return real_chi(v(0), "chi_of_mpo");
}

SampledSetting sample_setting_mpo(const InducedGamma& gamma, Stream& rng) {
  require_sampling_ready(gamma);
  const std::size_t n = gamma.size();
  SampledSetting out;
  out.stream_key = rng.key();
  out.conditionals.resize(n);
  std::vector<Pauli> labels(n);
  RowVector v = RowVector::Ones(1);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::array<RowVector, 4> next;
    std::array<double, 4> omega{};
    for (int q = 0; q < 4; ++q) {
      next[q] = v * gamma.sites[i][q];
      omega[q] = next[q].squaredNorm();
    }
    detail::clamp_weights(omega, "MPO sampler");
    const double total = omega[0] + omega[1] + omega[2] + omega[3];
    if (i == 0) z = total;
    const int chosen = draw_categorical(omega, rng.uniform());
    for (int q = 0; q < 4; ++q) out.conditionals[i][q] = omega[q] / total;
    labels[i] = kPaulis[chosen];
    v = std::move(next[chosen]);
  }
  out.chi = real_chi(v(0), "MPO sampler");
  out.normalization = z;
  out.weight = out.chi * out.chi / z;
  out.pauli = PauliString(std::move(labels));
  return out;
}

std::vector<SampledSetting> sample_settings_mpo(const InducedGamma& gamma, std::size_t count, std::uint64_t seed,
                                                unsigned workers) {
  require_sampling_ready(gamma);
  std::vector<SampledSetting> settings(count);
  parallel_for(count, workers, [&](std::size_t j) {
    Stream rng(stream_key(seed, Phase::Settings, j));
    settings[j] = sample_setting_mpo(gamma, rng);
    settings[j].index = j;
  });
  return settings;
}

double group_weight_mpo(const InducedGamma& gamma, const PauliString& rep, const SortingString& g) {
  const std::size_t n = gamma.size();
  detail::require(rep.size() == n && g.size() == n, "group_weight_mpo: length mismatch");
  Matrix h = Matrix::Ones(1, 1);
  for (std::size_t i = 0; i < n; ++i) {
    Matrix next;
    for (Pauli q : preimage(g[i], rep[i]).view()) {
      const Matrix& m = gamma.sites[i][code(q)];
      if (next.size() == 0) next = m.adjoint() * h * m;
      else next.noalias() += m.adjoint() * h * m;
    }
    h = std::move(next);
  }
  const double mass = h(0, 0).real();
  if (mass < -1e-10) throw NumericalError("group_weight_mpo: negative group mass");
  return std::max(mass, 0.0) / normalization(gamma);
}

GroupedSetting make_grouped_setting_mpo(const InducedGamma& gamma, SampledSetting latent, SortingString g,
                                        const PrecisionParams& params, std::optional<std::uint64_t> cap) {
  detail::require(g.size() == latent.pauli.size(), "sorting string length mismatch");
  GroupedSetting out;
  out.representative = representative(latent.pauli, g);
  out.group_exponent = group_exponent(latent.pauli, g);
  out.group_weight = group_weight_mpo(gamma, out.representative, g);
  out.latent = std::move(latent);
  out.sorting = std::move(g);
  out.budget = shot_budget_mpo(out, params, std::ldexp(1.0, static_cast<int>(gamma.size())), cap);
  return out;
}

ShotBudget shot_budget_mpo(const GroupedSetting& grouped, const PrecisionParams& params, double dimension,
                           std::optional<std::uint64_t> cap) {
  return shot_budget(grouped, params, dimension, cap);
}

double snapshot_mpo(const Mpo& mpo, const GroupedSetting& grouped, const SignVector& signs) {
  detail::require(signs.size() == mpo.size(), "snapshot: sign vector length mismatch");
  const auto op = snapshot_factors(grouped.latent.pauli, grouped.sorting, signs);
  const double value = detail::real_part_checked(expectation_product_mpo(mpo, op), "snapshot");
  return value / (grouped.group_weight * std::ldexp(1.0, static_cast<int>(mpo.size())));
}

std::vector<double> snapshot_values_mpo(const Mpo& mpo, const GroupedSetting& grouped,
                                        const OutcomeHistogram& hist) {
  const std::size_t n = mpo.size();
  for (const auto& o : hist) detail::require(o.signs.size() == n, "snapshot: sign vector length mismatch");
  const auto table = detail::snapshot_factor_table(grouped.latent.pauli, grouped.sorting);
  std::vector<std::array<Matrix, 2>> locals(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < 2; ++k) locals[i][k] = local_trace(mpo.site(i), table[i][k]);
  const auto pick = [&](std::size_t site, int sign) -> const Matrix& { return locals[site][sign > 0 ? 0 : 1]; };
  const Matrix one = Matrix::Ones(1, 1);
  const auto raw = detail::batch_expectations(
      hist, n, one, one, [&](const Matrix& env, std::size_t site, int sign) -> Matrix { return env * pick(site, sign); },
      [&](const Matrix& env, std::size_t site, int sign) -> Matrix { return pick(site, sign) * env; },
      [](const Matrix& l, const Matrix& r) { return (l * r)(0, 0); });
  const double scale = 1.0 / (grouped.group_weight * std::ldexp(1.0, static_cast<int>(n)));
  std::vector<double> out(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) out[j] = detail::real_part_checked(raw[j], "snapshot") * scale;
  return out;
}

double snapshot_mean_mpo(const Mpo& mpo, const GroupedSetting& grouped, const OutcomeHistogram& hist) {
  const auto values = snapshot_values_mpo(mpo, grouped, hist);
  double sum = 0.0;
  std::uint64_t shots = 0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    sum += static_cast<double>(hist[j].count) * values[j];
    shots += hist[j].count;
  }
  detail::require(shots > 0, "snapshot_mean: empty histogram");
  return sum / static_cast<double>(shots);
}

}  // namespace mpsdfe
