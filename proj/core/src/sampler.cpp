#include "mpsdfe/sampler.hpp"

#include <cmath>

#include "chain.hpp"
#include "mpsdfe/errors.hpp"
#include "mpsdfe/parallel.hpp"
#include "sampling_util.hpp"

namespace mpsdfe {

namespace {

void require_sampling_ready(const Mps& mps) {
  if (mps.canonical_form() != CanonicalForm::RightCanonicalCenterFirst)
    throw ValidationError("sampler: MPS must be right-canonical with the center on the first site");
  const auto& first = mps.site(0);
  const double norm2 = first[0].squaredNorm() + first[1].squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-10)
    throw ValidationError("sampler: MPS must be normalized (norm^2 = " + std::to_string(norm2) + ")");
}

// tr(B^2) for a message that is Hermitian up to roundoff.
double trace_square(const Matrix& b) { return b.cwiseProduct(b.transpose()).sum().real(); }

double real_scalar(const Matrix& message, const char* what) {
  const Complex z = message(0, 0);
  if (std::abs(z.imag()) > 1e-10 * std::max(1.0, std::abs(z.real())))
    throw NumericalError(std::string(what) + ": characteristic value has imaginary part " +
                         std::to_string(z.imag()));
  return z.real();
}

}  // namespace

int draw_categorical(const std::array<double, 4>& weights, double uniform) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw NumericalError("categorical draw: all weights are zero");
  const double target = uniform * total;
  double cumulative = 0.0;
  int last_positive = -1;
  for (int k = 0; k < 4; ++k) {
    if (!(weights[k] > 0.0)) continue;
    last_positive = k;
    cumulative += weights[k];
    if (target < cumulative) return k;
  }
  return last_positive;
}

std::array<Matrix, 4> candidate_messages(const Mps& mps, const ForwardMessage& message) {
  detail::require(message.site < mps.size(), "candidate_messages: message already covers every site");
  return detail::pauli_transfers(message.value, mps.site(message.site));
}

ForwardMessage advance(const Mps& mps, const ForwardMessage& message, Pauli label) {
  auto candidates = candidate_messages(mps, message);
  std::vector<Pauli> prefix(message.prefix.labels().begin(), message.prefix.labels().end());
  prefix.push_back(label);
  return ForwardMessage{message.site + 1, std::move(candidates[code(label)]), PauliString(std::move(prefix))};
}

namespace {

// One forward sweep; choose(site, beta) picks the label index at each site.
template <class Choose>
SampledSetting sweep(const Mps& mps, Choose&& choose) {
  require_sampling_ready(mps);
  const std::size_t n = mps.size();
  SampledSetting out;
  out.conditionals.resize(n);
  std::vector<Pauli> labels(n);

  Matrix message = Matrix::Ones(1, 1);
  for (std::size_t i = 0; i < n; ++i) {
    auto candidates = detail::pauli_transfers(message, mps.site(i));
    std::array<double, 4> beta{};
    for (int k = 0; k < 4; ++k) beta[k] = trace_square(candidates[k]);
    detail::clamp_weights(beta, "sampler");
    const int chosen = choose(i, beta);
    const double total = beta[0] + beta[1] + beta[2] + beta[3];
    for (int k = 0; k < 4; ++k) out.conditionals[i][k] = beta[k] / total;
    labels[i] = kPaulis[chosen];
    if (beta[chosen] == 0.0) {
      // Only reachable along a forced path: the string lies outside the support.
      for (std::size_t j = i + 1; j < n; ++j) out.conditionals[j] = {};
      out.pauli = PauliString(std::move(labels));
      return out;
    }
    message = std::move(candidates[chosen]);
  }

  const double scale = std::exp2(-0.5 * static_cast<double>(n));
  out.chi = real_scalar(message, "sampler") * scale;
  out.weight = out.chi * out.chi;
  out.pauli = PauliString(std::move(labels));
  return out;
}

}  // namespace

SampledSetting sample_setting(const Mps& mps, Stream& rng) {
  SampledSetting out = sweep(mps, [&](std::size_t, const std::array<double, 4>& beta) {
    return draw_categorical(beta, rng.uniform());
  });
  out.stream_key = rng.key();
  return out;
}

std::vector<std::array<double, 4>> conditionals_along(const Mps& mps, const PauliString& p) {
  detail::require(p.size() == mps.size(), "conditionals_along: length mismatch");
  return sweep(mps, [&](std::size_t i, const std::array<double, 4>&) { return code(p[i]); }).conditionals;
}

std::vector<SampledSetting> sample_settings(const Mps& mps, std::size_t count, std::uint64_t seed,
                                            unsigned workers) {
  require_sampling_ready(mps);
  std::vector<SampledSetting> settings(count);
  parallel_for(count, workers, [&](std::size_t j) {
    Stream rng(stream_key(seed, Phase::Settings, j));
    settings[j] = sample_setting(mps, rng);
    settings[j].index = j;
  });
  return settings;
}

double chi_of(const Mps& mps, const PauliString& p) {
  detail::require(p.size() == mps.size(), "chi_of: length mismatch");
  Matrix message = Matrix::Ones(1, 1);
  for (std::size_t i = 0; i < mps.size(); ++i) {
    auto candidates = detail::pauli_transfers(message, mps.site(i));
    message = std::move(candidates[code(p[i])]);
  }
  return real_scalar(message, "chi_of") * std::exp2(-0.5 * static_cast<double>(mps.size()));
}

double marginal_weight(const Mps& mps, const PauliString& prefix) {
  require_sampling_ready(mps);
  detail::require(prefix.size() <= mps.size(), "marginal_weight: prefix longer than the chain");
  Matrix message = Matrix::Ones(1, 1);
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    auto candidates = detail::pauli_transfers(message, mps.site(i));
    message = std::move(candidates[code(prefix[i])]);
  }
  return std::exp2(-static_cast<double>(prefix.size())) * trace_square(message);
}

}  // namespace mpsdfe
