#include "mpsdfe/device.hpp"

#include <cmath>
#include <random>

#include "mpsdfe/errors.hpp"
#include "mpsdfe/random.hpp"

namespace mpsdfe {

namespace {

// Site slices rotated into the eigenbasis of the measured label:
// slot 0 is the +1 outcome, slot 1 the -1 outcome.
std::vector<std::array<Matrix, 2>> rotated_slices(const Mps& mps, const PauliString& setting) {
  detail::require(setting.size() == mps.size(), "measure: setting length does not match the target");
  std::vector<std::array<Matrix, 2>> out(mps.size());
  for (std::size_t i = 0; i < mps.size(); ++i) {
    const Pauli label = setting[i] == Pauli::I ? Pauli::Z : setting[i];
    const auto& a = mps.site(i);
    for (int k = 0; k < 2; ++k) {
      const Eigen::Vector2cd v = eigenvector(label, k == 0 ? 1 : -1);
      out[i][k] = std::conj(v(0)) * a[0] + std::conj(v(1)) * a[1];
    }
  }
  return out;
}

SignVector uniform_signs(std::size_t n, Stream& rng) {
  std::vector<std::int8_t> s(n);
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) bits = rng();
    s[i] = (bits >> (i % 64)) & 1 ? std::int8_t{-1} : std::int8_t{1};
  }
  return SignVector(std::move(s));
}

std::uint64_t binomial(std::uint64_t trials, double p, Stream& rng) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  if (trials <= 16) {
    std::uint64_t k = 0;
    for (std::uint64_t t = 0; t < trials; ++t) k += rng.uniform() < p ? 1 : 0;
    return k;
  }
  std::binomial_distribution<std::uint64_t> dist(trials, p);
  return dist(rng);
}

// Depth-first split of `count` shots over the outcome tree; children are
// visited '-' first so leaves come out in SignVector order.
class TreeSplitter {
 public:
  TreeSplitter(const std::vector<std::array<Matrix, 2>>* slices, std::size_t n, Stream& rng)
      : slices_(slices), n_(n), rng_(rng), prefix_(n) {}

  OutcomeHistogram run(std::uint64_t count) {
    out_.clear();
    descend(0, RowVector::Ones(1), count);
    return std::move(out_);
  }

 private:
  void descend(std::size_t site, const RowVector& env, std::uint64_t count) {
    if (count == 0) return;
    if (site == n_) {
      out_.push_back({SignVector(prefix_), count});
      return;
    }
    if (!slices_) {
      const std::uint64_t minus = binomial(count, 0.5, rng_);
      prefix_[site] = -1;
      descend(site + 1, env, minus);
      prefix_[site] = 1;
      descend(site + 1, env, count - minus);
      return;
    }
    const RowVector plus_env = env * (*slices_)[site][0];
    const RowVector minus_env = env * (*slices_)[site][1];
    const double wp = plus_env.squaredNorm();
    const double wm = minus_env.squaredNorm();
    if (!(wp + wm > 0.0)) throw NumericalError("measure: vanishing outcome mass");
    const std::uint64_t minus = binomial(count, wm / (wp + wm), rng_);
    prefix_[site] = -1;
    descend(site + 1, minus_env, minus);
    prefix_[site] = 1;
    descend(site + 1, plus_env, count - minus);
  }

  const std::vector<std::array<Matrix, 2>>* slices_;
  std::size_t n_;
  Stream& rng_;
  std::vector<std::int8_t> prefix_;
  OutcomeHistogram out_;
};

OutcomeHistogram merge(OutcomeHistogram a, OutcomeHistogram b) {
  if (b.empty()) return a;
  if (a.empty()) return b;
  OutcomeHistogram out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].signs < b[j].signs)) {
      out.push_back(std::move(a[i++]));
    } else if (i == a.size() || b[j].signs < a[i].signs) {
      out.push_back(std::move(b[j++]));
    } else {
      a[i].count += b[j].count;
      out.push_back(std::move(a[i]));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

DeviceModel::DeviceModel(Mps target, double lambda) : target_(std::move(target)), lambda_(lambda) {
  detail::require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0, 1]");
  detail::require(target_.size() >= 1, "device: empty target");
  if (target_.canonical_form() != CanonicalForm::RightCanonicalCenterFirst) target_ = canonicalize_right(target_);
  const auto& first = target_.site(0);
  const double norm2 = first[0].squaredNorm() + first[1].squaredNorm();
  detail::require(std::abs(norm2 - 1.0) <= 1e-10, "device: target must be normalized");
}

std::vector<SignVector> measure(const DeviceModel& device, const PauliString& setting, std::uint64_t shots,
                                std::uint64_t stream_key) {
  const auto slices = rotated_slices(device.target(), setting);
  const std::size_t n = setting.size();
  std::vector<SignVector> out;
  out.reserve(shots);
  for (std::uint64_t k = 0; k < shots; ++k) {
    Stream rng(derive_key(stream_key, k));
    if (rng.uniform() < device.lambda()) {
      out.push_back(uniform_signs(n, rng));
      continue;
    }
    std::vector<std::int8_t> s(n);
    RowVector env = RowVector::Ones(1);
    for (std::size_t i = 0; i < n; ++i) {
      RowVector plus_env = env * slices[i][0];
      RowVector minus_env = env * slices[i][1];
      const double wp = plus_env.squaredNorm();
      const double wm = minus_env.squaredNorm();
      if (!(wp + wm > 0.0)) throw NumericalError("measure: vanishing outcome mass");
      if (rng.uniform() * (wp + wm) < wp) {
        s[i] = 1;
        env = std::move(plus_env);
      } else {
        s[i] = -1;
        env = std::move(minus_env);
      }
    }
    out.push_back(SignVector(std::move(s)));
  }
  return out;
}

OutcomeHistogram measure_counts(const DeviceModel& device, const PauliString& setting, std::uint64_t shots,
                                std::uint64_t stream_key) {
  const auto slices = rotated_slices(device.target(), setting);
  const std::size_t n = setting.size();
  Stream rng(stream_key);
  const std::uint64_t mixed = binomial(shots, device.lambda(), rng);
  OutcomeHistogram noise = TreeSplitter(nullptr, n, rng).run(mixed);
  OutcomeHistogram pure = TreeSplitter(&slices, n, rng).run(shots - mixed);
  return merge(std::move(pure), std::move(noise));
}

double mean_parity(const OutcomeHistogram& records, const PauliString& p) {
  double sum = 0.0;
  std::uint64_t shots = 0;
  for (const auto& o : records) {
    sum += static_cast<double>(sign_parity(p, o.signs)) * static_cast<double>(o.count);
    shots += o.count;
  }
  detail::require(shots > 0, "estimate_chi_sigma: no shots recorded");
  return sum / static_cast<double>(shots);
}

double estimate_chi_sigma(const OutcomeHistogram& records, const PauliString& p) {
  return mean_parity(records, p) * std::exp2(-0.5 * static_cast<double>(p.size()));
}

}  // namespace mpsdfe
