#include "mpsdfe/estimation.hpp"

#include <chrono>
#include <cmath>

#include "mpsdfe/errors.hpp"
#include "mpsdfe/oracle.hpp"
#include "mpsdfe/parallel.hpp"
#include "mpsdfe/stats.hpp"

namespace mpsdfe {

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

EstimationReport report_header(const Plan& plan, std::string source) {
  EstimationReport r;
  r.method = plan.method;
  r.target = plan.target;
  r.n = plan.n;
  r.seed = plan.seed;
  r.params = plan.params;
  r.sorting_policy = plan.sorting_policy;
  r.shot_cap = plan.shot_cap;
  r.source = std::move(source);
  r.total_shots = plan.total_shots();
  r.biased = plan.biased();
  r.normalization = plan.settings.empty() ? 1.0 : plan.settings.front().latent.normalization;
  return r;
}

void finish(EstimationReport& r) {
  std::vector<double> values(r.settings.size());
  for (std::size_t j = 0; j < values.size(); ++j) values[j] = r.settings[j].value;
  const Summary s = summarize(values);
  r.estimate = s.mean;
  r.variance = s.variance;
  r.std_error = s.std_error;
}

void check_plan(const Target& target, const Plan& plan) {
  detail::require(plan.n == target.size(), "plan does not match the target size");
  detail::require(plan.target == target.kind(), "plan was made for a different target kind");
}

}  // namespace

std::string to_string(Method m) { return m == Method::Dfe ? "dfe" : "gdfe"; }
std::string to_string(TargetKind k) { return k == TargetKind::Mps ? "mps" : "mpo"; }
std::string to_string(SortingPolicy p) { return p == SortingPolicy::Fixed ? "fixed" : "per-sample"; }

Method method_from_string(const std::string& s) {
  if (s == "dfe") return Method::Dfe;
  if (s == "gdfe") return Method::Gdfe;
  throw ValidationError("unknown method \"" + s + "\" (expected dfe or gdfe)");
}

SortingPolicy sorting_policy_from_string(const std::string& s) {
  if (s == "fixed") return SortingPolicy::Fixed;
  if (s == "per-sample") return SortingPolicy::PerSample;
  throw ValidationError("unknown sorting policy \"" + s + "\" (expected fixed or per-sample)");
}

Target Target::from_mps(const Mps& mps) {
  Target t;
  t.kind_ = TargetKind::Mps;
  t.mps_ = canonicalize_right(normalize(mps));
  return t;
}

Target Target::from_mpo(const Mpo& mpo) {
  Target t;
  t.kind_ = TargetKind::Mpo;
  t.mpo_ = mpo;
  t.gamma_ = prepare_mpo(mpo);
  return t;
}

std::size_t Target::size() const noexcept { return kind_ == TargetKind::Mps ? mps_.size() : mpo_.size(); }

double Target::dimension() const noexcept { return std::ldexp(1.0, static_cast<int>(size())); }

const Mps& Target::mps() const {
  detail::require(kind_ == TargetKind::Mps, "target is not an MPS");
  return mps_;
}

const Mpo& Target::mpo() const {
  detail::require(kind_ == TargetKind::Mpo, "target is not an MPO");
  return mpo_;
}

const InducedGamma& Target::gamma() const {
  detail::require(kind_ == TargetKind::Mpo, "target is not an MPO");
  return gamma_;
}

std::vector<SampledSetting> Target::sample(std::size_t count, std::uint64_t seed, unsigned workers) const {
  return kind_ == TargetKind::Mps ? sample_settings(mps_, count, seed, workers)
                                  : sample_settings_mpo(gamma_, count, seed, workers);
}

double Target::chi(const PauliString& p) const {
  return kind_ == TargetKind::Mps ? chi_of(mps_, p) : chi_of_mpo(gamma_, p);
}

double Target::group_weight(const PauliString& representative, const SortingString& g) const {
  return kind_ == TargetKind::Mps ? mpsdfe::group_weight(mps_, representative, g)
                                  : group_weight_mpo(gamma_, representative, g);
}

double Target::snapshot_mean(const GroupedSetting& grouped, const OutcomeHistogram& hist) const {
  return kind_ == TargetKind::Mps ? mpsdfe::snapshot_mean(mps_, grouped, hist)
                                  : snapshot_mean_mpo(mpo_, grouped, hist);
}

std::uint64_t Plan::total_shots() const {
  std::uint64_t total = 0;
  for (const auto& s : settings) total += s.budget.shots;
  return total;
}

bool Plan::biased() const {
  for (const auto& s : settings)
    if (s.budget.capped) return true;
  return false;
}

Plan make_plan(const Target& target, const PlanOptions& options, PhaseTimings* timings) {
  Plan plan;
  plan.method = options.method;
  plan.target = target.kind();
  plan.n = target.size();
  plan.seed = options.seed;
  plan.params = options.params;
  plan.sorting_policy = options.sorting_policy;
  plan.shot_cap = options.shot_cap;

  Stopwatch sampling;
  auto latents = target.sample(options.params.settings, options.seed, options.workers);
  if (timings) timings->sampling_seconds = sampling.seconds();

  Stopwatch probabilities;
  const std::size_t l = latents.size();
  plan.settings.resize(l);
  const double d = target.dimension();
  if (options.method == Method::Dfe) {
    for (std::size_t j = 0; j < l; ++j) {
      auto& s = plan.settings[j];
      s.representative = latents[j].pauli;
      s.group_exponent = 0;
      s.group_weight = latents[j].weight;
      s.latent = std::move(latents[j]);
      s.budget = hoeffding_shots(1.0, s.latent.normalization, s.latent.weight, d, options.params, options.shot_cap);
    }
  } else {
    SortingString fixed;
    if (options.sorting_policy == SortingPolicy::Fixed) {
      Stream rng(stream_key(options.seed, Phase::Sorting, 0));
      fixed = SortingString::uniform(plan.n, rng);
    }
    parallel_for(l, options.workers, [&](std::size_t j) {
      SortingString g = fixed;
      if (options.sorting_policy == SortingPolicy::PerSample) {
        Stream rng(stream_key(options.seed, Phase::Sorting, j));
        g = SortingString::uniform(plan.n, rng);
      }
      auto& s = plan.settings[j];
      s.representative = representative(latents[j].pauli, g);
      s.group_exponent = group_exponent(latents[j].pauli, g);
      s.group_weight = target.group_weight(s.representative, g);
      s.latent = std::move(latents[j]);
      s.sorting = std::move(g);
      s.budget = shot_budget(s, options.params, d, options.shot_cap);
    });
  }
  if (timings) timings->probability_seconds = probabilities.seconds();
  return plan;
}

MeasurementData simulate_measurements(const DeviceModel& device, const Plan& plan, std::uint64_t seed,
                                      unsigned workers) {
  detail::require(device.target().size() == plan.n, "device and plan sizes differ");
  MeasurementData data(plan.settings.size());
  parallel_for(plan.settings.size(), workers, [&](std::size_t j) {
    const auto& s = plan.settings[j];
    data[j] = measure_counts(device, s.representative, s.budget.shots, stream_key(seed, Phase::Shots, j));
  });
  return data;
}

EstimationReport estimate_from_data(const Target& target, const Plan& plan, const MeasurementData& data,
                                    unsigned workers) {
  check_plan(target, plan);
  detail::require(data.size() == plan.settings.size(), "measurement data does not cover every setting");
  Stopwatch online;
  EstimationReport r = report_header(plan, "records");
  r.settings.resize(plan.settings.size());
  const double root_d = std::sqrt(target.dimension());
  parallel_for(plan.settings.size(), workers, [&](std::size_t j) {
    const auto& s = plan.settings[j];
    auto& e = r.settings[j];
    e.index = s.latent.index;
    e.shots = total_shots(data[j]);
    detail::require(e.shots > 0, "setting " + std::to_string(j) + " has no recorded shots");
    if (plan.method == Method::Dfe) {
      if (s.latent.chi == 0.0) throw NumericalError("DFE: sampled string has chi = 0");
      e.value = s.latent.normalization * (mean_parity(data[j], s.latent.pauli) / root_d) / s.latent.chi;
    } else {
      e.value = target.snapshot_mean(s, data[j]);
    }
  });
  r.total_shots = 0;
  for (const auto& e : r.settings) r.total_shots += e.shots;
  finish(r);
  r.timings.online_seconds = online.seconds();
  return r;
}

EstimationReport estimate_exact(const Target& target, const Plan& plan, const DenseOperator& sigma) {
  check_plan(target, plan);
  EstimationReport r = report_header(plan, "exact");
  r.total_shots = 0;
  r.settings.resize(plan.settings.size());
  for (std::size_t j = 0; j < plan.settings.size(); ++j) {
    const auto& s = plan.settings[j];
    auto& e = r.settings[j];
    e.index = s.latent.index;
    if (plan.method == Method::Dfe) {
      if (s.latent.chi == 0.0) throw NumericalError("DFE: sampled string has chi = 0");
      e.value = s.latent.normalization * dense_chi(sigma, s.latent.pauli) / s.latent.chi;
    } else {
      double sum = 0.0;
      for (const auto& p : enumerate_group(s.representative, s.sorting))
        sum += target.chi(p) * dense_chi(sigma, p);
      e.value = sum / s.group_weight;
    }
  }
  finish(r);
  return r;
}

namespace {

EstimationReport run_pipeline(const Target& target, const DeviceModel& device, const PlanOptions& options) {
  PhaseTimings timings;
  const Plan plan = make_plan(target, options, &timings);
  Stopwatch online;
  const auto data = simulate_measurements(device, plan, options.seed, options.workers);
  EstimationReport r = estimate_from_data(target, plan, data, options.workers);
  r.source = "device";
  r.lambda = device.lambda();
  r.timings = timings;
  r.timings.online_seconds = online.seconds();
  return r;
}

}  // namespace

EstimationReport run_dfe(const Target& target, const DeviceModel& device, PlanOptions options) {
  options.method = Method::Dfe;
  return run_pipeline(target, device, options);
}

EstimationReport run_gdfe(const Target& target, const DeviceModel& device, PlanOptions options) {
  options.method = Method::Gdfe;
  return run_pipeline(target, device, options);
}

}  // namespace mpsdfe
