#include "mpsdfe/experiment.hpp"

#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "mpsdfe/errors.hpp"
#include "mpsdfe/parallel.hpp"
#include "mpsdfe/stats.hpp"

namespace mpsdfe {

namespace {

struct TrialRun {
  std::vector<double> estimators;
  std::vector<std::uint64_t> shots;
  bool biased = false;
};

TrialRun run_trial(const Target& target, const DeviceModel& device, const ExperimentConfig& config, Method method,
                   std::size_t trial) {
  PlanOptions options;
  options.method = method;
  options.params = config.params;
  options.seed = derive_key(stream_key(config.seed, Phase::Trial, trial), static_cast<std::uint64_t>(method));
  options.sorting_policy = config.sorting_policy;
  options.shot_cap = config.shot_cap;
  options.workers = 1;
  const EstimationReport report = method == Method::Dfe ? run_dfe(target, device, options)
                                                        : run_gdfe(target, device, options);
  TrialRun out;
  out.biased = report.biased;
  for (const auto& s : report.settings) {
    out.estimators.push_back(s.value);
    out.shots.push_back(s.shots);
  }
  return out;
}

std::pair<double, double> band(const Summary& s) { return {s.mean - kZ95 * s.std_error, s.mean + kZ95 * s.std_error}; }

MethodOutcome collect(Method method, const std::vector<TrialRun>& runs, double truth) {
  MethodOutcome out;
  out.method = method;
  const std::size_t trials = runs.size();
  const std::size_t l = runs.front().estimators.size();
  std::vector<double> running_sum(trials, 0.0), running_shots(trials, 0.0);
  std::vector<double> est(trials), err(trials), err_one(trials), shots(trials);
  for (std::size_t k = 0; k < l; ++k) {
    for (std::size_t t = 0; t < trials; ++t) {
      running_sum[t] += runs[t].estimators[k];
      running_shots[t] += static_cast<double>(runs[t].shots[k]);
      est[t] = running_sum[t] / static_cast<double>(k + 1);
      err[t] = (est[t] - truth) * (est[t] - truth);
      err_one[t] = (est[t] - 1.0) * (est[t] - 1.0);
      shots[t] = running_shots[t];
    }
    CurvePoint p;
    p.settings = k + 1;
    const Summary se = summarize(est), sm = summarize(err), ss = summarize(shots);
    p.mean = se.mean;
    std::tie(p.mean_lo, p.mean_hi) = band(se);
    p.mse = sm.mean;
    std::tie(p.mse_lo, p.mse_hi) = band(sm);
    p.mse_vs_one = summarize(err_one).mean;
    p.shots = ss.mean;
    std::tie(p.shots_lo, p.shots_hi) = band(ss);
    out.curve.push_back(p);
  }
  for (std::size_t t = 0; t < trials; ++t) {
    out.final_estimates.push_back(running_sum[t] / static_cast<double>(l));
    std::uint64_t total = 0;
    for (auto s : runs[t].shots) total += s;
    out.total_shots.push_back(total);
    if (runs[t].biased) ++out.biased_trials;
  }
  return out;
}

}  // namespace

double MethodOutcome::mean_final_estimate() const { return summarize(final_estimates).mean; }

double MethodOutcome::final_mse() const { return curve.empty() ? 0.0 : curve.back().mse; }

double MethodOutcome::mean_total_shots() const {
  std::vector<double> v(total_shots.begin(), total_shots.end());
  return summarize(v).mean;
}

ExperimentResult experiment_fig5(const ExperimentConfig& config, const std::function<void(std::size_t)>& progress) {
  detail::require(config.n >= 1 && config.n <= 62, "experiment: n must lie in [1, 62]");
  detail::require(config.trials >= 1, "experiment: need at least one trial");
  const auto start = std::chrono::steady_clock::now();
  const Mps raw = random_mps(config.n, config.max_bond, config.seed);
  const Target target = Target::from_mps(raw);
  const DeviceModel device(target.mps(), config.lambda);

  ExperimentResult result;
  result.config = config;
  result.truth = (1.0 - config.lambda) + config.lambda / target.dimension();
  result.bond_dims = raw.bond_dims();

  std::vector<TrialRun> dfe(config.trials), gdfe(config.trials);
  std::mutex progress_mutex;
  std::size_t finished = 0;
  parallel_for(config.trials, config.workers, [&](std::size_t t) {
    dfe[t] = run_trial(target, device, config, Method::Dfe, t);
    gdfe[t] = run_trial(target, device, config, Method::Gdfe, t);
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(++finished);
    }
  });
  result.dfe = collect(Method::Dfe, dfe, result.truth);
  result.gdfe = collect(Method::Gdfe, gdfe, result.truth);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string experiment_curves_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "method,settings,mean,meanLo,meanHi,mse,mseLo,mseHi,mseVsOne,shots,shotsLo,shotsHi\n";
  for (const MethodOutcome* m : {&result.dfe, &result.gdfe})
    for (const auto& p : m->curve)
      out << to_string(m->method) << ',' << p.settings << ',' << p.mean << ',' << p.mean_lo << ',' << p.mean_hi
          << ',' << p.mse << ',' << p.mse_lo << ',' << p.mse_hi << ',' << p.mse_vs_one << ',' << p.shots << ','
          << p.shots_lo << ',' << p.shots_hi << '\n';
  return out.str();
}

std::string experiment_trials_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "trial,dfeEstimate,dfeShots,gdfeEstimate,gdfeShots\n";
  for (std::size_t t = 0; t < result.dfe.final_estimates.size(); ++t)
    out << t << ',' << result.dfe.final_estimates[t] << ',' << result.dfe.total_shots[t] << ','
        << result.gdfe.final_estimates[t] << ',' << result.gdfe.total_shots[t] << '\n';
  return out.str();
}

std::string experiment_summary_json(const ExperimentResult& result) {
  using nlohmann::json;
  const auto& c = result.config;
  auto method_json = [&](const MethodOutcome& m) {
    return json{{"meanFinalEstimate", m.mean_final_estimate()},
                {"finalMse", m.final_mse()},
                {"finalMseVsOne", m.curve.empty() ? 0.0 : m.curve.back().mse_vs_one},
                {"meanTotalShots", m.mean_total_shots()},
                {"biasedTrials", m.biased_trials}};
  };
  const double dfe_mse = result.dfe.final_mse();
  json doc = {{"config",
               {{"n", c.n},
                {"maxBond", c.max_bond},
                {"bondDims", result.bond_dims},
                {"lambda", c.lambda},
                {"eps", c.params.eps},
                {"delta", c.params.delta},
                {"l", c.params.settings},
                {"trials", c.trials},
                {"seed", c.seed},
                {"sortingPolicy", to_string(c.sorting_policy)},
                {"shotCap", c.shot_cap ? json(*c.shot_cap) : json(nullptr)}}},
              {"truth", result.truth},
              {"dfe", method_json(result.dfe)},
              {"gdfe", method_json(result.gdfe)},
              {"mseRatio", dfe_mse > 0.0 ? json(result.gdfe.final_mse() / dfe_mse) : json(nullptr)},
              {"shotRatio", result.gdfe.mean_total_shots() / result.dfe.mean_total_shots()}};
  return doc.dump(2) + "\n";
}

}  // namespace mpsdfe
