#include "mpsdfe/scaling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "mpsdfe/grouping.hpp"
#include "mpsdfe/mpo_engine.hpp"
#include "mpsdfe/sampler.hpp"

namespace mpsdfe {

namespace {

using Timed = std::function<void(std::size_t)>;

// Mean time per call of each function, as the median over repeats. Repeats
// run round-robin across the functions so drift in machine load spreads
// evenly over a series instead of landing on one point.
std::vector<double> time_per_call(const ScalingConfig& config, const std::vector<Timed>& fns) {
  using clock = std::chrono::steady_clock;
  const int repeats = std::max(1, config.repeats);
  std::vector<std::vector<double>> samples(fns.size());
  for (int r = 0; r < repeats; ++r) {
    for (std::size_t f = 0; f < fns.size(); ++f) {
      std::size_t calls = 0;
      const auto start = clock::now();
      double elapsed = 0.0;
      do {
        fns[f](calls++);
        elapsed = std::chrono::duration<double>(clock::now() - start).count();
      } while (elapsed < config.min_seconds);
      samples[f].push_back(elapsed / static_cast<double>(calls));
    }
  }
  std::vector<double> out;
  for (auto& v : samples) {
    std::sort(v.begin(), v.end());
    out.push_back(v[v.size() / 2]);
  }
  return out;
}

void fit_linear(ScalingSeries& s) { s.fit = linear_fit(s.x, s.seconds); }

void fit_power(ScalingSeries& s) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    lx.push_back(std::log(s.x[i]));
    ly.push_back(std::log(s.seconds[i]));
  }
  s.fit = linear_fit(lx, ly);
}

GroupedSetting sample_grouped(const Mps& mps, std::uint64_t seed, std::uint64_t index) {
  Stream rng(stream_key(seed, Phase::Settings, index));
  SampledSetting latent = sample_setting(mps, rng);
  Stream srng(stream_key(seed, Phase::Sorting, index));
  SortingString g = SortingString::uniform(mps.size(), srng);
  GroupedSetting out;
  out.representative = representative(latent.pauli, g);
  out.group_exponent = group_exponent(latent.pauli, g);
  out.group_weight = group_weight(mps, out.representative, g);
  out.latent = std::move(latent);
  out.sorting = std::move(g);
  return out;
}

}  // namespace

bool ScalingSeries::consistent() const {
  if (axis == "n") return fit.r2 > 0.95;
  return fit.slope >= expected_exponent / 2.0 && fit.slope <= expected_exponent * 2.0;
}

ScalingResult bench_scaling(const ScalingConfig& config) {
  ScalingResult result;

  ScalingSeries sampling_n{"mps_sampling_vs_n", "n", {}, {}, {}, 1.0};
  ScalingSeries online_n{"mps_online_shot_vs_n", "n", {}, {}, {}, 1.0};
  std::vector<Mps> size_targets;
  std::vector<GroupedSetting> size_groups;
  for (std::size_t n : config.sizes) {
    size_targets.push_back(canonicalize_right(normalize(random_mps(n, config.bond_for_sizes, config.seed))));
    size_groups.push_back(sample_grouped(size_targets.back(), config.seed, 0));
  }
  std::vector<Timed> sampling_fns, online_fns;
  for (std::size_t i = 0; i < config.sizes.size(); ++i) {
    const Mps& mps = size_targets[i];
    const GroupedSetting& grouped = size_groups[i];
    const std::size_t n = config.sizes[i];
    sampling_n.x.push_back(static_cast<double>(n));
    online_n.x.push_back(static_cast<double>(n));
    sampling_fns.push_back([&config, &mps](std::size_t k) {
      Stream rng(stream_key(config.seed, Phase::Settings, k));
      (void)sample_setting(mps, rng);
    });
    online_fns.push_back([&config, &mps, &grouped, n](std::size_t k) {
      Stream rng(derive_key(config.seed, k));
      std::vector<std::int8_t> s(n);
      for (auto& v : s) v = rng.uniform() < 0.5 ? std::int8_t{1} : std::int8_t{-1};
      (void)snapshot(mps, grouped, SignVector(std::move(s)));
    });
  }
  sampling_n.seconds = time_per_call(config, sampling_fns);
  online_n.seconds = time_per_call(config, online_fns);
  fit_linear(sampling_n);
  fit_linear(online_n);

  ScalingSeries sampling_b{"mps_sampling_vs_bond", "B", {}, {}, {}, 3.0};
  ScalingSeries group_b{"mps_group_weight_vs_bond", "B", {}, {}, {}, 5.0};
  ScalingSeries mpo_group_b{"mpo_group_weight_vs_bond", "B", {}, {}, {}, 3.0};
  const std::size_t n = config.size_for_bonds;
  struct MpoCase {
    InducedGamma gamma;
    PauliString rep;
    SortingString g;
  };
  std::vector<Mps> bond_targets;
  std::vector<GroupedSetting> bond_groups;
  std::vector<MpoCase> mpo_cases;
  for (Index b : config.bonds) {
    bond_targets.push_back(canonicalize_right(normalize(random_mps(n, b, config.seed))));
    bond_groups.push_back(sample_grouped(bond_targets.back(), config.seed, 0));
    MpoCase c{prepare_mpo(random_hermitian_mpo(n, std::max<Index>(1, b / 2), config.seed)), {}, {}};
    Stream rng(stream_key(config.seed, Phase::Settings, 0));
    const SampledSetting latent = sample_setting_mpo(c.gamma, rng);
    Stream srng(stream_key(config.seed, Phase::Sorting, 0));
    c.g = SortingString::uniform(n, srng);
    c.rep = representative(latent.pauli, c.g);
    mpo_cases.push_back(std::move(c));
  }
  std::vector<Timed> sampling_fns_b, group_fns_b, mpo_fns_b;
  for (std::size_t i = 0; i < config.bonds.size(); ++i) {
    const double b = static_cast<double>(config.bonds[i]);
    const Mps& mps = bond_targets[i];
    const GroupedSetting& grouped = bond_groups[i];
    const MpoCase& c = mpo_cases[i];
    sampling_b.x.push_back(b);
    group_b.x.push_back(b);
    mpo_group_b.x.push_back(b);
    sampling_fns_b.push_back([&config, &mps](std::size_t k) {
      Stream rng(stream_key(config.seed, Phase::Settings, k));
      (void)sample_setting(mps, rng);
    });
    group_fns_b.push_back(
        [&mps, &grouped](std::size_t) { (void)group_weight(mps, grouped.representative, grouped.sorting); });
    mpo_fns_b.push_back([&c](std::size_t) { (void)group_weight_mpo(c.gamma, c.rep, c.g); });
  }
  sampling_b.seconds = time_per_call(config, sampling_fns_b);
  group_b.seconds = time_per_call(config, group_fns_b);
  mpo_group_b.seconds = time_per_call(config, mpo_fns_b);
  fit_power(sampling_b);
  fit_power(group_b);
  fit_power(mpo_group_b);

  result.series = {sampling_n, online_n, sampling_b, group_b, mpo_group_b};
  return result;
}

std::string scaling_csv(const ScalingResult& result) {
  std::ostringstream out;
  out.precision(10);
  out << "series,axis,x,secondsPerCall\n";
  for (const auto& s : result.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) out << s.name << ',' << s.axis << ',' << s.x[i] << ',' << s.seconds[i] << '\n';
  return out.str();
}

std::string scaling_json(const ScalingResult& result) {
  using nlohmann::json;
  json series = json::array();
  for (const auto& s : result.series)
    series.push_back({{"name", s.name},
                      {"axis", s.axis},
                      {"x", s.x},
                      {"secondsPerCall", s.seconds},
                      {"fit", s.axis == "n" ? "linear" : "log-log"},
                      {"slope", s.fit.slope},
                      {"intercept", s.fit.intercept},
                      {"r2", s.fit.r2},
                      {"expectedExponent", s.expected_exponent},
                      {"consistent", s.consistent()}});
  return json{{"series", series}}.dump(2) + "\n";
}

}  // namespace mpsdfe
