// mpsdfe: command-line front end for sampling, simulated measurement and
// (grouped) direct fidelity estimation of MPS / MPO targets.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpsdfe/errors.hpp"
#include "mpsdfe/estimation.hpp"
#include "mpsdfe/experiment.hpp"
#include "mpsdfe/io.hpp"
#include "mpsdfe/oracle.hpp"
#include "mpsdfe/records.hpp"
#include "mpsdfe/scaling.hpp"

namespace fs = std::filesystem;
using namespace mpsdfe;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Precision {
  double eps = 0.1;
  double delta = 0.1;
  std::optional<std::size_t> l;

  PrecisionParams params() const { return PrecisionParams::from(eps, delta, l); }
};

void add_precision(CLI::App* cmd, Precision& p) {
  cmd->add_option("--eps", p.eps, "Additive error")->capture_default_str();
  cmd->add_option("--delta", p.delta, "Failure probability")->capture_default_str();
  cmd->add_option("--l", p.l, "Number of settings (default ceil(1/(eps^2 delta)))");
}

Target load_target(const fs::path& path) {
  return peek_chain_kind(path) == ChainKind::Mps ? Target::from_mps(load_mps(path)) : Target::from_mpo(load_mpo(path));
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

// gen-mps -----------------------------------------------------------------

struct GenOptions {
  std::size_t n = 4;
  Index bond = 4;
  std::uint64_t seed = 1;
  std::string kind = "random";
  fs::path in;
  fs::path out;
};

void run_gen_mps(const GenOptions& o) {
  Mps mps;
  if (o.kind == "random") mps = random_mps(o.n, o.bond, o.seed);
  else if (o.kind == "ghz") mps = ghz_mps(o.n);
  else if (o.kind == "w") mps = w_mps(o.n);
  else if (o.kind == "zero") mps = product_zero_mps(o.n);
  else throw ValidationError("unknown MPS kind \"" + o.kind + "\"");
  save_mps(mps, o.out);
  print_json({{"out", o.out.string()}, {"n", mps.size()}, {"bondDims", mps.bond_dims()}});
}

void run_gen_mpo(const GenOptions& o) {
  Mpo mpo;
  if (o.kind == "random") mpo = random_hermitian_mpo(o.n, o.bond, o.seed);
  else if (o.kind == "identity") mpo = identity_mpo(o.n);
  else if (o.kind == "projector") {
    detail::require(!o.in.empty(), "--kind projector needs --in <mps file>");
    mpo = projector_mpo(canonicalize_right(normalize(load_mps(o.in))));
  } else {
    throw ValidationError("unknown MPO kind \"" + o.kind + "\"");
  }
  save_mpo(mpo, o.out);
  print_json({{"out", o.out.string()}, {"n", mpo.size()}, {"bondDims", mpo.bond_dims()}});
}

// canonicalize --------------------------------------------------------------

void run_canonicalize(const fs::path& in, const fs::path& out, const std::string& method) {
  detail::require(method == "qr" || method == "svd", "--method must be qr or svd");
  const Mps mps = load_mps(in);
  const Mps canon = canonicalize_right(mps, method == "qr" ? OrthoMethod::Qr : OrthoMethod::Svd);
  save_mps(canon, out);
  print_json({{"out", out.string()},
              {"normSquared", norm_squared(canon)},
              {"rightCanonicalResidual", right_canonical_residual(canon)},
              {"bondDims", canon.bond_dims()}});
}

// sample / measure / estimate ----------------------------------------------

struct PlanCli {
  fs::path in;
  std::string method = "gdfe";
  Precision precision;
  std::uint64_t seed = 1;
  std::string sorting = "fixed";
  std::optional<std::uint64_t> shot_cap;
  unsigned workers = 1;

  PlanOptions options() const {
    PlanOptions p;
    p.method = method_from_string(method);
    p.params = precision.params();
    p.seed = seed;
    p.sorting_policy = sorting_policy_from_string(sorting);
    p.shot_cap = shot_cap;
    p.workers = workers;
    return p;
  }
};

void add_plan_options(CLI::App* cmd, PlanCli& p) {
  cmd->add_option("--method", p.method, "dfe or gdfe")->check(CLI::IsMember({"dfe", "gdfe"}))->capture_default_str();
  add_precision(cmd, p.precision);
  cmd->add_option("--seed", p.seed, "Master seed")->capture_default_str();
  cmd->add_option("--sorting-policy", p.sorting, "fixed or per-sample")
      ->check(CLI::IsMember({"fixed", "per-sample"}))
      ->capture_default_str();
  cmd->add_option("--shot-cap", p.shot_cap, "Per-setting shot cap (biases the estimate)");
  cmd->add_option("--workers", p.workers, "Worker threads")->capture_default_str();
}

void warn_if_biased(const Plan& plan) {
  if (plan.biased()) std::cerr << "warning: shot cap engaged; the estimate is biased\n";
}

void run_sample(const PlanCli& p, const fs::path& out) {
  const Target target = load_target(p.in);
  PhaseTimings timings;
  const Plan plan = make_plan(target, p.options(), &timings);
  write_text_file(out, plan_to_jsonl(plan));
  warn_if_biased(plan);
  print_json({{"out", out.string()},
              {"settings", plan.settings.size()},
              {"totalShots", plan.total_shots()},
              {"samplingSeconds", timings.sampling_seconds},
              {"probabilitySeconds", timings.probability_seconds}});
}

void run_measure(const fs::path& state, const fs::path& settings, double lambda, std::uint64_t seed,
                 unsigned workers, bool counts, const fs::path& out) {
  const Plan plan = plan_from_jsonl(read_text_file(settings));
  const DeviceModel device(canonicalize_right(normalize(load_mps(state))), lambda);
  const auto data = simulate_measurements(device, plan, seed, workers);
  write_text_file(out, records_to_jsonl(plan, data, counts ? RecordStyle::Counts : RecordStyle::Signs));
  print_json({{"out", out.string()}, {"settings", plan.settings.size()}, {"totalShots", plan.total_shots()}});
}

struct EstimateCli {
  PlanCli plan;
  fs::path state;
  fs::path settings;
  fs::path records;
  double lambda = 0.0;
  bool exact = false;
  bool counts = false;
  fs::path out;
};

void summarize_report(const EstimationReport& r, const fs::path& dir) {
  print_json({{"method", to_string(r.method)},
              {"target", to_string(r.target)},
              {"estimate", r.estimate},
              {"standardError", r.std_error},
              {"totalShots", r.total_shots},
              {"biased", r.biased},
              {"out", dir.string()}});
}

void run_estimate(const EstimateCli& e) {
  const Target target = load_target(e.plan.in);
  const fs::path dir = e.out;
  if (!e.records.empty()) {
    detail::require(!e.settings.empty(), "--records needs --settings");
    const Plan plan = plan_from_jsonl(read_text_file(e.settings));
    const auto data = records_from_jsonl(read_text_file(e.records), plan);
    const EstimationReport report = estimate_from_data(target, plan, data, e.plan.workers);
    write_text_file(dir / "report.json", report_to_json(report));
    write_text_file(dir / "timing.json", timings_to_json(report.timings));
    warn_if_biased(plan);
    summarize_report(report, dir);
    return;
  }

  PlanOptions options = e.plan.options();
  PhaseTimings timings;
  const Plan plan = e.settings.empty() ? make_plan(target, options, &timings)
                                       : plan_from_jsonl(read_text_file(e.settings));
  fs::path state = e.state;
  if (state.empty()) {
    detail::require(target.kind() == TargetKind::Mps, "MPO targets need --state <prepared MPS>");
    state = e.plan.in;
  }
  const Mps prepared = canonicalize_right(normalize(load_mps(state)));

  EstimationReport report;
  if (e.exact) {
    report = estimate_exact(target, plan, depolarize(density(dense_from_mps(prepared)), e.lambda));
  } else {
    const DeviceModel device(prepared, e.lambda);
    const auto data = simulate_measurements(device, plan, plan.seed, e.plan.workers);
    write_text_file(dir / "records.jsonl",
                    records_to_jsonl(plan, data, e.counts ? RecordStyle::Counts : RecordStyle::Signs));
    report = estimate_from_data(target, plan, data, e.plan.workers);
  }
  report.timings.sampling_seconds = timings.sampling_seconds;
  report.timings.probability_seconds = timings.probability_seconds;

  json config = {{"target", fs::absolute(e.plan.in).string()},
                 {"state", fs::absolute(state).string()},
                 {"method", to_string(plan.method)},
                 {"seed", plan.seed},
                 {"eps", plan.params.eps},
                 {"delta", plan.params.delta},
                 {"l", plan.params.settings},
                 {"lambda", e.lambda},
                 {"sortingPolicy", to_string(plan.sorting_policy)},
                 {"shotCap", plan.shot_cap ? json(*plan.shot_cap) : json(nullptr)},
                 {"exact", e.exact}};
  write_text_file(dir / "config.json", config.dump(2) + "\n");
  write_text_file(dir / "settings.jsonl", plan_to_jsonl(plan));
  write_text_file(dir / "report.json", report_to_json(report));
  write_text_file(dir / "timing.json", timings_to_json(report.timings));
  warn_if_biased(plan);
  summarize_report(report, dir);
}

// experiment-fig5 / bench / oracle -------------------------------------------

void run_experiment(ExperimentConfig config, const Precision& precision, const std::string& sorting,
                    const fs::path& out) {
  config.params = precision.params();
  config.sorting_policy = sorting_policy_from_string(sorting);
  const auto result = experiment_fig5(config, [&](std::size_t done) {
    std::cerr << "\rtrials finished: " << done << '/' << config.trials << std::flush;
  });
  std::cerr << '\n';
  write_text_file(out / "curves.csv", experiment_curves_csv(result));
  write_text_file(out / "trials.csv", experiment_trials_csv(result));
  write_text_file(out / "summary.json", experiment_summary_json(result));
  write_text_file(out / "timing.json", json{{"seconds", result.seconds}}.dump(2) + "\n");
  std::cout << experiment_summary_json(result);
}

void run_bench(bool quick, std::uint64_t seed, const fs::path& out) {
  ScalingConfig config;
  config.seed = seed;
  if (quick) {
    config.bonds = {2, 4, 8};
    config.min_seconds = 0.01;
    config.repeats = 3;
  }
  const auto result = bench_scaling(config);
  write_text_file(out / "scaling.csv", scaling_csv(result));
  write_text_file(out / "scaling.json", scaling_json(result));
  std::cout << scaling_json(result);
}

void run_oracle(const fs::path& in, const std::optional<std::string>& pauli, double lambda) {
  json doc;
  if (peek_chain_kind(in) == ChainKind::Mps) {
    const Mps mps = canonicalize_right(normalize(load_mps(in)));
    const DenseOperator rho = density(dense_from_mps(mps));
    const auto weights = full_pauli_weights(rho);
    double total = 0.0;
    for (const auto& w : weights) total += w.chi2;
    const auto fid = exact_fidelity(rho, depolarize(rho, lambda));
    doc = {{"kind", "mps"},
           {"n", mps.size()},
           {"sumChiSquared", total},
           {"fidelityDirect", fid.direct},
           {"fidelityPauliSum", fid.pauli_sum},
           {"lambda", lambda}};
    if (pauli) {
      const auto p = PauliString::parse(*pauli);
      doc["chiDense"] = dense_chi(rho, p);
      doc["chiNetwork"] = chi_of(mps, p);
    }
  } else {
    const Mpo mpo = load_mpo(in);
    const DenseOperator o = dense_from_mpo(mpo);
    const InducedGamma gamma = prepare_mpo(mpo);
    doc = {{"kind", "mpo"},
           {"n", mpo.size()},
           {"hermitianResidual", (o - o.adjoint()).cwiseAbs().maxCoeff()},
           {"traceOSquared", (o * o).trace().real()},
           {"Z", normalization(gamma)}};
    if (pauli) {
      const auto p = PauliString::parse(*pauli);
      doc["chiDense"] = dense_chi(o, p);
      doc["chiNetwork"] = chi_of_mpo(gamma, p);
    }
  }
  print_json(doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mpsdfe: direct fidelity estimation for MPS and MPO targets"};
  app.require_subcommand(1);

  GenOptions gen_mps;
  auto* c_gen_mps = app.add_subcommand("gen-mps", "Generate an MPS (random, ghz, w, zero)");
  c_gen_mps->add_option("--n", gen_mps.n, "Qubits")->required();
  c_gen_mps->add_option("--bond", gen_mps.bond, "Maximum bond dimension")->capture_default_str();
  c_gen_mps->add_option("--seed", gen_mps.seed, "Seed")->capture_default_str();
  c_gen_mps->add_option("--kind", gen_mps.kind, "random, ghz, w or zero")->capture_default_str();
  c_gen_mps->add_option("--out", gen_mps.out, "Output file")->required();

  GenOptions gen_mpo;
  gen_mpo.bond = 2;
  auto* c_gen_mpo = app.add_subcommand("gen-mpo", "Generate a Hermitian MPO (random, identity, projector)");
  c_gen_mpo->add_option("--n", gen_mpo.n, "Qubits");
  c_gen_mpo->add_option("--bond", gen_mpo.bond, "Bond dimension before Hermitian symmetrization")
      ->capture_default_str();
  c_gen_mpo->add_option("--seed", gen_mpo.seed, "Seed")->capture_default_str();
  c_gen_mpo->add_option("--kind", gen_mpo.kind, "random, identity or projector")->capture_default_str();
  c_gen_mpo->add_option("--in", gen_mpo.in, "MPS file for --kind projector");
  c_gen_mpo->add_option("--out", gen_mpo.out, "Output file")->required();

  fs::path canon_in, canon_out;
  std::string canon_method = "qr";
  auto* c_canon = app.add_subcommand("canonicalize", "Right-canonicalize an MPS");
  c_canon->add_option("--in", canon_in, "Input MPS")->required();
  c_canon->add_option("--out", canon_out, "Output MPS")->required();
  c_canon->add_option("--method", canon_method, "qr or svd")->capture_default_str();

  PlanCli sample;
  fs::path sample_out;
  auto* c_sample = app.add_subcommand("sample", "Sample settings and shot budgets (offline phase)");
  c_sample->add_option("--in", sample.in, "Target MPS or MPO")->required();
  add_plan_options(c_sample, sample);
  c_sample->add_option("--out", sample_out, "Settings file (JSON Lines)")->required();

  fs::path measure_state, measure_settings, measure_out;
  double measure_lambda = 0.0;
  std::uint64_t measure_seed = 1;
  unsigned measure_workers = 1;
  bool measure_counts_style = false;
  auto* c_measure = app.add_subcommand("measure", "Simulate measurements of a settings file");
  c_measure->add_option("--state", measure_state, "Prepared MPS")->required();
  c_measure->add_option("--settings", measure_settings, "Settings file")->required();
  c_measure->add_option("--lambda", measure_lambda, "Depolarizing strength")->capture_default_str();
  c_measure->add_option("--seed", measure_seed, "Shot seed")->capture_default_str();
  c_measure->add_option("--workers", measure_workers, "Worker threads")->capture_default_str();
  c_measure->add_flag("--counts", measure_counts_style, "Write outcome counts instead of one sign string per shot");
  c_measure->add_option("--out", measure_out, "Records file (JSON Lines)")->required();

  EstimateCli est;
  auto* c_est = app.add_subcommand("estimate", "Estimate the fidelity (simulated device, records, or exact sigma)");
  c_est->add_option("--in", est.plan.in, "Target MPS or MPO")->required();
  add_plan_options(c_est, est.plan);
  c_est->add_option("--state", est.state, "Prepared MPS (default: the MPS target)");
  c_est->add_option("--lambda", est.lambda, "Depolarizing strength")->capture_default_str();
  c_est->add_option("--settings", est.settings, "Reuse a settings file");
  c_est->add_option("--records", est.records, "Replay recorded measurements (needs --settings)");
  c_est->add_flag("--exact", est.exact, "Use exact sigma characteristic values (n <= 6)");
  c_est->add_flag("--counts", est.counts, "Write records as outcome counts");
  c_est->add_option("--out", est.out, "Run directory")->required();

  ExperimentConfig exp;
  Precision exp_precision;
  exp_precision.l = 1000;
  std::string exp_sorting = "fixed";
  fs::path exp_out;
  auto* c_exp = app.add_subcommand("experiment-fig5", "Repeated DFE vs GDFE trials on a random MPS");
  c_exp->add_option("--n", exp.n, "Qubits")->capture_default_str();
  c_exp->add_option("--bond", exp.max_bond, "Maximum bond dimension")->capture_default_str();
  c_exp->add_option("--lambda", exp.lambda, "Depolarizing strength")->capture_default_str();
  add_precision(c_exp, exp_precision);
  c_exp->add_option("--trials", exp.trials, "Independent trials")->capture_default_str();
  c_exp->add_option("--seed", exp.seed, "Master seed")->capture_default_str();
  c_exp->add_option("--sorting-policy", exp_sorting, "fixed or per-sample")
      ->check(CLI::IsMember({"fixed", "per-sample"}))
      ->capture_default_str();
  c_exp->add_option("--shot-cap", exp.shot_cap, "Per-setting shot cap");
  c_exp->add_option("--workers", exp.workers, "Worker threads")->capture_default_str();
  c_exp->add_option("--out", exp_out, "Output directory")->required();

  bool bench_quick = false;
  std::uint64_t bench_seed = 7;
  fs::path bench_out;
  auto* c_bench = app.add_subcommand("bench", "Scaling benchmarks against n and bond dimension");
  c_bench->add_flag("--quick", bench_quick, "Smaller bond sweep and shorter timings");
  c_bench->add_option("--seed", bench_seed, "Seed")->capture_default_str();
  c_bench->add_option("--out", bench_out, "Output directory")->required();

  fs::path oracle_in;
  std::optional<std::string> oracle_pauli;
  double oracle_lambda = 0.1;
  auto* c_oracle = app.add_subcommand("oracle", "Dense cross-checks for a small chain (n <= 6)");
  c_oracle->add_option("--in", oracle_in, "MPS or MPO file")->required();
  c_oracle->add_option("--pauli", oracle_pauli, "Pauli string to evaluate");
  c_oracle->add_option("--lambda", oracle_lambda, "Depolarizing strength for the fidelity check")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*c_gen_mps) run_gen_mps(gen_mps);
    else if (*c_gen_mpo) run_gen_mpo(gen_mpo);
    else if (*c_canon) run_canonicalize(canon_in, canon_out, canon_method);
    else if (*c_sample) run_sample(sample, sample_out);
    else if (*c_measure)
      run_measure(measure_state, measure_settings, measure_lambda, measure_seed, measure_workers,
                  measure_counts_style, measure_out);
    else if (*c_est) run_estimate(est);
    else if (*c_exp) run_experiment(exp, exp_precision, exp_sorting, exp_out);
    else if (*c_bench) run_bench(bench_quick, bench_seed, bench_out);
    else if (*c_oracle) run_oracle(oracle_in, oracle_pauli, oracle_lambda);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
