// levybench: simulation, estimation, Monte Carlo risk tables and bandwidth
// equations for Levy processes observed at irregular times.
//
// Exit codes: 0 ok, 2 configuration error, 3 numeric or I/O failure.

#include "levy/bench.hpp"
#include "levy/csv.hpp"
#include "levy/error.hpp"
#include "levy/estimators.hpp"
#include "levy/rates.hpp"
#include "levy/rng.hpp"
#include "levy/weights.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>

namespace {

using namespace levy;

constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

struct DataOptions
{
  std::string model = "gamma(3,2)";
  std::size_t n = 1000;
  double gap_upper = 6.0;
  std::uint64_t seed = 1;
};

struct EstimateOptions
{
  std::string weights = "iterative";
  double kappa = 1.0;
  double grid_umax = 0.0;
  double grid_du = 0.01;
  int cutoff = 0;
  double x_min = -5.0, x_max = 5.0;
  std::size_t x_points = 1001;
  bool spectra = false;
};

void add_data_options(CLI::App* app, DataOptions& d)
{
  app->add_option("--model", d.model, "gamma(a,b) | bgamma(a,b) | cpois_normal(l) | bm(mu,v)")->capture_default_str();
  app->add_option("--n", d.n, "number of increments")->capture_default_str();
  app->add_option("--gap-upper", d.gap_upper, "gaps are uniform on (0, gap-upper]")->capture_default_str();
  app->add_option("--seed", d.seed, "base seed")->capture_default_str();
}

ConfigEcho echo_of(const DataOptions& d, const std::vector<std::pair<std::string, std::string>>& extra = {})
{
  ConfigEcho e{{"model", d.model},
               {"n", std::to_string(d.n)},
               {"gap_upper", format_double(d.gap_upper)},
               {"seed", std::to_string(d.seed)}};
  e.insert(e.end(), extra.begin(), extra.end());
  return e;
}

ObservationSet simulate(const DataOptions& d)
{
  const auto model = LevyModel::parse(d.model);
  if (d.n < 1 || !(d.gap_upper > 0.0))
    throw Error(ErrorCode::config, "n must be >= 1 and gap-upper > 0");
  const auto rep_seed = replication_seed(d.seed, d.model, d.n, 0);
  const auto scheme = draw_uniform_gaps(d.n, d.gap_upper, derive_seed(rep_seed, 1));
  return model.sample_increments(scheme, derive_seed(rep_seed, 2));
}

void run_simulate(const DataOptions& d, const std::filesystem::path& out)
{
  std::filesystem::create_directories(out);
  const auto obs = simulate(d);
  const auto echo = echo_of(d);
  write_scheme_csv(out / "scheme.csv", obs.scheme, echo);
  CsvWriter w(out / "increments.csv", {"index", "delta", "z"}, echo);
  for (std::size_t j = 0; j < obs.size(); ++j) {
    w.cell(j + 1).cell(obs.scheme.delta(j)).cell(obs.increments[j]);
    w.end_row();
  }
  w.close();
  std::cout << "simulated " << obs.size() << " increments, T = " << obs.scheme.horizon() << "\n";
}

void run_estimate(const DataOptions& d, const EstimateOptions& o, Target target, const std::filesystem::path& out)
{
  const auto model = LevyModel::parse(d.model);
  if (target == Target::density && !model.has_density(1.0))
    throw Error(ErrorCode::config, d.model + " has no square-integrable density");
  if (target == Target::jump && !model.has_jump_representation())
    throw Error(ErrorCode::config, d.model + " has no jump part");
  if (!(o.kappa > 0.0) || !(o.grid_du > 0.0) || o.grid_umax < 0.0)
    throw Error(ErrorCode::config, "kappa and grid-du must be positive, grid-umax nonnegative");
  const auto designation = parse_weight_designation(o.weights);
  const auto obs = simulate(d);
  const double horizon = obs.scheme.horizon();
  const auto grid = experiment_grid(horizon, o.grid_umax, o.grid_du);
  const auto menu = CutoffMenu::up_to_root(horizon);
  const auto plan = BlockPlan::standard(obs.size());

  BlockedSums sums;
  switch (designation.kind) {
    case WeightScheme::Kind::oracle:
      sums = accumulate_block_sums(obs, oracle_weights(model, grid), grid, plan.offsets());
      break;
    case WeightScheme::Kind::equal:
      sums = accumulate_block_sums(obs, equal_weights(grid), grid, plan.offsets());
      break;
    case WeightScheme::Kind::binned: {
      const auto w = binned_weights(obs, designation.bins, grid);
      for (auto b : w.empty_bins)
        std::cerr << "warning: gap bin " << b << " is empty; its weight is 1\n";
      sums = accumulate_block_sums(obs, w, grid, plan.offsets());
      break;
    }
    case WeightScheme::Kind::iterative: {
      IterativeOptions opts;
      opts.kappa = o.kappa;
      opts.block_offsets.assign(plan.offsets().begin(), plan.offsets().end());
      auto it = iterative_weights_with_sums(obs, grid, opts);
      std::cout << "iterative weights: " << it.weights.iterations << " updates, "
                << (it.weights.converged ? "converged" : "not converged") << "\n";
      sums = std::move(it.sums);
      break;
    }
  }

  const auto cv = target == Target::jump ? cv_cutoff_jump(sums, grid, o.kappa, menu, plan)
                                         : cv_cutoff_density(sums, grid, o.kappa, menu, plan);
  const auto stats = SpectralStatistics::from_sums(sums.total, grid, o.kappa);
  const int m = o.cutoff > 0 ? o.cutoff : cv.m_hat;
  const auto spectrum = target_spectrum(stats, target);
  const auto oracle = oracle_cutoff(spectrum, truth_spectrum(model, target), grid, menu);

  const Kernel sinc(Kernel::Kind::sinc);
  InversionEstimate est = [&] {
    if (target == Target::jump)
      return estimate_g(stats, sinc, 1.0 / m);
    CharFnEstimate cf;
    cf.phi_hat = spectrum;
    return estimate_f(cf, grid, sinc, 1.0 / m);
  }();
  const double risk = target == Target::jump ? l2_risk_jump(est, model) : l2_risk_density(est, model, 1.0);

  std::filesystem::create_directories(out);
  const auto echo = echo_of(d, {{"target", to_string(target)},
                                {"weights", o.weights},
                                {"kappa", format_double(o.kappa)},
                                {"grid_umax", format_double(grid.u_max())},
                                {"grid_du", format_double(grid.du())},
                                {"cutoff", std::to_string(m)}});
  std::vector<double> xs(o.x_points);
  for (std::size_t i = 0; i < xs.size(); ++i)
    xs[i] = o.x_points == 1 ? o.x_min : o.x_min + (o.x_max - o.x_min) * i / (o.x_points - 1);
  write_estimate_csv(out / "estimate.csv", xs, est.evaluate(xs), echo);
  write_loss_csv(out / "loss.csv", cv, echo);
  if (o.spectra) {
    write_spectrum_csv(out / "p_hat.csv", grid, stats.p_hat, Symmetry::anti_hermitian, echo);
    write_spectrum_csv(out / "q_hat.csv", grid, stats.q_hat, Symmetry::hermitian, echo);
    write_spectrum_csv(out / "psi_prime_hat.csv", grid, stats.psi_prime_hat, Symmetry::anti_hermitian, echo);
    if (target == Target::density)
      write_spectrum_csv(out / "phi_hat.csv", grid, spectrum, Symmetry::hermitian, echo);
  }
  std::cout << "T = " << horizon << ", cutoff m = " << m << " (cv " << cv.m_hat << ", oracle "
            << oracle.m_star << "), L2 risk = " << risk << "\n";
}

void run_rates(const std::string& cls_text,
               const std::vector<std::size_t>& ns,
               double gap_upper,
               std::uint64_t seed,
               const std::filesystem::path& out)
{
  const auto cls = parse_smoothness_class(cls_text);
  if (ns.empty() || !(gap_upper > 0.0))
    throw Error(ErrorCode::config, "need at least one n and gap-upper > 0");
  std::vector<RateRow> rows;
  std::string id;
  for (auto n : ns) {
    const auto scheme = draw_uniform_gaps(n, gap_upper, derive_seed(seed, n));
    const auto sol = solve_h(scheme, cls);
    id = sol.equation_id;
    rows.push_back({scheme.horizon(), scheme.delta_max(), sol.h_star, sol.rate_proxy});
    std::cout << "T = " << scheme.horizon() << ": h* = " << sol.h_star << ", residual " << sol.residual << "\n";
  }
  std::filesystem::create_directories(out);
  write_rates_csv(out / "rates.csv", rows,
                  {{"class", cls_text},
                   {"equation", id},
                   {"gap_upper", format_double(gap_upper)},
                   {"seed", std::to_string(seed)}});
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Nonparametric estimation for Levy processes observed at irregular times"};
  app.require_subcommand(1);
  std::string out_dir = "out";

  DataOptions data;
  auto* sim = app.add_subcommand("simulate", "draw a sampling scheme and increments");
  add_data_options(sim, data);
  sim->add_option("--out-dir", out_dir)->capture_default_str();

  EstimateOptions est;
  CLI::App* est_cmds[2];
  const char* est_names[2] = {"estimate-jump", "estimate-density"};
  for (int i = 0; i < 2; ++i) {
    auto* c = app.add_subcommand(est_names[i], i == 0 ? "estimate g(x) = x eta(x) on simulated data"
                                                      : "estimate the density of X_1 on simulated data");
    add_data_options(c, data);
    c->add_option("--weights", est.weights, "oracle | equal | binned:K | iterative")->capture_default_str();
    c->add_option("--kappa", est.kappa)->capture_default_str();
    c->add_option("--grid-umax", est.grid_umax, "0 = max(sqrt(T), 10)")->capture_default_str();
    c->add_option("--grid-du", est.grid_du)->capture_default_str();
    c->add_option("--cutoff", est.cutoff, "fixed sinc cutoff m (0 = cross-validated)");
    c->add_option("--x-min", est.x_min)->capture_default_str();
    c->add_option("--x-max", est.x_max)->capture_default_str();
    c->add_option("--x-points", est.x_points)->capture_default_str();
    c->add_flag("--spectra", est.spectra, "also write the spectral arrays (u,re,im)");
    c->add_option("--out-dir", out_dir)->capture_default_str();
    est_cmds[i] = c;
  }

  ExperimentConfig cfg;
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> overrides;
  auto* table = app.add_subcommand("table", "Monte Carlo risk table (oracle / adaptive / equal weights)");
  table->add_option("--config", config_file, "key=value file; command-line flags take precedence");
  auto add_override = [&](const char* flag, const char* key, const char* help) {
    table->add_option_function<std::string>(
      flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); }, help);
  };
  add_override("--model", "model", "model designation; several separated by ';'");
  add_override("--n", "n", "sample sizes, comma separated");
  add_override("--gap-upper", "gap_upper", "gaps uniform on (0, gap-upper]");
  add_override("--reps", "reps", "replications per cell (default 100)");
  add_override("--seed", "seed", "base seed");
  add_override("--target", "target", "jump | density | jump,density");
  add_override("--kappa", "kappa", "threshold constant (default 1)");
  add_override("--grid-umax", "grid_umax", "0 = max(sqrt(T), 10)");
  add_override("--grid-du", "grid_du", "frequency spacing (default 0.01)");
  add_override("--max-iters", "max_iters", "cap on iterative weight updates (default 50)");
  add_override("--threads", "threads", "worker threads");
  std::string weights_flag;
  table->add_option("--weights", weights_flag, "accepted for symmetry; tables always compare all three pipelines");
  table->add_option("--out-dir", out_dir)->capture_default_str();
  bool quiet = false;
  table->add_flag("--quiet", quiet, "no progress output");

  std::string cls_text = "pol(1)";
  std::vector<std::size_t> rate_ns{100, 1000, 10000};
  double rate_gap = 6.0;
  std::uint64_t rate_seed = 1;
  auto* rates = app.add_subcommand("rates", "solve the bandwidth equation over a ladder of sample sizes");
  rates->add_option("--class", cls_text, "pol(b) | exp(a,c) | cp(a,rho,c_g,C_phi) | local(a,b) | fpol(b,k) | fexp(a,c,k)")
    ->capture_default_str();
  rates->add_option("--n", rate_ns, "sample sizes")->delimiter(',');
  rates->add_option("--gap-upper", rate_gap)->capture_default_str();
  rates->add_option("--seed", rate_seed)->capture_default_str();
  rates->add_option("--out-dir", out_dir)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (*sim) {
      run_simulate(data, out_dir);
    } else if (*est_cmds[0] || *est_cmds[1]) {
      run_estimate(data, est, *est_cmds[0] ? Target::jump : Target::density, out_dir);
    } else if (*table) {
      if (!config_file.empty())
        cfg.load(config_file);
      for (const auto& [k, v] : overrides)
        cfg.set(k, v);
      if (!weights_flag.empty())
        parse_weight_designation(weights_flag);
      cfg.validate();
      const auto report = run_table_experiment(cfg, quiet ? ProgressFn{} : ProgressFn{[](const std::string& s) {
        std::cerr << s << "\n";
      }});
      emit_report(report, out_dir);
      for (const auto& c : report.cells)
        std::cout << c.model << " n=" << c.n << " " << to_string(c.target) << ": r_or " << c.oracle.mean << " (" << c.oracle.se << "), r_ad "
                  << c.adaptive.mean << " (" << c.adaptive.se << "), r_eq " << c.equal.mean << " (" << c.equal.se
                  << ")\n";
    } else if (*rates) {
      run_rates(cls_text, rate_ns, rate_gap, rate_seed, out_dir);
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::config:
      case ErrorCode::invalid_argument:
      case ErrorCode::plan_too_small:
      case ErrorCode::non_positive_gap:
      case ErrorCode::gap_exceeds_delta_max:
        return exit_config;
      default:
        return exit_numeric;
    }
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error (io): " << e.what() << "\n";
    return exit_numeric;
  }
  return 0;
}
