#include "levy/bench.hpp"

#include "levy/error.hpp"
#include "levy/estimators.hpp"
#include "levy/rng.hpp"
#include "levy/weights.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace levy {

namespace {

[[noreturn]] void config_error(const std::string& what)
{
  throw Error(ErrorCode::config, what);
}

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty())
      out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v)
{
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size())
      throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    config_error(key + ": '" + v + "' is not a number");
  }
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v)
{
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] == '-')
      throw std::invalid_argument(v);
    const auto x = std::stoull(v, &used);
    if (used != v.size())
      throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    config_error(key + ": '" + v + "' is not a nonnegative integer");
  }
}

std::string join(const std::vector<std::string>& items, const char* sep)
{
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i)
    out += (i ? sep : "") + items[i];
  return out;
}

// FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t fnv1a(const std::string& s)
{
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

} // namespace

std::string to_string(Target t)
{
  return t == Target::jump ? "jump" : "density";
}

Target parse_target(const std::string& text)
{
  if (text == "jump")
    return Target::jump;
  if (text == "density")
    return Target::density;
  config_error("target must be jump or density, got '" + text + "'");
}

void ExperimentConfig::set(const std::string& key, const std::string& raw)
{
  const std::string value = trim(raw);
  if (key == "model") {
    models = split(value, ';');
  } else if (key == "n") {
    ns.clear();
    for (const auto& item : split(value, ','))
      ns.push_back(to_unsigned(key, item));
  } else if (key == "gap_upper") {
    gap_upper = to_double(key, value);
  } else if (key == "reps") {
    reps = to_unsigned(key, value);
  } else if (key == "seed") {
    seed = to_unsigned(key, value);
  } else if (key == "target") {
    targets.clear();
    for (const auto& item : split(value, ','))
      targets.push_back(parse_target(item));
  } else if (key == "kappa") {
    kappa = to_double(key, value);
  } else if (key == "grid_umax") {
    grid_umax = to_double(key, value);
  } else if (key == "grid_du") {
    grid_du = to_double(key, value);
  } else if (key == "max_iters") {
    max_iters = to_unsigned(key, value);
  } else if (key == "threads") {
    threads = to_unsigned(key, value);
  } else {
    config_error("unknown configuration key '" + key + "'");
  }
}

void ExperimentConfig::load(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    config_error("cannot read configuration file " + path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      config_error(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void ExperimentConfig::validate() const
{
  if (models.empty())
    config_error("no model given");
  for (const auto& m : models) {
    LevyModel model = [&] {
      try {
        return LevyModel::parse(m);
      } catch (const Error& e) {
        config_error(e.what());
      }
    }();
    for (auto target : targets) {
      if (target == Target::jump && !model.has_jump_representation())
        config_error(m + " has no jump part to estimate");
      if (target == Target::density && !model.has_density(1.0))
        config_error(m + " has no square-integrable density at time 1");
    }
  }
  if (targets.empty())
    config_error("no target given");
  if (ns.empty())
    config_error("no sample size given");
  for (auto n : ns)
    if (n < 1000)
      config_error("n = " + std::to_string(n) + ": cross-validation needs n >= 1000");
  if (!(gap_upper > 0.0))
    config_error("gap_upper must be positive");
  if (reps < 1)
    config_error("reps must be at least 1");
  if (!(kappa > 0.0))
    config_error("kappa must be positive");
  if (!(grid_du > 0.0))
    config_error("grid_du must be positive");
  if (grid_umax < 0.0)
    config_error("grid_umax must be nonnegative (0 = automatic)");
  if (max_iters < 1)
    config_error("max_iters must be at least 1");
  if (threads < 1)
    config_error("threads must be at least 1");
}

ConfigEcho ExperimentConfig::echo() const
{
  std::vector<std::string> n_text, target_text;
  for (auto n : ns)
    n_text.push_back(std::to_string(n));
  for (auto t : targets)
    target_text.push_back(to_string(t));
  return {
    {"model", join(models, ";")},
    {"n", join(n_text, ",")},
    {"gap_upper", format_double(gap_upper)},
    {"reps", std::to_string(reps)},
    {"seed", std::to_string(seed)},
    {"target", join(target_text, ",")},
    {"kappa", format_double(kappa)},
    {"grid_umax", format_double(grid_umax)},
    {"grid_du", format_double(grid_du)},
    {"max_iters", std::to_string(max_iters)},
    {"threads", std::to_string(threads)},
  };
}

SpectralGrid experiment_grid(double horizon, double grid_umax, double grid_du)
{
  const double u_max = grid_umax > 0.0 ? grid_umax : std::max(std::sqrt(horizon), 10.0);
  return SpectralGrid::covering(u_max, grid_du);
}

std::vector<cdouble> target_spectrum(const SpectralStatistics& stats, Target target)
{
  if (target == Target::density)
    return clamp_phi(integrate_psi(stats.psi_prime_hat, stats.grid)).phi_hat;
  std::vector<cdouble> out(stats.psi_prime_hat.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = cdouble(0.0, -1.0) * stats.psi_prime_hat[k];
  return out;
}

std::function<cdouble(double)> truth_spectrum(const LevyModel& model, Target target)
{
  if (target == Target::jump)
    return [model](double u) { return model.fourier_g(u); };
  return [model](double u) { return model.char_function(1.0, u); };
}

OracleCutoff oracle_cutoff(std::span<const cdouble> spectrum,
                           const std::function<cdouble(double)>& truth,
                           const SpectralGrid& grid,
                           const CutoffMenu& menu)
{
  if (menu.values.empty())
    throw Error(ErrorCode::invalid_argument, "empty cutoff menu");
  const std::size_t k_end = grid.index_at_or_below(menu.max());
  if (k_end >= spectrum.size())
    throw Error(ErrorCode::grid_too_narrow, "grid does not cover the largest cutoff");
  std::vector<double> integrand(k_end + 1);
  for (std::size_t k = 0; k <= k_end; ++k) {
    const cdouble s = spectrum[k];
    integrand[k] = std::norm(s) - 2.0 * (s * std::conj(truth(grid.node(k)))).real();
  }
  OracleCutoff out;
  out.loss = nested_symmetric_integrals(integrand, grid, menu.values);
  out.m_star = menu.values[smallest_argmin(out.loss)];
  return out;
}

double sinc_risk(const SpectralStatistics& stats, const LevyModel& model, Target target, int m)
{
  const Kernel sinc(Kernel::Kind::sinc);
  const double h = 1.0 / m;
  if (target == Target::jump)
    return l2_risk_jump(estimate_g(stats, sinc, h), model);
  CharFnEstimate charfn;
  charfn.phi_hat = target_spectrum(stats, target);
  return l2_risk_density(estimate_f(charfn, stats.grid, sinc, h), model, 1.0);
}

std::uint64_t replication_seed(std::uint64_t seed, const std::string& model, std::size_t n, std::size_t rep)
{
  return derive_seed(derive_seed(seed, fnv1a(model + "|" + std::to_string(n))), rep);
}

std::vector<ReplicationResult> run_replication(const LevyModel& model,
                                               std::size_t n,
                                               std::span<const Target> targets,
                                               const ExperimentConfig& config,
                                               std::uint64_t rep_seed)
{
  const auto scheme = draw_uniform_gaps(n, config.gap_upper, derive_seed(rep_seed, 1));
  const auto obs = model.sample_increments(scheme, derive_seed(rep_seed, 2));
  const double horizon = scheme.horizon();
  const auto grid = experiment_grid(horizon, config.grid_umax, config.grid_du);
  const auto menu = CutoffMenu::up_to_root(horizon);
  const auto plan = BlockPlan::standard(n);

  std::vector<ReplicationResult> out(targets.size());
  for (auto& r : out)
    r.horizon = horizon;

  // Oracle cutoff and its risk for one pipeline and every target.
  auto with_oracle_cutoff = [&](const SpectralStatistics& stats, auto&& store) {
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const int m = oracle_cutoff(target_spectrum(stats, targets[t]), truth_spectrum(model, targets[t]), grid, menu)
                      .m_star;
      store(out[t], m, sinc_risk(stats, model, targets[t], m));
    }
  };

  {
    const auto sums = accumulate_sums(obs, oracle_weights(model, grid), grid);
    with_oracle_cutoff(SpectralStatistics::from_sums(sums, grid, config.kappa),
                       [](ReplicationResult& r, int m, double risk) {
                         r.m_or = m;
                         r.r_or = risk;
                       });
  }

  const auto equal_sums = accumulate_sums(obs, equal_weights(grid), grid);
  with_oracle_cutoff(SpectralStatistics::from_sums(equal_sums, grid, config.kappa),
                     [](ReplicationResult& r, int m, double risk) {
                       r.m_eq = m;
                       r.r_eq = risk;
                     });

  IterativeOptions opts;
  opts.kappa = config.kappa;
  opts.max_iters = config.max_iters;
  opts.block_offsets.assign(plan.offsets().begin(), plan.offsets().end());
  const auto it = iterative_weights_with_sums(obs, grid, opts, &equal_sums);
  const auto stats = SpectralStatistics::from_sums(it.sums.total, grid, config.kappa);
  with_oracle_cutoff(stats, [](ReplicationResult& r, int m, double) { r.m_star_ad = m; });
  for (std::size_t t = 0; t < targets.size(); ++t) {
    auto& r = out[t];
    r.iterations = it.weights.iterations;
    r.converged = it.weights.converged;
    const auto cv = targets[t] == Target::jump ? cv_cutoff_jump(it.sums, grid, config.kappa, menu, plan)
                                               : cv_cutoff_density(it.sums, grid, config.kappa, menu, plan);
    r.m_ad = cv.m_hat;
    r.r_ad = sinc_risk(stats, model, targets[t], r.m_ad);
  }
  return out;
}

Aggregate aggregate(std::span<const double> values)
{
  // Welford in index order.
  double mean = 0.0, m2 = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    ++count;
    const double d = v - mean;
    mean += d / count;
    m2 += d * (v - mean);
  }
  Aggregate a;
  a.mean = mean;
  a.se = count > 1 ? std::sqrt(m2 / (count - 1) / count) : 0.0;
  return a;
}

RiskReport run_table_experiment(const ExperimentConfig& config, const ProgressFn& progress)
{
  config.validate();
  RiskReport report{config, {}};
  const std::size_t n_targets = config.targets.size();
  for (const auto& designation : config.models) {
    const auto model = LevyModel::parse(designation);
    for (auto n : config.ns) {
      const auto start = std::chrono::steady_clock::now();
      // results[rep][target]
      std::vector<std::vector<ReplicationResult>> results(config.reps);

      std::atomic<std::size_t> next{0};
      std::mutex mu;
      std::exception_ptr failure;
      std::size_t done = 0;
      const std::string label = designation + " n=" + std::to_string(n);
      auto worker = [&] {
        for (;;) {
          const std::size_t rep = next.fetch_add(1);
          if (rep >= config.reps)
            return;
          {
            std::lock_guard lock(mu);
            if (failure)
              return;
          }
          try {
            auto r = run_replication(model, n, config.targets, config,
                                     replication_seed(config.seed, designation, n, rep));
            for (auto& x : r)
              x.rep = rep;
            results[rep] = std::move(r);
            std::lock_guard lock(mu);
            ++done;
            if (progress)
              progress(label + ": replication " + std::to_string(rep + 1) + " (" + std::to_string(done) + "/" +
                       std::to_string(config.reps) + ")");
          } catch (const Error& e) {
            std::lock_guard lock(mu);
            if (!failure)
              failure = std::make_exception_ptr(
                Error(e.code(), label + " replication " + std::to_string(rep) + ": " + e.what()));
          } catch (...) {
            std::lock_guard lock(mu);
            if (!failure)
              failure = std::current_exception();
          }
        }
      };
      const std::size_t workers = std::min(config.threads, config.reps);
      if (workers <= 1) {
        worker();
      } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < workers; ++t)
          pool.emplace_back(worker);
        for (auto& t : pool)
          t.join();
      }
      if (failure)
        std::rethrow_exception(failure);
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

      for (std::size_t t = 0; t < n_targets; ++t) {
        CellReport cell;
        cell.model = designation;
        cell.n = n;
        cell.target = config.targets[t];
        cell.seconds = seconds;
        std::vector<double> v_or, v_ad, v_eq;
        for (const auto& per_target : results) {
          cell.reps.push_back(per_target[t]);
          v_or.push_back(per_target[t].r_or);
          v_ad.push_back(per_target[t].r_ad);
          v_eq.push_back(per_target[t].r_eq);
        }
        cell.oracle = aggregate(v_or);
        cell.adaptive = aggregate(v_ad);
        cell.equal = aggregate(v_eq);
        report.cells.push_back(std::move(cell));
      }
    }
  }
  return report;
}

void emit_report(const RiskReport& report, const std::filesystem::path& dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());
  const auto& cfg = report.config;
  const auto echo = cfg.echo();

  {
    CsvWriter w(dir / "summary.csv",
                {"model", "n", "gap_upper", "target", "r_or", "se_or", "r_ad", "se_ad", "r_eq", "se_eq", "reps",
                 "seed"},
                echo);
    for (const auto& c : report.cells) {
      w.cell(c.model).cell(c.n).cell(cfg.gap_upper).cell(to_string(c.target));
      w.cell(c.oracle.mean).cell(c.oracle.se);
      w.cell(c.adaptive.mean).cell(c.adaptive.se);
      w.cell(c.equal.mean).cell(c.equal.se);
      w.cell(c.reps.size()).cell(static_cast<unsigned long long>(cfg.seed));
      w.end_row();
    }
    w.close();
  }
  {
    CsvWriter w(dir / "per_rep.csv",
                {"model", "n", "gap_upper", "target", "rep", "T", "r_or", "r_ad", "r_eq", "m_or", "m_ad", "m_eq",
                 "m_star_ad", "iterations", "converged"},
                echo);
    for (const auto& c : report.cells) {
      for (const auto& r : c.reps) {
        w.cell(c.model).cell(c.n).cell(cfg.gap_upper).cell(to_string(c.target)).cell(r.rep).cell(r.horizon);
        w.cell(r.r_or).cell(r.r_ad).cell(r.r_eq);
        w.cell(r.m_or).cell(r.m_ad).cell(r.m_eq).cell(r.m_star_ad);
        w.cell(r.iterations).cell(r.converged ? 1 : 0);
        w.end_row();
      }
    }
    w.close();
  }
  {
    CsvWriter w(dir / "runtime.csv", {"model", "n", "target", "seconds"}, echo);
    for (const auto& c : report.cells) {
      w.cell(c.model).cell(c.n).cell(to_string(c.target)).cell(c.seconds);
      w.end_row();
    }
    w.close();
  }
  std::ofstream out(dir / "config.echo", std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(ErrorCode::io, "cannot open " + (dir / "config.echo").string() + " for writing");
  for (const auto& [k, v] : echo)
    out << k << '=' << v << '\n';
  out.flush();
  if (!out)
    throw Error(ErrorCode::io, "write failed on " + (dir / "config.echo").string());
}

} // namespace levy
