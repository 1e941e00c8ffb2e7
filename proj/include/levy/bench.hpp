#pragma once

#include "levy/csv.hpp"
#include "levy/models.hpp"
#include "levy/selection.hpp"
#include "levy/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace levy {

enum class Target
{
  jump,
  density,
};

std::string to_string(Target t);
Target parse_target(const std::string& text);

/*!
 * One Monte Carlo table experiment: every (model, n) pair is a cell with
 * `reps` replications. Set with `set(key, value)` from a key=value file and
 * command-line overrides, then `validate()`.
 */
struct ExperimentConfig
{
  std::vector<std::string> models{"gamma(3,2)"};
  std::vector<std::size_t> ns{1000};
  double gap_upper = 6.0;
  std::size_t reps = 100;
  std::uint64_t seed = 1;
  //! Targets share the simulated data and the weight computations.
  std::vector<Target> targets{Target::jump};
  double kappa = 1.0;
  //! 0 selects max(sqrt(T), 10) per replication.
  double grid_umax = 0.0;
  double grid_du = 0.01;
  std::size_t max_iters = 50;
  std::size_t threads = 1;

  //! Keys: model (several separated by ';'), n (comma list), gap_upper,
  //! reps, seed, target (comma list), kappa, grid_umax, grid_du, max_iters,
  //! threads.
  //! Throws Error(config).
  void set(const std::string& key, const std::string& value);
  //! `key=value` lines; '#' starts a comment.
  void load(const std::filesystem::path& path);
  //! Throws Error(config) on an invalid combination.
  void validate() const;
  ConfigEcho echo() const;
};

//! Grid used for one data set: u_max = max(sqrt(T), 10) unless overridden.
SpectralGrid experiment_grid(double horizon, double grid_umax, double grid_du);

//! Target spectrum before smoothing: Psi'_hat / i (jump) or the clamped
//! phi_hat (density), on the half grid.
std::vector<cdouble> target_spectrum(const SpectralStatistics& stats, Target target);
//! Ground truth matching target_spectrum: F g or phi_1.
std::function<cdouble(double)> truth_spectrum(const LevyModel& model, Target target);

struct OracleCutoff
{
  int m_star;
  //! int_{-m}^{m} |S_hat|^2 - 2 Re S_hat conj(S) for every menu entry.
  std::vector<double> loss;
};

//! Smallest minimizer over the menu of the true spectral loss; uses the
//! model, so it is a benchmarking instrument and not an estimator.
OracleCutoff oracle_cutoff(std::span<const cdouble> spectrum,
                           const std::function<cdouble(double)>& truth,
                           const SpectralGrid& grid,
                           const CutoffMenu& menu);

//! L2 risk of the sinc estimate with cutoff m built from `stats`.
double sinc_risk(const SpectralStatistics& stats, const LevyModel& model, Target target, int m);

struct ReplicationResult
{
  std::size_t rep = 0;
  double horizon = 0.0;
  double r_or = 0.0, r_ad = 0.0, r_eq = 0.0;
  int m_or = 0, m_ad = 0, m_eq = 0;
  //! Oracle cutoff of the adaptive pipeline's own estimate.
  int m_star_ad = 0;
  std::size_t iterations = 0;
  bool converged = true;
};

//! Seed of replication `rep` in the cell (model, n); independent of the
//! target and of the other cells in the run.
std::uint64_t replication_seed(std::uint64_t seed, const std::string& model, std::size_t n, std::size_t rep);

//! Oracle weights + oracle cutoff, iterative weights + CV cutoff and equal
//! weights + oracle cutoff on one simulated data set, for each target.
std::vector<ReplicationResult> run_replication(const LevyModel& model,
                                               std::size_t n,
                                               std::span<const Target> targets,
                                               const ExperimentConfig& config,
                                               std::uint64_t rep_seed);

struct Aggregate
{
  double mean = 0.0;
  double se = 0.0;
};

struct CellReport
{
  std::string model;
  std::size_t n = 0;
  Target target = Target::jump;
  std::vector<ReplicationResult> reps;
  Aggregate oracle, adaptive, equal;
  //! Wall time of the (model, n) pair, shared by its targets.
  double seconds = 0.0;
};

struct RiskReport
{
  ExperimentConfig config;
  std::vector<CellReport> cells;
};

//! Mean and standard error (sample sd / sqrt(count)).
Aggregate aggregate(std::span<const double> values);

using ProgressFn = std::function<void(const std::string&)>;

//! Runs every (model, n, target) cell; replications are spread over config.threads workers and
//! reduced in index order, so the report does not depend on scheduling.
RiskReport run_table_experiment(const ExperimentConfig& config, const ProgressFn& progress = {});

//! Writes summary.csv, per_rep.csv, config.echo and runtime.csv into `dir`.
void emit_report(const RiskReport& report, const std::filesystem::path& dir);

} // namespace levy
