#include "levy/weights.hpp"

#include "levy/error.hpp"
#include "spectral_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <regex>

namespace levy {

WeightScheme WeightScheme::exponential(Kind kind, std::vector<cdouble> log_weight)
{
  WeightScheme w;
  w.kind_ = kind;
  w.log_weight_ = std::move(log_weight);
  return w;
}

WeightScheme WeightScheme::tabulated(Kind kind,
                                     std::vector<std::vector<cdouble>> tables,
                                     std::vector<std::size_t> group)
{
  if (tables.empty())
    throw Error(ErrorCode::invalid_argument, "tabulated weights need at least one table");
  for (const auto& t : tables)
    if (t.size() != tables.front().size())
      throw Error(ErrorCode::length_mismatch, "weight tables differ in length");
  for (auto g : group)
    if (g >= tables.size())
      throw Error(ErrorCode::invalid_argument, "weight group index out of range");
  WeightScheme w;
  w.kind_ = kind;
  w.tables_ = std::move(tables);
  w.group_ = std::move(group);
  return w;
}

std::size_t WeightScheme::half_size() const
{
  return is_exponential() ? log_weight_.size() : tables_.front().size();
}

WeightScheme WeightScheme::scaled(double factor) const
{
  if (!(factor > 0.0))
    throw Error(ErrorCode::invalid_argument, "weight scale must be positive");
  WeightScheme w = *this;
  w.scale_ *= factor;
  return w;
}

std::string to_string(WeightScheme::Kind kind)
{
  switch (kind) {
    case WeightScheme::Kind::oracle: return "oracle";
    case WeightScheme::Kind::equal: return "equal";
    case WeightScheme::Kind::binned: return "binned";
    case WeightScheme::Kind::iterative: return "iterative";
  }
  return "unknown";
}

WeightScheme oracle_weights(const LevyModel& model, const SpectralGrid& grid)
{
  std::vector<cdouble> log_w(grid.half_size());
  for (std::size_t k = 0; k < log_w.size(); ++k)
    log_w[k] = std::conj(model.char_exponent(grid.node(k)));
  return WeightScheme::exponential(WeightScheme::Kind::oracle, std::move(log_w));
}

WeightScheme equal_weights(const SpectralGrid& grid)
{
  return WeightScheme::exponential(WeightScheme::Kind::equal,
                                   std::vector<cdouble>(grid.half_size(), 0.0));
}

WeightScheme binned_weights(const ObservationSet& obs, std::size_t bins, const SpectralGrid& grid)
{
  if (bins == 0)
    throw Error(ErrorCode::invalid_argument, "need at least one bin");
  const std::size_t n = obs.size();
  const double dmax = obs.scheme.delta_max();
  std::vector<std::size_t> group(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto b = static_cast<std::size_t>(std::floor(obs.scheme.delta(j) / dmax * bins));
    group[j] = std::min(b, bins - 1);
  }

  // Sort by bin and reuse the block kernel with unit gaps and unit weights:
  // its q block sums are then sum_{l in bin} e^{iuZ_l}.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return group[a] < group[b]; });
  std::vector<double> z(n);
  std::vector<std::size_t> offsets(bins + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = obs.increments[order[i]];
    ++offsets[group[order[i]] + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  ObservationSet sorted(SamplingScheme::from_gaps(std::vector<double>(n, 1.0), 1.0), std::move(z));
  const auto sums = accumulate_block_sums(sorted, equal_weights(grid), grid, offsets);

  std::vector<std::vector<cdouble>> tables(bins);
  std::vector<std::size_t> empty;
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t count = offsets[b + 1] - offsets[b];
    auto& table = tables[b];
    if (count == 0) {
      table.assign(grid.half_size(), 1.0);
      empty.push_back(b);
      continue;
    }
    table.resize(grid.half_size());
    for (std::size_t k = 0; k < table.size(); ++k) {
      cdouble w = std::conj(sums.blocks[b].q[k]) / static_cast<double>(count);
      const double modulus = std::abs(w);
      if (modulus > 1.0)
        w /= modulus;
      table[k] = w;
    }
    table[0] = 1.0;
  }
  auto scheme = WeightScheme::tabulated(WeightScheme::Kind::binned, std::move(tables), std::move(group));
  scheme.empty_bins = std::move(empty);
  return scheme;
}

std::vector<cdouble> clamped_log_weight(std::span<const cdouble> psi_hat)
{
  std::vector<cdouble> log_w(psi_hat.size());
  for (std::size_t k = 0; k < psi_hat.size(); ++k)
    log_w[k] = cdouble(std::min(psi_hat[k].real(), 0.0), -psi_hat[k].imag());
  return log_w;
}

IterativeResult iterative_weights_with_sums(const ObservationSet& obs,
                                            const SpectralGrid& grid,
                                            const IterativeOptions& options,
                                            const SpectralSums* equal_sums)
{
  const double horizon = obs.scheme.horizon();
  const double root_t = std::sqrt(horizon);
  if (grid.u_max() + 1e-9 < root_t)
    throw Error(ErrorCode::grid_too_narrow, "grid must cover [-sqrt(T), sqrt(T)]");
  std::vector<std::size_t> offsets = options.block_offsets;
  if (offsets.empty())
    offsets = {0, obs.size()};
  const std::size_t k_end = grid.index_at_or_below(root_t);
  const double tolerance = 1.0 / horizon;

  IterativeResult result{equal_weights(grid), BlockedSums{SpectralSums(0), {}}, {}};
  result.weights.psi_builds = 0;
  result.weights.converged = false;

  auto current = std::vector<cdouble>(grid.half_size(), 0.0);
  auto build = [&](const std::vector<cdouble>& log_w) {
    ++result.weights.psi_builds;
    return accumulate_block_sums(
      obs, WeightScheme::exponential(WeightScheme::Kind::iterative, log_w), grid, offsets);
  };

  // ||w_0 - w_1||^2 with w_0 = 0 and w_1 = 1 is the interval length.
  if (2.0 * grid.node(k_end) <= tolerance) {
    result.sums = build(current);
    result.weights.converged = true;
    return result;
  }

  std::vector<double> distances(obs.size());
  std::size_t iterations = 0;
  for (;;) {
    SpectralSums sums(0);
    if (iterations == 0 && equal_sums != nullptr) {
      ++result.weights.psi_builds;
      sums = *equal_sums;
    } else {
      sums = build(current).total;
    }
    const auto stats = SpectralStatistics::from_sums(sums, grid, options.kappa);
    auto next = clamped_log_weight(integrate_psi(stats.psi_prime_hat, grid));
    ++iterations;

    detail::weight_distances(obs.scheme.deltas(), current, next, grid.du(), k_end, distances);
    const double worst = *std::max_element(distances.begin(), distances.end());
    result.max_distances.push_back(worst);
    current = std::move(next);
    const bool done = worst <= tolerance;
    if (done || iterations >= options.max_iters) {
      result.weights.converged = done;
      break;
    }
  }
  result.sums = build(current);
  result.weights.iterations = iterations;
  const auto builds = result.weights.psi_builds;
  const bool converged = result.weights.converged;
  result.weights = WeightScheme::exponential(WeightScheme::Kind::iterative, std::move(current));
  result.weights.iterations = iterations;
  result.weights.psi_builds = builds;
  result.weights.converged = converged;
  return result;
}

WeightScheme iterative_weights(const ObservationSet& obs,
                               const SpectralGrid& grid,
                               const IterativeOptions& options)
{
  return iterative_weights_with_sums(obs, grid, options).weights;
}

WeightDesignation parse_weight_designation(const std::string& text)
{
  if (text == "oracle")
    return {WeightScheme::Kind::oracle};
  if (text == "equal")
    return {WeightScheme::Kind::equal};
  if (text == "iterative")
    return {WeightScheme::Kind::iterative};
  static const std::regex re(R"(^binned[:(]\s*(\d+)\s*\)?$)");
  std::smatch m;
  if (std::regex_match(text, m, re)) {
    const auto bins = std::stoul(m[1]);
    if (bins > 0)
      return {WeightScheme::Kind::binned, bins};
  }
  throw Error(ErrorCode::config, "unknown weight scheme '" + text + "'");
}

} // namespace levy
