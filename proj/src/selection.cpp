#include "levy/selection.hpp"

#include "levy/error.hpp"

#include <cmath>
#include <string>

namespace levy {

namespace {

enum class Target
{
  jump,
  density,
};

void check_menu(const CutoffMenu& menu, const SpectralGrid& grid)
{
  if (menu.values.empty())
    throw Error(ErrorCode::invalid_argument, "empty cutoff menu");
  if (menu.max() > grid.u_max() * (1.0 + 1e-12))
    throw Error(ErrorCode::grid_too_narrow, "grid does not cover the largest cutoff");
}

// Estimates on the half grid restricted to nodes 0..k_end.
std::vector<cdouble> subset_estimate(const SpectralSums& sums,
                                     std::size_t k_end,
                                     const SpectralGrid& grid,
                                     Target target,
                                     const double* kappa)
{
  std::vector<cdouble> p(sums.p.begin(), sums.p.begin() + k_end + 1);
  std::vector<cdouble> q(sums.q.begin(), sums.q.begin() + k_end + 1);
  std::vector<cdouble> ratio;
  if (kappa == nullptr) {
    ratio = unregularized_ratio(p, q);
  } else {
    std::vector<double> sigma(k_end + 1);
    for (std::size_t k = 0; k <= k_end; ++k)
      sigma[k] = std::sqrt(std::max(sums.sigma2[k], 0.0));
    ratio = psi_prime_hat(p, regularize_inverse(q, sigma, *kappa));
  }
  if (target == Target::jump)
    return ratio;
  return clamp_phi(integrate_psi(ratio, grid)).phi_hat;
}

CvResult cross_validate(const BlockedSums& sums,
                        const SpectralGrid& grid,
                        double kappa,
                        const CutoffMenu& menu,
                        const BlockPlan& plan,
                        Target target)
{
  check_menu(menu, grid);
  if (sums.blocks.size() != plan.block_count())
    throw Error(ErrorCode::length_mismatch, "block sums do not match the plan");
  const std::size_t k_end = grid.index_at_or_below(menu.max());
  const std::size_t nodes = sums.total.p.size();

  const auto full = subset_estimate(sums.total, k_end, grid, target, &kappa);
  std::vector<double> cross(k_end + 1, 0.0);
  for (std::size_t j = 0; j < plan.subset_count(); ++j) {
    SpectralSums inside(nodes);
    for (std::size_t b = j; b < j + plan.window(); ++b)
      inside += sums.blocks[b];
    SpectralSums outside = sums.total;
    outside -= inside;
    const auto est_in = subset_estimate(inside, k_end, grid, target, nullptr);
    const auto est_out = subset_estimate(outside, k_end, grid, target, &kappa);
    for (std::size_t k = 0; k <= k_end; ++k)
      cross[k] += (est_in[k] * std::conj(est_out[k])).real();
  }
  const double subsets = static_cast<double>(plan.subset_count());
  std::vector<double> integrand(k_end + 1);
  for (std::size_t k = 0; k <= k_end; ++k)
    integrand[k] = std::norm(full[k]) - 2.0 * cross[k] / subsets;

  CvResult result;
  result.menu = menu.values;
  result.loss = nested_symmetric_integrals(integrand, grid, menu.values);
  result.m_hat = menu.values[smallest_argmin(result.loss)];
  return result;
}

} // namespace

CutoffMenu CutoffMenu::up_to_root(double horizon)
{
  const double root = std::sqrt(horizon);
  CutoffMenu menu;
  for (int m = 1; m <= root + 1e-12; ++m)
    menu.values.push_back(m);
  if (menu.values.empty())
    throw Error(ErrorCode::invalid_argument, "cutoff menu is empty for T < 1");
  return menu;
}

BlockPlan BlockPlan::standard(std::size_t n)
{
  if (n < 1000)
    throw Error(ErrorCode::plan_too_small,
                "cross validation needs n >= 1000, got " + std::to_string(n));
  return BlockPlan(n, 100, 10);
}

BlockPlan::BlockPlan(std::size_t n, std::size_t blocks, std::size_t window)
  : window_(window)
{
  if (window == 0 || blocks < window)
    throw Error(ErrorCode::plan_too_small, "need at least `window` blocks");
  if (n < blocks)
    throw Error(ErrorCode::plan_too_small, "fewer observations than blocks");
  const std::size_t size = n / blocks;
  offsets_.resize(blocks + 1);
  for (std::size_t b = 0; b < blocks; ++b)
    offsets_[b] = b * size;
  offsets_[blocks] = n;
}

std::size_t smallest_argmin(std::span<const double> values)
{
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[best])
      best = i;
  return best;
}

std::vector<double> nested_symmetric_integrals(std::span<const double> integrand,
                                               const SpectralGrid& grid,
                                               std::span<const int> menu)
{
  std::vector<double> out;
  out.reserve(menu.size());
  double acc = 0.0;
  std::size_t reached = 0;
  for (int m : menu) {
    const std::size_t k = grid.index_at_or_below(m);
    if (k >= integrand.size())
      throw Error(ErrorCode::grid_too_narrow, "integrand does not reach the cutoff");
    if (k < reached)
      throw Error(ErrorCode::invalid_argument, "cutoff menu must be increasing");
    for (; reached < k; ++reached)
      acc += 0.5 * grid.du() * (integrand[reached] + integrand[reached + 1]);
    out.push_back(2.0 * acc);
  }
  return out;
}

CvResult cv_cutoff_jump(const BlockedSums& sums,
                        const SpectralGrid& grid,
                        double kappa,
                        const CutoffMenu& menu,
                        const BlockPlan& plan)
{
  return cross_validate(sums, grid, kappa, menu, plan, Target::jump);
}

CvResult cv_cutoff_jump(const ObservationSet& obs,
                        const WeightScheme& weights,
                        double kappa,
                        const SpectralGrid& grid,
                        const CutoffMenu& menu,
                        const BlockPlan& plan)
{
  return cv_cutoff_jump(
    accumulate_block_sums(obs, weights, grid, plan.offsets()), grid, kappa, menu, plan);
}

CvResult cv_cutoff_density(const BlockedSums& sums,
                           const SpectralGrid& grid,
                           double kappa,
                           const CutoffMenu& menu,
                           const BlockPlan& plan)
{
  return cross_validate(sums, grid, kappa, menu, plan, Target::density);
}

CvResult cv_cutoff_density(const ObservationSet& obs,
                           const WeightScheme& weights,
                           double kappa,
                           const SpectralGrid& grid,
                           const CutoffMenu& menu,
                           const BlockPlan& plan)
{
  return cv_cutoff_density(
    accumulate_block_sums(obs, weights, grid, plan.offsets()), grid, kappa, menu, plan);
}

} // namespace levy
