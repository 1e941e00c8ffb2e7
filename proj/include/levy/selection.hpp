#pragma once

#include "levy/grid.hpp"
#include "levy/sampling.hpp"
#include "levy/spectral.hpp"
#include "levy/weight_scheme.hpp"

#include <span>
#include <vector>

namespace levy {

//! Candidate sinc cutoffs m = 1/h: the integers 1 <= m <= sqrt(T).
struct CutoffMenu
{
  std::vector<int> values;

  static CutoffMenu up_to_root(double horizon);
  int max() const { return values.back(); }
};

/*!
 * Leave-p-out subsets built from contiguous blocks of observations:
 * P_j = B_j u ... u B_{j+window-1} for j = 0 .. blocks - window.
 */
class BlockPlan
{
public:
  //! 100 equal blocks (remainder folded into the last) and windows of 10,
  //! so that every subset holds p = n/10 observations. Needs n >= 1000.
  static BlockPlan standard(std::size_t n);

  BlockPlan(std::size_t n, std::size_t blocks, std::size_t window);

  std::size_t block_count() const { return offsets_.size() - 1; }
  std::size_t window() const { return window_; }
  std::size_t subset_count() const { return block_count() - window_ + 1; }
  //! Observation offsets of the blocks, size block_count() + 1.
  std::span<const std::size_t> offsets() const { return offsets_; }

private:
  std::vector<std::size_t> offsets_;
  std::size_t window_;
};

struct CvResult
{
  int m_hat;
  std::vector<int> menu;
  std::vector<double> loss;
};

//! Index of the smallest minimum (ties resolved towards the front).
std::size_t smallest_argmin(std::span<const double> values);

//! 2 * int_0^{u} f for every u = m in the menu, using one cumulative
//! trapezoid over the half grid (nested intervals share their prefix).
std::vector<double> nested_symmetric_integrals(std::span<const double> integrand,
                                               const SpectralGrid& grid,
                                               std::span<const int> menu);

/*!
 * Cross-validated sinc cutoff for the jump target. The subset estimate
 * p_P / q_P is unregularized (only |q_P| < 1e-12 is zeroed); the complement
 * estimate uses the usual threshold.
 */
CvResult cv_cutoff_jump(const BlockedSums& sums,
                        const SpectralGrid& grid,
                        double kappa,
                        const CutoffMenu& menu,
                        const BlockPlan& plan);
CvResult cv_cutoff_jump(const ObservationSet& obs,
                        const WeightScheme& weights,
                        double kappa,
                        const SpectralGrid& grid,
                        const CutoffMenu& menu,
                        const BlockPlan& plan);

//! Cross-validated sinc cutoff for the density target; the subset and
//! complement characteristic functions are exp of the integrated ratios,
//! clamped to modulus <= 1.
CvResult cv_cutoff_density(const BlockedSums& sums,
                           const SpectralGrid& grid,
                           double kappa,
                           const CutoffMenu& menu,
                           const BlockPlan& plan);
CvResult cv_cutoff_density(const ObservationSet& obs,
                           const WeightScheme& weights,
                           double kappa,
                           const SpectralGrid& grid,
                           const CutoffMenu& menu,
                           const BlockPlan& plan);

} // namespace levy
