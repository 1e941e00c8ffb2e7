#pragma once

#include "levy/models.hpp"
#include "levy/spectral.hpp"
#include "levy/weight_scheme.hpp"

#include <optional>

namespace levy {

//! w_j(u) = conj(phi_{delta_j}(u)).
WeightScheme oracle_weights(const LevyModel& model, const SpectralGrid& grid);

//! w_j == 1.
WeightScheme equal_weights(const SpectralGrid& grid);

/*!
 * Binned empirical weights: [0, delta_max] is cut into `bins` equal
 * intervals and every observation receives the conjugate empirical
 * characteristic function of the increments whose gaps share its bin.
 * Bins without observations are recorded in `empty_bins` and hold 1.
 */
WeightScheme binned_weights(const ObservationSet& obs, std::size_t bins, const SpectralGrid& grid);

struct IterativeOptions
{
  double kappa = 1.0;
  std::size_t max_iters = 50;
  //! Block partition for the sums returned with the final weights.
  std::vector<std::size_t> block_offsets;
};

struct IterativeResult
{
  WeightScheme weights;
  //! Sums built with the returned weights (blocked as requested).
  BlockedSums sums;
  //! max_j ||w_{j,m-1} - w_{j,m}||^2 for every completed update.
  std::vector<double> max_distances;
};

/*!
 * Data-driven weights: start from w_j = 1, estimate Psi with the current
 * weights, set w_j = conj(exp(delta_j Psi_hat)) (modulus clamped at 1) and
 * repeat until every weight moved by at most 1/T in squared L2 distance on
 * [-sqrt(T), sqrt(T)], or max_iters updates were made.
 *
 * `equal_sums`, when given, must be the sums for w_j = 1 and replaces the
 * first build.
 */
IterativeResult iterative_weights_with_sums(const ObservationSet& obs,
                                            const SpectralGrid& grid,
                                            const IterativeOptions& options,
                                            const SpectralSums* equal_sums = nullptr);

WeightScheme iterative_weights(const ObservationSet& obs,
                               const SpectralGrid& grid,
                               const IterativeOptions& options = {});

//! conj(psi_hat) with the real part clamped at 0, i.e. the log of
//! conj(exp(delta * psi_hat)) restricted to modulus <= 1 for every delta > 0.
std::vector<cdouble> clamped_log_weight(std::span<const cdouble> psi_hat);

//! Parses `oracle`, `equal`, `binned(K)` / `binned:K`, `iterative`.
struct WeightDesignation
{
  WeightScheme::Kind kind;
  std::size_t bins = 0;
};
WeightDesignation parse_weight_designation(const std::string& text);

} // namespace levy
