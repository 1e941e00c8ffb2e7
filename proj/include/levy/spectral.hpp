#pragma once

#include "levy/grid.hpp"
#include "levy/sampling.hpp"
#include "levy/weight_scheme.hpp"

#include <span>
#include <vector>

namespace levy {

//! Raw weighted sums on the half grid:
//!   p = sum_j w_j i Z_j e^{iuZ_j},  q = sum_j delta_j w_j e^{iuZ_j},
//!   sigma2 = sum_j delta_j^2 |w_j|^2.
struct SpectralSums
{
  std::vector<cdouble> p;
  std::vector<cdouble> q;
  std::vector<double> sigma2;

  explicit SpectralSums(std::size_t half_size = 0)
    : p(half_size)
    , q(half_size)
    , sigma2(half_size)
  {
  }

  SpectralSums& operator+=(const SpectralSums& other);
  SpectralSums& operator-=(const SpectralSums& other);
};

//! Sums over the whole sample and over contiguous index blocks
//! [offsets[b], offsets[b+1]).
struct BlockedSums
{
  SpectralSums total;
  std::vector<SpectralSums> blocks;
};

SpectralSums accumulate_sums(const ObservationSet& obs,
                             const WeightScheme& weights,
                             const SpectralGrid& grid);

BlockedSums accumulate_block_sums(const ObservationSet& obs,
                                  const WeightScheme& weights,
                                  const SpectralGrid& grid,
                                  std::span<const std::size_t> offsets);

std::vector<cdouble> compute_p_hat(const ObservationSet& obs,
                                   const WeightScheme& weights,
                                   const SpectralGrid& grid);
std::vector<cdouble> compute_q_hat(const ObservationSet& obs,
                                   const WeightScheme& weights,
                                   const SpectralGrid& grid);
//! Depends on the gaps and the weights only.
std::vector<double> compute_sigma(const SamplingScheme& scheme,
                                  const WeightScheme& weights,
                                  const SpectralGrid& grid);

//! 1/q~: 1/q where |q| >= max(sigma, kappa), else 0.
std::vector<cdouble> regularize_inverse(std::span<const cdouble> q_hat,
                                        std::span<const double> sigma,
                                        double kappa);
std::vector<cdouble> psi_prime_hat(std::span<const cdouble> p_hat,
                                   std::span<const cdouble> q_tilde_inv);
//! Cumulative trapezoid from the 0 node outward; the result is Hermitian.
std::vector<cdouble> integrate_psi(std::span<const cdouble> psi_prime, const SpectralGrid& grid);

struct SpectralStatistics
{
  SpectralGrid grid;
  double kappa;
  std::vector<cdouble> p_hat;
  std::vector<cdouble> q_hat;
  std::vector<double> sigma;
  std::vector<cdouble> q_tilde_inv;
  //! p_hat / q~; the factor 1/i of the jump estimator is applied later.
  std::vector<cdouble> psi_prime_hat;

  static SpectralStatistics from_sums(const SpectralSums& sums, const SpectralGrid& grid, double kappa);
};

SpectralStatistics compute_statistics(const ObservationSet& obs,
                                      const WeightScheme& weights,
                                      const SpectralGrid& grid,
                                      double kappa);

struct CharFnEstimate
{
  std::vector<cdouble> psi_hat;
  std::vector<cdouble> phi_check;
  //! phi_check / max(1, |phi_check|)
  std::vector<cdouble> phi_hat;
};

CharFnEstimate clamp_phi(std::span<const cdouble> psi_hat);

//! Ratio without statistical thresholding; entries with |q| < guard are 0.
std::vector<cdouble> unregularized_ratio(std::span<const cdouble> p,
                                         std::span<const cdouble> q,
                                         double guard = 1e-12);

} // namespace levy
