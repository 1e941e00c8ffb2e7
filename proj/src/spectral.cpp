#include "levy/spectral.hpp"

#include "levy/error.hpp"
#include "spectral_kernel.hpp"

#include <cmath>
#include <string>

namespace levy {

namespace {

void check_sizes(const ObservationSet& obs, const WeightScheme& weights, const SpectralGrid& grid)
{
  if (weights.half_size() != grid.half_size())
    throw Error(ErrorCode::length_mismatch,
                "weights tabulated on " + std::to_string(weights.half_size()) +
                  " nodes, grid has " + std::to_string(grid.half_size()));
  if (!weights.is_exponential() && weights.group().size() != obs.size())
    throw Error(ErrorCode::length_mismatch,
                "weights defined for " + std::to_string(weights.group().size()) +
                  " observations, data has " + std::to_string(obs.size()));
}

} // namespace

SpectralSums& SpectralSums::operator+=(const SpectralSums& other)
{
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] += other.p[k];
    q[k] += other.q[k];
    sigma2[k] += other.sigma2[k];
  }
  return *this;
}

SpectralSums& SpectralSums::operator-=(const SpectralSums& other)
{
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] -= other.p[k];
    q[k] -= other.q[k];
    sigma2[k] -= other.sigma2[k];
  }
  return *this;
}

BlockedSums accumulate_block_sums(const ObservationSet& obs,
                                  const WeightScheme& weights,
                                  const SpectralGrid& grid,
                                  std::span<const std::size_t> offsets)
{
  check_sizes(obs, weights, grid);
  if (offsets.size() < 2 || offsets.front() != 0 || offsets.back() != obs.size())
    throw Error(ErrorCode::invalid_argument, "block offsets must partition the sample");
  const std::size_t nodes = grid.half_size();
  const std::size_t blocks = offsets.size() - 1;
  std::vector<double> pr(blocks * nodes), pi(blocks * nodes), qr(blocks * nodes),
    qi(blocks * nodes), s2(blocks * nodes);
  detail::KernelOutput out{pr, pi, qr, qi, s2};
  if (weights.is_exponential()) {
    detail::accumulate_exponential(obs.scheme.deltas(),
                                   obs.increments,
                                   weights.log_weight(),
                                   weights.scale(),
                                   grid.du(),
                                   offsets,
                                   out);
  } else {
    std::vector<cdouble> flat;
    flat.reserve(weights.tables().size() * nodes);
    for (const auto& t : weights.tables())
      flat.insert(flat.end(), t.begin(), t.end());
    detail::accumulate_tabulated(obs.scheme.deltas(),
                                 obs.increments,
                                 flat,
                                 weights.group(),
                                 weights.scale(),
                                 grid.du(),
                                 nodes,
                                 offsets,
                                 out);
  }
  BlockedSums result{SpectralSums(nodes), std::vector<SpectralSums>(blocks, SpectralSums(nodes))};
  for (std::size_t b = 0; b < blocks; ++b) {
    auto& blk = result.blocks[b];
    for (std::size_t k = 0; k < nodes; ++k) {
      const std::size_t at = b * nodes + k;
      blk.p[k] = cdouble(pr[at], pi[at]);
      blk.q[k] = cdouble(qr[at], qi[at]);
      blk.sigma2[k] = s2[at];
    }
    result.total += blk;
  }
  return result;
}

SpectralSums accumulate_sums(const ObservationSet& obs,
                             const WeightScheme& weights,
                             const SpectralGrid& grid)
{
  const std::size_t offsets[] = {0, obs.size()};
  return std::move(accumulate_block_sums(obs, weights, grid, offsets).total);
}

std::vector<cdouble> compute_p_hat(const ObservationSet& obs,
                                   const WeightScheme& weights,
                                   const SpectralGrid& grid)
{
  return accumulate_sums(obs, weights, grid).p;
}

std::vector<cdouble> compute_q_hat(const ObservationSet& obs,
                                   const WeightScheme& weights,
                                   const SpectralGrid& grid)
{
  return accumulate_sums(obs, weights, grid).q;
}

std::vector<double> compute_sigma(const SamplingScheme& scheme,
                                  const WeightScheme& weights,
                                  const SpectralGrid& grid)
{
  if (weights.half_size() != grid.half_size())
    throw Error(ErrorCode::length_mismatch, "weights and grid differ in size");
  if (!weights.is_exponential() && weights.group().size() != scheme.size())
    throw Error(ErrorCode::length_mismatch, "weights and scheme differ in size");
  const auto deltas = scheme.deltas();
  std::vector<double> sigma(grid.half_size());
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    double s2 = 0.0;
    for (std::size_t j = 0; j < deltas.size(); ++j)
      s2 += deltas[j] * deltas[j] * std::norm(weights.value(j, deltas[j], k));
    sigma[k] = std::sqrt(s2);
  }
  return sigma;
}

std::vector<cdouble> regularize_inverse(std::span<const cdouble> q_hat,
                                        std::span<const double> sigma,
                                        double kappa)
{
  if (!(kappa >= 0.0))
    throw Error(ErrorCode::invalid_argument, "kappa must be nonnegative");
  if (q_hat.size() != sigma.size())
    throw Error(ErrorCode::length_mismatch, "q_hat and sigma differ in size");
  std::vector<cdouble> inv(q_hat.size());
  for (std::size_t k = 0; k < q_hat.size(); ++k) {
    const double threshold = std::max(sigma[k], kappa);
    const double modulus = std::abs(q_hat[k]);
    if (modulus >= threshold && modulus > 0.0)
      inv[k] = 1.0 / q_hat[k];
  }
  return inv;
}

std::vector<cdouble> psi_prime_hat(std::span<const cdouble> p_hat,
                                   std::span<const cdouble> q_tilde_inv)
{
  if (p_hat.size() != q_tilde_inv.size())
    throw Error(ErrorCode::length_mismatch, "p_hat and 1/q~ differ in size");
  std::vector<cdouble> out(p_hat.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = q_tilde_inv[k] == cdouble(0.0) ? cdouble(0.0) : p_hat[k] * q_tilde_inv[k];
  return out;
}

std::vector<cdouble> integrate_psi(std::span<const cdouble> psi_prime, const SpectralGrid& grid)
{
  std::vector<cdouble> psi(psi_prime.size());
  const double half_du = 0.5 * grid.du();
  cdouble acc = 0.0;
  for (std::size_t k = 1; k < psi.size(); ++k) {
    acc += half_du * (psi_prime[k - 1] + psi_prime[k]);
    psi[k] = acc;
  }
  return psi;
}

SpectralStatistics SpectralStatistics::from_sums(const SpectralSums& sums,
                                                 const SpectralGrid& grid,
                                                 double kappa)
{
  SpectralStatistics stats{grid, kappa, sums.p, sums.q, {}, {}, {}};
  stats.sigma.resize(sums.sigma2.size());
  for (std::size_t k = 0; k < stats.sigma.size(); ++k)
    stats.sigma[k] = std::sqrt(sums.sigma2[k]);
  stats.q_tilde_inv = regularize_inverse(stats.q_hat, stats.sigma, kappa);
  stats.psi_prime_hat = levy::psi_prime_hat(stats.p_hat, stats.q_tilde_inv);
  return stats;
}

SpectralStatistics compute_statistics(const ObservationSet& obs,
                                      const WeightScheme& weights,
                                      const SpectralGrid& grid,
                                      double kappa)
{
  return SpectralStatistics::from_sums(accumulate_sums(obs, weights, grid), grid, kappa);
}

CharFnEstimate clamp_phi(std::span<const cdouble> psi_hat)
{
  CharFnEstimate est;
  est.psi_hat.assign(psi_hat.begin(), psi_hat.end());
  est.phi_check.resize(psi_hat.size());
  est.phi_hat.resize(psi_hat.size());
  for (std::size_t k = 0; k < psi_hat.size(); ++k) {
    const cdouble check = std::exp(psi_hat[k]);
    est.phi_check[k] = check;
    // |exp(z)| = exp(Re z) > 1 exactly when Re z > 0; dividing by the
    // modulus leaves the pure phase.
    est.phi_hat[k] = psi_hat[k].real() > 0.0 ? std::polar(1.0, psi_hat[k].imag()) : check;
  }
  return est;
}

std::vector<cdouble> unregularized_ratio(std::span<const cdouble> p,
                                         std::span<const cdouble> q,
                                         double guard)
{
  std::vector<cdouble> out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k)
    if (std::abs(q[k]) >= guard)
      out[k] = p[k] / q[k];
  return out;
}

} // namespace levy
