#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace levy::detail {

/*!
 * Output slab for the weighted exponential sums: block-major arrays of
 * length blocks * nodes for the real and imaginary parts of p and q and for
 * sigma^2.
 */
struct KernelOutput
{
  std::span<double> p_re, p_im, q_re, q_im, s2;
};

//! w_j(u_k) = scale * exp(delta_j * log_w[k]).
void accumulate_exponential(std::span<const double> deltas,
                            std::span<const double> z,
                            std::span<const std::complex<double>> log_w,
                            double scale,
                            double du,
                            std::span<const std::size_t> offsets,
                            KernelOutput out);

//! w_j(u_k) = scale * tables[group[j]][k]; tables laid out table-major.
void accumulate_tabulated(std::span<const double> deltas,
                          std::span<const double> z,
                          std::span<const std::complex<double>> tables,
                          std::span<const std::size_t> group,
                          double scale,
                          double du,
                          std::size_t nodes,
                          std::span<const std::size_t> offsets,
                          KernelOutput out);

//! For every j: sum_k trap_k |exp(d_j a_k) - exp(d_j b_k)|^2 over k = 0..k_end,
//! doubled to cover the mirrored negative half.
void weight_distances(std::span<const double> deltas,
                      std::span<const std::complex<double>> log_a,
                      std::span<const std::complex<double>> log_b,
                      double du,
                      std::size_t k_end,
                      std::span<double> out);

} // namespace levy::detail
