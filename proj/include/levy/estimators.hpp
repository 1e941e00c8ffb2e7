#pragma once

#include "levy/grid.hpp"
#include "levy/models.hpp"
#include "levy/spectral.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace levy {

//! Smoothing kernel described through its Fourier transform.
class Kernel
{
public:
  enum class Kind
  {
    //! Fourier transform is the indicator of [-1, 1].
    sinc,
    //! Biweight (15/16)(1 - x^2)^2 on [-1, 1]; symmetric, order 2.
    compact_order2,
  };

  explicit Kernel(Kind kind = Kind::sinc)
    : kind_(kind)
  {
  }

  Kind kind() const { return kind_; }
  std::string name() const;
  //! Fourier transform, real and even with value 1 at 0.
  double fourier(double t) const;
  //! Spatial kernel k(x).
  double spatial(double x) const;

private:
  Kind kind_;
};

/*!
 * A kernel-smoothed Fourier inversion estimate. `spectrum` holds the
 * half-grid values F k(h u) * S(u), where S is p/(i q~) for the jump target
 * and phi_hat for the density; both are Hermitian.
 */
struct InversionEstimate
{
  SpectralGrid grid;
  Kernel kernel;
  double bandwidth;
  std::vector<cdouble> spectrum;
  //! Last half-grid index of the integration range: the cutoff node for
  //! the sinc kernel (integrated as an endpoint), else the grid end.
  std::size_t support_end;

  //! (1/2pi) int e^{-iux} spectrum(u) du over the mirrored grid.
  cdouble evaluate_complex(double x) const;
  //! Real part of evaluate_complex.
  double evaluate(double x) const;
  std::vector<double> evaluate(std::span<const double> xs) const;
};

using JumpEstimate = InversionEstimate;
using DensityEstimate = InversionEstimate;

//! Throws Error(grid_too_narrow) when 1/h exceeds u_max.
JumpEstimate estimate_g(const SpectralStatistics& stats, const Kernel& kernel, double bandwidth);
JumpEstimate estimate_g(std::span<const cdouble> psi_prime_hat,
                        const SpectralGrid& grid,
                        const Kernel& kernel,
                        double bandwidth);
DensityEstimate estimate_f(const CharFnEstimate& charfn,
                           const SpectralGrid& grid,
                           const Kernel& kernel,
                           double bandwidth);

/*!
 * Plancherel L2 risk (1/2pi) int |spectrum - truth|^2 du: trapezoid over
 * the grid plus `tail_beyond_grid`, the mass of |truth|^2 outside
 * [-u_max, u_max].
 */
double l2_risk_spectral(const InversionEstimate& estimate,
                        const std::function<cdouble(double)>& truth_fourier,
                        double tail_beyond_grid);

//! Risk of a jump estimate against the closed-form g of the model.
double l2_risk_jump(const JumpEstimate& estimate, const LevyModel& model);
//! Risk of a density estimate against the density of X_delta.
double l2_risk_density(const DensityEstimate& estimate, const LevyModel& model, double delta = 1.0);

} // namespace levy
