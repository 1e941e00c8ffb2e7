#pragma once

#include "levy/sampling.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <variant>

namespace levy {

using cdouble = std::complex<double>;

//! Gamma subordinator, X_1 ~ Gamma(shape, rate).
struct GammaProcess
{
  double shape;
  double rate;
};

//! Symmetric bilateral gamma, X_1 = G_1 - G_2 with G_i ~ Gamma(shape, rate).
struct BilateralGamma
{
  double shape;
  double rate;
};

//! Compound Poisson with standard normal jumps.
struct CompoundPoissonNormal
{
  double intensity;
};

//! Brownian motion with drift; has no jump part.
struct BrownianDrift
{
  double drift;
  double variance;
};

/*!
 * A simulatable Levy process with closed-form spectral ground truth.
 *
 * Characteristic exponents use the principal branch of the logarithm; for
 * the implemented models 1 - iu/b never crosses the negative real axis, so
 * no path-continuous logarithm is needed.
 */
class LevyModel
{
public:
  using Variant = std::variant<GammaProcess, BilateralGamma, CompoundPoissonNormal, BrownianDrift>;

  //! Validates parameter positivity; throws Error(invalid_argument).
  LevyModel(Variant v);

  //! Parses `gamma(a,b)`, `bgamma(a,b)`, `cpois_normal(lambda)`, `bm(mu,v)`.
  static LevyModel parse(const std::string& designation);
  std::string designation() const;

  const Variant& variant() const { return v_; }
  bool has_jump_representation() const;
  //! True when X_delta has a square-integrable Lebesgue density.
  bool has_density(double delta = 1.0) const;

  //! Psi(u), with phi_delta(u) = exp(delta * Psi(u)).
  cdouble char_exponent(double u) const;
  cdouble char_function(double delta, double u) const;
  //! Psi'(u); defined for every model.
  cdouble char_exponent_derivative(double u) const;
  //! Fourier transform of g(x) = x eta(x); Psi'(u) = i * fourier_g(u).
  cdouble fourier_g(double u) const;
  double true_g(double x) const;
  //! Density of X_delta. Bilateral gamma is inverted numerically.
  double true_density(double delta, double x) const;

  //! Integral of |fourier_g|^2 over |u| > cutoff.
  double fourier_g_sq_tail(double cutoff) const;
  //! Integral of |phi_delta|^2 over |u| > cutoff.
  double char_function_sq_tail(double delta, double cutoff) const;

  //! E[X_+^m] + E[X_-^m] at time 1, m in {2, 4, 8}.
  double moment_bound_C(int m) const;

  ObservationSet sample_increments(const SamplingScheme& scheme, std::uint64_t seed) const;

private:
  Variant v_;
};

//! (1/pi) int_0^inf cos(ux) (1 + u^2/b^2)^(-s) du, the density of a symmetric
//! bilateral gamma law with shape s and rate b. Requires s > 1/2.
double symmetric_bilateral_gamma_density(double s, double b, double x);

} // namespace levy
