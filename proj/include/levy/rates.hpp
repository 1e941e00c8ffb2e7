#pragma once

#include "levy/sampling.hpp"

#include <string>
#include <variant>

namespace levy {

//! |phi| >= (1 + C_phi u^2)^(-beta/2), |F g| <= C_g / |u|.
struct GPol
{
  double beta;
  double C_phi = 1.0, c_phi = 1.0, C_g = 1.0, C = 1.0;
};
//! |phi| >= C_phi exp(-c_phi |u|^alpha), alpha in (0, 1/2).
struct GExp
{
  double alpha;
  double c_phi;
  double C_phi = 1.0, C_g = 1.0, C = 1.0;
};
//! Compound Poisson: |phi| >= C_phi, |F g| <= C_g |u|^-a exp(-c_g |u|^rho).
struct GCp
{
  double C_phi;
  double a;
  double rho;
  double c_g;
  double C_g = 1.0, C = 1.0;
};
//! Locally Hoelder(a) jump function with polynomially decaying phi.
struct GLocal
{
  double a;
  double beta;
};
//! Densities with |phi(u)| ~ (1 + |u|)^-beta, beta > 1/2.
struct FPol
{
  double beta;
  int k;
};
//! Densities with |phi(u)| ~ exp(-c |u|^alpha), alpha in (0, 2].
struct FExp
{
  double alpha;
  double c;
  int k;
};

using SmoothnessClass = std::variant<GPol, GExp, GCp, GLocal, FPol, FExp>;

//! Throws Error(invalid_argument) on out-of-range class parameters.
void validate(const SmoothnessClass& cls);

struct BandwidthSolution
{
  double h_star;
  //! LHS / RHS - 1 of the defining equation at h_star.
  double residual;
  std::string equation_id;
  //! Order of the risk bound at h_star (without constants).
  double rate_proxy;
};

//! sum_j delta_j h^(2 delta_j beta + 2) = 1.
BandwidthSolution solve_h_global_pol(const SamplingScheme& scheme, double beta);
//! sum_j delta_j exp(-2 delta_j c_phi h^-alpha) h^(2(alpha - 1)) = 1; the
//! root on the decreasing (small h) branch.
BandwidthSolution solve_h_global_exp(const SamplingScheme& scheme, double alpha, double c_phi);
//! exp(2 c_g h^-rho) h^(-2a) = sum_j delta_j C_phi^delta_j.
BandwidthSolution solve_h_cp(const SamplingScheme& scheme, double a, double rho, double c_g, double C_phi);
//! sum_j delta_j h^(2 beta delta_j + 2a + 1) = 1.
BandwidthSolution solve_h_local(const SamplingScheme& scheme, double a, double beta);
/*!
 * |phi_reg(1/h)|^2 = (L(1/h) int_0^{1/h} dx / q_reg(x))^k with
 * q_reg(x) = sum_j delta_j |phi_reg(x)|^delta_j and L = 1 (FPol, FExp with
 * alpha < 1/2), max(ln(1/h), 1) (alpha = 1/2) or (1/h)^(2 alpha - 1)
 * (alpha > 1/2).
 */
BandwidthSolution solve_h_density(const SamplingScheme& scheme, const FPol& cls);
BandwidthSolution solve_h_density(const SamplingScheme& scheme, const FExp& cls);

//! Dispatches on the class.
BandwidthSolution solve_h(const SamplingScheme& scheme, const SmoothnessClass& cls);

//! Parses `pol(beta)`, `exp(alpha,c_phi)`, `cp(a,rho,c_g,C_phi)`, `local(a,beta)`,
//! `fpol(beta,k)`, `fexp(alpha,c,k)`.
SmoothnessClass parse_smoothness_class(const std::string& text);

} // namespace levy
