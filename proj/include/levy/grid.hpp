#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace levy {

using cdouble = std::complex<double>;

/*!
 * Uniform frequency grid symmetric about 0 with a node at exactly 0.
 *
 * Spectral arrays are stored for the nonnegative half only (index k holds
 * u_k = k * du); the negative half follows from Hermitian symmetry.
 */
class SpectralGrid
{
public:
  //! n_points must be odd and >= 3.
  SpectralGrid(double u_max, std::size_t n_points);

  //! Smallest grid with spacing du whose u_max is at least min_u_max.
  static SpectralGrid covering(double min_u_max, double du);

  double u_max() const { return u_max_; }
  double du() const { return du_; }
  std::size_t n_points() const { return n_points_; }
  std::size_t half_size() const { return (n_points_ + 1) / 2; }
  //! Node of the half grid.
  double node(std::size_t k) const { return static_cast<double>(k) * du_; }
  //! Node of the full grid, i = 0 .. n_points - 1.
  double full_node(std::size_t i) const;
  //! Largest half-grid index k with k * du <= u (up to rounding noise).
  std::size_t index_at_or_below(double u) const;

private:
  double u_max_;
  double du_;
  std::size_t n_points_;
};

enum class Symmetry
{
  //! f(-u) = conj(f(u))
  hermitian,
  //! f(-u) = -conj(f(u))
  anti_hermitian,
};

//! Expands a half-grid array to all n_points nodes, ordered from -u_max.
std::vector<cdouble> mirror(std::span<const cdouble> half, Symmetry sym);

//! Trapezoid weights for the half-grid nodes 0..k_end (inclusive).
inline double trapezoid_weight(std::size_t k, std::size_t k_end, double du)
{
  return (k == 0 || k == k_end) ? 0.5 * du : du;
}

} // namespace levy
