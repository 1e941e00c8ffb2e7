#include "levy/grid.hpp"

#include "levy/error.hpp"

#include <cmath>

namespace levy {

SpectralGrid::SpectralGrid(double u_max, std::size_t n_points)
  : u_max_(u_max)
  , du_(0.0)
  , n_points_(n_points)
{
  if (!(u_max > 0.0) || !std::isfinite(u_max))
    throw Error(ErrorCode::invalid_argument, "grid u_max must be positive");
  if (n_points < 3 || n_points % 2 == 0)
    throw Error(ErrorCode::invalid_argument, "grid needs an odd number (>= 3) of nodes");
  du_ = 2.0 * u_max / static_cast<double>(n_points - 1);
}

SpectralGrid SpectralGrid::covering(double min_u_max, double du)
{
  if (!(du > 0.0) || !(min_u_max > 0.0))
    throw Error(ErrorCode::invalid_argument, "grid spacing and extent must be positive");
  const auto half = static_cast<std::size_t>(std::ceil(min_u_max / du - 1e-9));
  SpectralGrid grid(static_cast<double>(half) * du, 2 * half + 1);
  grid.du_ = du;
  return grid;
}

double SpectralGrid::full_node(std::size_t i) const
{
  const auto centre = static_cast<std::ptrdiff_t>(half_size() - 1);
  return static_cast<double>(static_cast<std::ptrdiff_t>(i) - centre) * du_;
}

std::size_t SpectralGrid::index_at_or_below(double u) const
{
  if (u <= 0.0)
    return 0;
  const double ratio = u / du_;
  auto k = static_cast<std::size_t>(std::floor(ratio + 1e-9));
  if (k > half_size() - 1)
    k = half_size() - 1;
  return k;
}

std::vector<cdouble> mirror(std::span<const cdouble> half, Symmetry sym)
{
  const std::size_t h = half.size();
  std::vector<cdouble> full(2 * h - 1);
  for (std::size_t k = 0; k < h; ++k) {
    full[h - 1 + k] = half[k];
    const cdouble c = std::conj(half[k]);
    full[h - 1 - k] = sym == Symmetry::hermitian ? c : -c;
  }
  // The u = 0 node must itself satisfy the symmetry.
  full[h - 1] = half[0];
  return full;
}

} // namespace levy
