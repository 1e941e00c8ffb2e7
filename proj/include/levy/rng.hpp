#pragma once

#include <cstdint>
#include <random>

namespace levy {

//! Mixes a base seed and a stream index into an independent engine seed
//! (splitmix64 finalizer applied twice).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/*!
 * Deterministic random source used for all simulation.
 *
 * The variate generators are implemented here rather than taken from
 * <random> so that streams are identical across standard library
 * implementations.
 */
class Rng
{
public:
  explicit Rng(std::uint64_t seed)
    : engine_(seed)
  {
  }

  //! Uniform on [0, 1) with 53 random bits.
  double uniform();
  //! Uniform on (0, 1].
  double uniform_open_left() { return 1.0 - uniform(); }
  double normal();
  //! Gamma(shape, rate); exact for every shape > 0.
  double gamma(double shape, double rate);
  std::uint64_t poisson(double mean);

private:
  double gamma_unit(double shape);

  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

} // namespace levy
