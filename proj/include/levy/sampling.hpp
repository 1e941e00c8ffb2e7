#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace levy {

/*!
 * Deterministic observation instants 0 = t_0 < t_1 < ... < t_n = T.
 *
 * The gaps are stored and the times derived, since every estimator formula
 * consumes the gaps directly.
 */
class SamplingScheme
{
public:
  //! Throws Error(non_positive_gap | gap_exceeds_delta_max).
  static SamplingScheme from_gaps(std::vector<double> gaps, double delta_max);

  std::size_t size() const { return deltas_.size(); }
  std::span<const double> deltas() const { return deltas_; }
  double delta(std::size_t j) const { return deltas_[j]; }
  double delta_max() const { return delta_max_; }
  //! max(delta_max, 1)
  double delta_max_bar() const { return delta_max_ > 1.0 ? delta_max_ : 1.0; }
  double horizon() const { return horizon_; }
  //! t_0, ..., t_n (n + 1 entries).
  std::vector<double> times() const;

private:
  SamplingScheme(std::vector<double> gaps, double delta_max, double horizon)
    : deltas_(std::move(gaps))
    , delta_max_(delta_max)
    , horizon_(horizon)
  {
  }

  std::vector<double> deltas_;
  double delta_max_;
  double horizon_;
};

//! n gaps i.i.d. uniform on (0, upper]; delta_max = upper.
SamplingScheme draw_uniform_gaps(std::size_t n, double upper, std::uint64_t seed);

//! One sampled path: the scheme and the increments Z_j = X_{t_j} - X_{t_{j-1}}.
struct ObservationSet
{
  ObservationSet(SamplingScheme s, std::vector<double> z);

  std::size_t size() const { return increments.size(); }

  SamplingScheme scheme;
  std::vector<double> increments;
};

} // namespace levy
