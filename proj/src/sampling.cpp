#include "levy/sampling.hpp"

#include "levy/error.hpp"
#include "levy/rng.hpp"

#include <cmath>
#include <string>

namespace levy {

SamplingScheme SamplingScheme::from_gaps(std::vector<double> gaps, double delta_max)
{
  if (!(delta_max > 0.0) || !std::isfinite(delta_max))
    throw Error(ErrorCode::invalid_argument, "delta_max must be positive and finite");
  double total = 0.0;
  for (std::size_t j = 0; j < gaps.size(); ++j) {
    const double gap = gaps[j];
    if (!(gap > 0.0) || !std::isfinite(gap))
      throw Error(ErrorCode::non_positive_gap,
                  "gap " + std::to_string(j) + " is not positive: " + std::to_string(gap));
    if (gap > delta_max)
      throw Error(ErrorCode::gap_exceeds_delta_max,
                  "gap " + std::to_string(j) + " = " + std::to_string(gap) +
                    " exceeds delta_max = " + std::to_string(delta_max));
    total += gap;
  }
  return SamplingScheme(std::move(gaps), delta_max, total);
}

std::vector<double> SamplingScheme::times() const
{
  std::vector<double> t(deltas_.size() + 1);
  t[0] = 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < deltas_.size(); ++j) {
    acc += deltas_[j];
    t[j + 1] = acc;
  }
  return t;
}

SamplingScheme draw_uniform_gaps(std::size_t n, double upper, std::uint64_t seed)
{
  if (n == 0)
    throw Error(ErrorCode::invalid_argument, "need at least one gap");
  if (!(upper > 0.0))
    throw Error(ErrorCode::invalid_argument, "gap upper bound must be positive");
  Rng rng(seed);
  std::vector<double> gaps(n);
  for (auto& gap : gaps) {
    double u;
    do {
      u = rng.uniform_open_left();
    } while (u <= 0.0);
    gap = u * upper;
    if (gap > upper)
      gap = upper;
  }
  return SamplingScheme::from_gaps(std::move(gaps), upper);
}

ObservationSet::ObservationSet(SamplingScheme s, std::vector<double> z)
  : scheme(std::move(s))
  , increments(std::move(z))
{
  if (increments.size() != scheme.size())
    throw Error(ErrorCode::length_mismatch,
                "increments (" + std::to_string(increments.size()) + ") vs gaps (" +
                  std::to_string(scheme.size()) + ")");
}

} // namespace levy
