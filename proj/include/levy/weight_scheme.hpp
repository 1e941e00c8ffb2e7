#pragma once

#include "levy/grid.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace levy {

/*!
 * Per-observation weight functions w_j(u), tabulated on a half grid.
 *
 * Two storage forms cover every scheme without an n x n_points matrix:
 *  - exponential: w_j(u_k) = scale * exp(delta_j * log_weight[k]);
 *    oracle (log_weight = conj(Psi)), equal (0) and iterative
 *    (conj of the estimated exponent) weights all have this form.
 *  - tabulated: w_j(u_k) = table[group[j]][k]; used by the binned scheme.
 * Negative frequencies follow from w_j(-u) = conj(w_j(u)).
 */
class WeightScheme
{
public:
  enum class Kind
  {
    oracle,
    equal,
    binned,
    iterative,
  };

  static WeightScheme exponential(Kind kind, std::vector<cdouble> log_weight);
  static WeightScheme tabulated(Kind kind,
                                std::vector<std::vector<cdouble>> tables,
                                std::vector<std::size_t> group);

  Kind kind() const { return kind_; }
  bool is_exponential() const { return tables_.empty(); }
  std::size_t half_size() const;
  double scale() const { return scale_; }

  std::span<const cdouble> log_weight() const { return log_weight_; }
  const std::vector<std::vector<cdouble>>& tables() const { return tables_; }
  std::span<const std::size_t> group() const { return group_; }

  //! w_j(u_k) for the half-grid node k.
  cdouble value(std::size_t j, double delta_j, std::size_t k) const
  {
    if (is_exponential())
      return scale_ * std::exp(delta_j * log_weight_[k]);
    return scale_ * tables_[group_[j]][k];
  }

  //! Same weights multiplied by a common positive constant.
  WeightScheme scaled(double factor) const;

  // Diagnostics filled in by the data-driven constructors.
  std::size_t iterations = 0;
  std::size_t psi_builds = 0;
  bool converged = true;
  std::vector<std::size_t> empty_bins;

private:
  Kind kind_ = Kind::equal;
  double scale_ = 1.0;
  std::vector<cdouble> log_weight_;
  std::vector<std::vector<cdouble>> tables_;
  std::vector<std::size_t> group_;
};

std::string to_string(WeightScheme::Kind kind);

} // namespace levy
