#include "levy/estimators.hpp"

#include "levy/error.hpp"

#include <cmath>
#include <numbers>

namespace levy {

namespace {

using std::numbers::pi;

void check_coverage(const SpectralGrid& grid, double bandwidth)
{
  if (!(bandwidth > 0.0))
    throw Error(ErrorCode::invalid_argument, "bandwidth must be positive");
  if (1.0 / bandwidth > grid.u_max() * (1.0 + 1e-12))
    throw Error(ErrorCode::grid_too_narrow,
                "cutoff 1/h = " + std::to_string(1.0 / bandwidth) + " exceeds u_max = " +
                  std::to_string(grid.u_max()));
}

// Last half-grid index where the kernel transform can be nonzero.
std::size_t support_end(const SpectralGrid& grid, const Kernel& kernel, double bandwidth)
{
  if (kernel.kind() == Kernel::Kind::sinc)
    return grid.index_at_or_below(1.0 / bandwidth);
  return grid.half_size() - 1;
}

} // namespace

std::string Kernel::name() const
{
  return kind_ == Kind::sinc ? "sinc" : "compact_order2";
}

double Kernel::fourier(double t) const
{
  const double a = std::fabs(t);
  if (kind_ == Kind::sinc)
    return a <= 1.0 + 1e-12 ? 1.0 : 0.0;
  if (a < 0.5) {
    // sum_n (-1)^n t^{2n} / (2n)! * 15 / ((2n+1)(2n+3)(2n+5))
    const double t2 = a * a;
    double term = 1.0, sum = 0.0, fact = 1.0;
    for (int n = 0; n <= 7; ++n) {
      if (n > 0)
        fact *= (2.0 * n - 1.0) * (2.0 * n);
      const double moment = 15.0 / ((2.0 * n + 1.0) * (2.0 * n + 3.0) * (2.0 * n + 5.0));
      sum += (n % 2 == 0 ? 1.0 : -1.0) * term / fact * moment;
      term *= t2;
    }
    return sum;
  }
  const double t2 = a * a;
  return 15.0 * ((3.0 - t2) * std::sin(a) - 3.0 * a * std::cos(a)) / (t2 * t2 * a);
}

double Kernel::spatial(double x) const
{
  if (kind_ == Kind::sinc)
    return x == 0.0 ? 1.0 / pi : std::sin(x) / (pi * x);
  if (std::fabs(x) >= 1.0)
    return 0.0;
  const double s = 1.0 - x * x;
  return 15.0 / 16.0 * s * s;
}

cdouble InversionEstimate::evaluate_complex(double x) const
{
  const auto full = mirror(spectrum, Symmetry::hermitian);
  const std::size_t mid = spectrum.size() - 1;
  cdouble acc = 0.0;
  for (std::size_t i = mid - support_end; i <= mid + support_end; ++i) {
    if (full[i] == cdouble(0.0))
      continue;
    const double u = grid.full_node(i);
    const double w = (i == mid - support_end || i == mid + support_end) ? 0.5 : 1.0;
    acc += w * std::polar(1.0, -u * x) * full[i];
  }
  return acc * grid.du() / (2.0 * pi);
}

double InversionEstimate::evaluate(double x) const
{
  // Half-grid form of the Hermitian sum: (1/pi) Re sum' e^{-iux} S(u).
  const std::size_t last = support_end;
  double acc = 0.0;
  for (std::size_t k = 0; k <= last; ++k) {
    if (spectrum[k] == cdouble(0.0))
      continue;
    acc += trapezoid_weight(k, last, 1.0) * (std::polar(1.0, -grid.node(k) * x) * spectrum[k]).real();
  }
  return acc * grid.du() / pi;
}

std::vector<double> InversionEstimate::evaluate(std::span<const double> xs) const
{
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    out[i] = evaluate(xs[i]);
  return out;
}

JumpEstimate estimate_g(std::span<const cdouble> psi_prime_hat,
                        const SpectralGrid& grid,
                        const Kernel& kernel,
                        double bandwidth)
{
  check_coverage(grid, bandwidth);
  if (psi_prime_hat.size() != grid.half_size())
    throw Error(ErrorCode::length_mismatch, "psi' estimate does not match the grid");
  const std::size_t end = support_end(grid, kernel, bandwidth);
  JumpEstimate est{grid, kernel, bandwidth, std::vector<cdouble>(grid.half_size()), end};
  const cdouble minus_i(0.0, -1.0);
  for (std::size_t k = 0; k <= end; ++k)
    est.spectrum[k] = kernel.fourier(bandwidth * grid.node(k)) * minus_i * psi_prime_hat[k];
  return est;
}

JumpEstimate estimate_g(const SpectralStatistics& stats, const Kernel& kernel, double bandwidth)
{
  return estimate_g(stats.psi_prime_hat, stats.grid, kernel, bandwidth);
}

DensityEstimate estimate_f(const CharFnEstimate& charfn,
                           const SpectralGrid& grid,
                           const Kernel& kernel,
                           double bandwidth)
{
  check_coverage(grid, bandwidth);
  if (charfn.phi_hat.size() != grid.half_size())
    throw Error(ErrorCode::length_mismatch, "phi estimate does not match the grid");
  const std::size_t end = support_end(grid, kernel, bandwidth);
  DensityEstimate est{grid, kernel, bandwidth, std::vector<cdouble>(grid.half_size()), end};
  for (std::size_t k = 0; k <= end; ++k)
    est.spectrum[k] = kernel.fourier(bandwidth * grid.node(k)) * charfn.phi_hat[k];
  return est;
}

double l2_risk_spectral(const InversionEstimate& estimate,
                        const std::function<cdouble(double)>& truth_fourier,
                        double tail_beyond_grid)
{
  const auto& grid = estimate.grid;
  const std::size_t last = grid.half_size() - 1;
  double half = 0.0;
  const std::size_t end = estimate.support_end;
  for (std::size_t k = 0; k <= last; ++k) {
    const cdouble truth = truth_fourier(grid.node(k));
    const double w = trapezoid_weight(k, last, grid.du());
    if (k == end && end < last) {
      // Support ends here: half the cell inside, half outside.
      half += 0.5 * w * (std::norm(estimate.spectrum[k] - truth) + std::norm(truth));
    } else {
      half += w * std::norm(estimate.spectrum[k] - truth);
    }
  }
  return (2.0 * half + tail_beyond_grid) / (2.0 * pi);
}

double l2_risk_jump(const JumpEstimate& estimate, const LevyModel& model)
{
  return l2_risk_spectral(
    estimate, [&](double u) { return model.fourier_g(u); },
    model.fourier_g_sq_tail(estimate.grid.u_max()));
}

double l2_risk_density(const DensityEstimate& estimate, const LevyModel& model, double delta)
{
  if (!model.has_density(delta))
    throw Error(ErrorCode::no_density, model.designation() + " has no square-integrable density");
  return l2_risk_spectral(
    estimate, [&](double u) { return model.char_function(delta, u); },
    model.char_function_sq_tail(delta, estimate.grid.u_max()));
}

} // namespace levy
