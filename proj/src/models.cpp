#include "levy/models.hpp"

#include "levy/error.hpp"
#include "levy/rng.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>

namespace levy {

namespace {

using std::numbers::pi;
constexpr cdouble I{0.0, 1.0};

template <class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what)
{
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(ErrorCode::invalid_argument, std::string(what) + " must be positive");
}

[[noreturn]] void no_jumps()
{
  throw Error(ErrorCode::no_jump_representation, "Brownian motion has no jump part");
}

// int_{|u|>cutoff} (1 + u^2/b^2)^(-s) du via the incomplete beta function.
double power_decay_sq_tail(double s, double b, double cutoff)
{
  if (!(s > 0.5))
    throw Error(ErrorCode::no_density, "|phi|^2 is not integrable for this shape");
  const double t0 = cutoff / b;
  const double x0 = 1.0 / (1.0 + t0 * t0);
  return 2.0 * b * 0.5 * boost::math::beta(s - 0.5, 0.5, x0);
}

// Rising factorial a (a+1) ... (a+m-1) / b^m.
double gamma_raw_moment(double a, double b, int m)
{
  double r = 1.0;
  for (int k = 0; k < m; ++k)
    r *= (a + k) / b;
  return r;
}

// m-th raw moment of a compound Poisson variable with intensity lambda and
// half-normal jumps, from the cumulants lambda * E|xi|^r.
double half_normal_cp_moment(double lambda, int m)
{
  std::vector<double> kappa(m + 1), mu(m + 1);
  for (int r = 1; r <= m; ++r)
    kappa[r] = lambda * std::pow(2.0, r / 2.0) * std::tgamma((r + 1) / 2.0) / std::sqrt(pi);
  mu[0] = 1.0;
  for (int k = 1; k <= m; ++k) {
    double s = 0.0;
    double binom = 1.0; // C(k-1, i)
    for (int i = 0; i < k; ++i) {
      s += binom * kappa[i + 1] * mu[k - 1 - i];
      binom = binom * (k - 1 - i) / (i + 1);
    }
    mu[k] = s;
  }
  return mu[m];
}

} // namespace

LevyModel::LevyModel(Variant v)
  : v_(v)
{
  std::visit(overloaded{
               [](const GammaProcess& m) {
                 require_positive(m.shape, "gamma shape");
                 require_positive(m.rate, "gamma rate");
               },
               [](const BilateralGamma& m) {
                 require_positive(m.shape, "bilateral gamma shape");
                 require_positive(m.rate, "bilateral gamma rate");
               },
               [](const CompoundPoissonNormal& m) { require_positive(m.intensity, "intensity"); },
               [](const BrownianDrift& m) {
                 require_positive(m.variance, "variance");
                 if (!std::isfinite(m.drift))
                   throw Error(ErrorCode::invalid_argument, "drift must be finite");
               },
             },
             v_);
}

LevyModel LevyModel::parse(const std::string& designation)
{
  static const std::regex re(R"(^\s*([a-z_]+)\s*\(\s*([^,\)]+)\s*(?:,\s*([^,\)]+)\s*)?\)\s*$)");
  std::smatch match;
  if (!std::regex_match(designation, match, re))
    throw Error(ErrorCode::config, "cannot parse model designation '" + designation + "'");
  const std::string name = match[1];
  auto number = [&](int idx) {
    try {
      std::size_t used = 0;
      const std::string text = match[idx];
      const double v = std::stod(text, &used);
      if (used != text.size())
        throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::config, "bad number in model designation '" + designation + "'");
    }
  };
  const bool two = match[3].matched;
  try {
    if (name == "gamma" && two)
      return LevyModel(GammaProcess{number(2), number(3)});
    if (name == "bgamma" && two)
      return LevyModel(BilateralGamma{number(2), number(3)});
    if (name == "cpois_normal" && !two)
      return LevyModel(CompoundPoissonNormal{number(2)});
    if (name == "bm" && two)
      return LevyModel(BrownianDrift{number(2), number(3)});
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invalid_argument)
      throw Error(ErrorCode::config, designation + ": " + e.what());
    throw;
  }
  throw Error(ErrorCode::config, "unknown model designation '" + designation + "'");
}

std::string LevyModel::designation() const
{
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
               [&](const GammaProcess& m) { os << "gamma(" << m.shape << "," << m.rate << ")"; },
               [&](const BilateralGamma& m) { os << "bgamma(" << m.shape << "," << m.rate << ")"; },
               [&](const CompoundPoissonNormal& m) { os << "cpois_normal(" << m.intensity << ")"; },
               [&](const BrownianDrift& m) { os << "bm(" << m.drift << "," << m.variance << ")"; },
             },
             v_);
  return os.str();
}

bool LevyModel::has_jump_representation() const
{
  return !std::holds_alternative<BrownianDrift>(v_);
}

bool LevyModel::has_density(double delta) const
{
  return std::visit(overloaded{
                      [&](const GammaProcess& m) { return m.shape * delta > 0.5; },
                      [&](const BilateralGamma& m) { return m.shape * delta > 0.5; },
                      [](const CompoundPoissonNormal&) { return false; },
                      [&](const BrownianDrift&) { return delta > 0.0; },
                    },
                    v_);
}

cdouble LevyModel::char_exponent(double u) const
{
  return std::visit(overloaded{
                      [&](const GammaProcess& m) {
                        return -m.shape * std::log(cdouble(1.0, -u / m.rate));
                      },
                      [&](const BilateralGamma& m) {
                        const double r = u / m.rate;
                        return cdouble(-m.shape * std::log1p(r * r), 0.0);
                      },
                      [&](const CompoundPoissonNormal& m) {
                        return cdouble(m.intensity * std::expm1(-0.5 * u * u), 0.0);
                      },
                      [&](const BrownianDrift& m) {
                        return cdouble(-0.5 * m.variance * u * u, m.drift * u);
                      },
                    },
                    v_);
}

cdouble LevyModel::char_function(double delta, double u) const
{
  if (delta == 0.0)
    return 1.0;
  return std::exp(delta * char_exponent(u));
}

cdouble LevyModel::char_exponent_derivative(double u) const
{
  if (const auto* bm = std::get_if<BrownianDrift>(&v_))
    return cdouble(-bm->variance * u, bm->drift);
  return I * fourier_g(u);
}

cdouble LevyModel::fourier_g(double u) const
{
  return std::visit(overloaded{
                      [&](const GammaProcess& m) { return m.shape / cdouble(m.rate, -u); },
                      [&](const BilateralGamma& m) {
                        return cdouble(0.0, 2.0 * m.shape * u / (m.rate * m.rate + u * u));
                      },
                      [&](const CompoundPoissonNormal& m) {
                        return cdouble(0.0, m.intensity * u * std::exp(-0.5 * u * u));
                      },
                      [](const BrownianDrift&) -> cdouble { no_jumps(); },
                    },
                    v_);
}

double LevyModel::true_g(double x) const
{
  return std::visit(overloaded{
                      [&](const GammaProcess& m) {
                        return x > 0.0 ? m.shape * std::exp(-m.rate * x) : 0.0;
                      },
                      [&](const BilateralGamma& m) {
                        if (x == 0.0)
                          return 0.0;
                        return std::copysign(m.shape * std::exp(-m.rate * std::fabs(x)), x);
                      },
                      [&](const CompoundPoissonNormal& m) {
                        return m.intensity * x * std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi);
                      },
                      [](const BrownianDrift&) -> double { no_jumps(); },
                    },
                    v_);
}

double LevyModel::true_density(double delta, double x) const
{
  if (!has_density(delta))
    throw Error(ErrorCode::no_density, designation() + " has no square-integrable density");
  return std::visit(overloaded{
                      [&](const GammaProcess& m) {
                        if (x <= 0.0)
                          return 0.0;
                        const double s = m.shape * delta;
                        return std::exp(s * std::log(m.rate) + (s - 1.0) * std::log(x) -
                                        m.rate * x - std::lgamma(s));
                      },
                      [&](const BilateralGamma& m) {
                        return symmetric_bilateral_gamma_density(m.shape * delta, m.rate, x);
                      },
                      [](const CompoundPoissonNormal&) -> double { return 0.0; },
                      [&](const BrownianDrift& m) {
                        const double var = m.variance * delta;
                        const double d = x - m.drift * delta;
                        return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * pi * var);
                      },
                    },
                    v_);
}

double LevyModel::fourier_g_sq_tail(double cutoff) const
{
  const double c = std::fabs(cutoff);
  return std::visit(overloaded{
                      [&](const GammaProcess& m) {
                        const double a = m.shape, b = m.rate;
                        return 2.0 * a * a / b * (0.5 * pi - std::atan(c / b));
                      },
                      [&](const BilateralGamma& m) {
                        const double a = m.shape, b = m.rate;
                        const double half = (0.5 * pi - std::atan(c / b)) / (2.0 * b) +
                                            c / (2.0 * (b * b + c * c));
                        return 8.0 * a * a * half;
                      },
                      [&](const CompoundPoissonNormal& m) {
                        const double l = m.intensity;
                        const double half =
                          0.5 * c * std::exp(-c * c) + 0.25 * std::sqrt(pi) * std::erfc(c);
                        return 2.0 * l * l * half;
                      },
                      [](const BrownianDrift&) -> double { no_jumps(); },
                    },
                    v_);
}

double LevyModel::char_function_sq_tail(double delta, double cutoff) const
{
  if (!has_density(delta))
    throw Error(ErrorCode::no_density, designation() + " has no square-integrable density");
  const double c = std::fabs(cutoff);
  return std::visit(overloaded{
                      [&](const GammaProcess& m) {
                        return power_decay_sq_tail(m.shape * delta, m.rate, c);
                      },
                      [&](const BilateralGamma& m) {
                        return power_decay_sq_tail(2.0 * m.shape * delta, m.rate, c);
                      },
                      [](const CompoundPoissonNormal&) -> double { return 0.0; },
                      [&](const BrownianDrift& m) {
                        const double s = m.variance * delta;
                        return std::sqrt(pi / s) * std::erfc(c * std::sqrt(s));
                      },
                    },
                    v_);
}

double LevyModel::moment_bound_C(int m) const
{
  if (m != 2 && m != 4 && m != 8)
    throw Error(ErrorCode::unsupported_moment, "moment order must be 2, 4 or 8");
  return std::visit(overloaded{
                      [&](const GammaProcess& g) { return gamma_raw_moment(g.shape, g.rate, m); },
                      [&](const BilateralGamma& g) {
                        return 2.0 * gamma_raw_moment(g.shape, g.rate, m);
                      },
                      [&](const CompoundPoissonNormal& c) {
                        return 2.0 * half_normal_cp_moment(0.5 * c.intensity, m);
                      },
                      [](const BrownianDrift&) -> double { no_jumps(); },
                    },
                    v_);
}

ObservationSet LevyModel::sample_increments(const SamplingScheme& scheme, std::uint64_t seed) const
{
  Rng rng(seed);
  std::vector<double> z(scheme.size());
  const auto deltas = scheme.deltas();
  std::visit(overloaded{
               [&](const GammaProcess& m) {
                 for (std::size_t j = 0; j < z.size(); ++j)
                   z[j] = rng.gamma(m.shape * deltas[j], m.rate);
               },
               [&](const BilateralGamma& m) {
                 for (std::size_t j = 0; j < z.size(); ++j) {
                   const double up = rng.gamma(m.shape * deltas[j], m.rate);
                   const double down = rng.gamma(m.shape * deltas[j], m.rate);
                   z[j] = up - down;
                 }
               },
               [&](const CompoundPoissonNormal& m) {
                 for (std::size_t j = 0; j < z.size(); ++j) {
                   const auto jumps = rng.poisson(m.intensity * deltas[j]);
                   double s = 0.0;
                   for (std::uint64_t k = 0; k < jumps; ++k)
                     s += rng.normal();
                   z[j] = s;
                 }
               },
               [&](const BrownianDrift& m) {
                 for (std::size_t j = 0; j < z.size(); ++j)
                   z[j] = m.drift * deltas[j] + std::sqrt(m.variance * deltas[j]) * rng.normal();
               },
             },
             v_);
  return ObservationSet(scheme, std::move(z));
}

double symmetric_bilateral_gamma_density(double s, double b, double x)
{
  if (!(s > 0.5))
    throw Error(ErrorCode::no_density, "bilateral gamma inversion needs shape > 1/2");
  // Truncate where the integrand's envelope (u/b)^(-2s) leaves < 1e-10 mass.
  const double tail_tol = 1e-10 * pi;
  const double upper =
    std::pow(std::pow(b, 2.0 * s) / ((2.0 * s - 1.0) * tail_tol), 1.0 / (2.0 * s - 1.0));
  const double ax = std::fabs(x);
  auto f = [&](double u) {
    const double r = u / b;
    return std::cos(u * ax) * std::exp(-s * std::log1p(r * r));
  };
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  double lo = 0.0;
  std::size_t panels = 0;
  while (lo < upper) {
    double width = std::max(0.5, 0.25 * lo);
    if (ax > 0.0)
      width = std::min(width, pi / ax);
    const double hi = std::min(lo + width, upper);
    total += gauss_kronrod<double, 61>::integrate(f, lo, hi, 0, 0.0);
    lo = hi;
    if (++panels > 5'000'000)
      throw Error(ErrorCode::bracket_failure, "bilateral gamma inversion did not converge");
  }
  return total / pi;
}

} // namespace levy
