#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levy/error.hpp"
#include "levy/models.hpp"
#include "levy/rng.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>

using namespace levy;
using std::numbers::pi;

namespace {

const LevyModel gamma32 = LevyModel(GammaProcess{3, 2});
const LevyModel bgamma24 = LevyModel(BilateralGamma{2, 4});
const LevyModel cpn3 = LevyModel(CompoundPoissonNormal{3});
const LevyModel bm21 = LevyModel(BrownianDrift{2, 1});

ErrorCode code_of(auto&& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::io;
}

// int_a^b f over unit panels with a 61-point Gauss-Kronrod rule.
template <class F>
double panels(F f, double a, double b)
{
  using boost::math::quadrature::gauss_kronrod;
  double s = 0.0;
  for (double x = a; x < b; x += 1.0)
    s += gauss_kronrod<double, 61>::integrate(f, x, std::min(x + 1.0, b), 0, 0);
  return s;
}

} // namespace

TEST_CASE("model designations round trip")
{
  for (const char* d : {"gamma(3,2)", "bgamma(2,4)", "cpois_normal(3)", "bm(2,1)"}) {
    CAPTURE(d);
    CHECK(LevyModel::parse(LevyModel::parse(d).designation()).designation() == LevyModel::parse(d).designation());
  }
  CHECK_THROWS_AS(LevyModel::parse("gamma(-1,2)"), Error);
  CHECK_THROWS_AS(LevyModel::parse("stable(1)"), Error);
  CHECK_THROWS_AS(LevyModel(GammaProcess{3, 0}), Error);
}

TEST_CASE("characteristic exponent examples")
{
  CHECK(std::abs(gamma32.char_exponent(0.0)) == 0.0);
  CHECK(std::fabs(cpn3.char_exponent(10.0).real() + 3.0) < 1e-12);
  const cdouble bm = bm21.char_exponent(1.0);
  CHECK(bm.real() == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(bm.imag() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("characteristic function examples")
{
  // (1 - i)^-3 = (1 + i)^3 / 8 = (-2 + 2i) / 8
  const cdouble g = gamma32.char_function(1.0, 2.0);
  CHECK(std::abs(g - cdouble(-0.25, 0.25)) < 1e-14);
  for (const auto* m : {&gamma32, &bgamma24, &cpn3, &bm21})
    CHECK(m->char_function(0.0, 3.7) == cdouble(1.0));
  const cdouble c = cpn3.char_function(2.0, 1.0);
  CHECK(std::fabs(c.real() - std::exp(6.0 * (std::exp(-0.5) - 1.0))) < 1e-14);
  CHECK(std::fabs(c.imag()) < 1e-15);
  CHECK(c.real() == doctest::Approx(0.094343).epsilon(1e-5));
}

TEST_CASE("Fourier transform of g examples")
{
  CHECK(std::abs(gamma32.fourier_g(0.0) - cdouble(1.5)) < 1e-15);
  CHECK(std::abs(bgamma24.fourier_g(0.0)) == 0.0);
  const cdouble c = cpn3.fourier_g(1.0);
  CHECK(std::fabs(c.real()) < 1e-15);
  CHECK(c.imag() == doctest::Approx(3.0 * std::exp(-0.5)).epsilon(1e-14));
  CHECK(c.imag() == doctest::Approx(1.8196).epsilon(1e-4));
  CHECK(code_of([] { bm21.fourier_g(1.0); }) == ErrorCode::no_jump_representation);
  for (double u : {-3.0, 0.5, 7.0})
    for (const auto* m : {&gamma32, &bgamma24, &cpn3})
      CHECK(std::abs(m->char_exponent_derivative(u) - cdouble(0, 1) * m->fourier_g(u)) < 1e-14);
}

TEST_CASE("true g examples")
{
  CHECK(gamma32.true_g(0.5) == doctest::Approx(3.0 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(gamma32.true_g(0.5) == doctest::Approx(1.1036).epsilon(1e-4));
  CHECK(gamma32.true_g(-0.5) == 0.0);
  CHECK(bgamma24.true_g(-0.25) == doctest::Approx(-2.0 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(bgamma24.true_g(-0.25) == doctest::Approx(-0.7358).epsilon(1e-4));
  CHECK(cpn3.true_g(0.0) == 0.0);
  CHECK(code_of([] { bm21.true_g(1.0); }) == ErrorCode::no_jump_representation);
}

TEST_CASE("true density examples")
{
  CHECK(gamma32.true_density(1.0, 1.5) == doctest::Approx(9.0 * std::exp(-3.0)).epsilon(1e-13));
  CHECK(gamma32.true_density(1.0, 1.5) == doctest::Approx(0.44808).epsilon(1e-4));
  CHECK(bm21.true_density(1.0, 2.0) == doctest::Approx(1.0 / std::sqrt(2.0 * pi)).epsilon(1e-14));
  CHECK(code_of([] { cpn3.true_density(1.0, 0.0); }) == ErrorCode::no_density);
  CHECK_FALSE(gamma32.has_density(0.1));
  CHECK(gamma32.has_density(1.0));
  CHECK_FALSE(cpn3.has_density(1.0));
}

TEST_CASE("bilateral gamma density against the Bessel-K closed form")
{
  // Symmetric variance-gamma law with shape s, rate b:
  //   f(x) = b^{s+1/2} |x|^{s-1/2} K_{s-1/2}(b|x|) / (sqrt(pi) Gamma(s) 2^{s-1/2}),
  //   f(0) = b Gamma(s - 1/2) / (2 sqrt(pi) Gamma(s)).
  const double s = 2.0, b = 4.0;
  CHECK(std::fabs(bgamma24.true_density(1.0, 0.0) - b * std::tgamma(s - 0.5) / (2 * std::sqrt(pi) * std::tgamma(s))) <
        1e-8);
  CHECK(std::fabs(bgamma24.true_density(1.0, 0.0) - 1.0) < 1e-8);
  for (double x : {0.05, 0.3, 1.0, 2.5, -0.7}) {
    CAPTURE(x);
    const double ax = std::fabs(x), nu = s - 0.5;
    const double ref = std::pow(b, s + 0.5) * std::pow(ax, nu) * boost::math::cyl_bessel_k(nu, b * ax) /
                       (std::sqrt(pi) * std::tgamma(s) * std::pow(2.0, nu));
    CHECK(std::fabs(bgamma24.true_density(1.0, x) - ref) < 1e-8);
  }
  // A half-integer-free shape: s = 1.3 at delta = 0.65 with a = 2.
  const double s2 = 2.0 * 0.65, nu2 = s2 - 0.5;
  for (double x : {0.2, 1.1}) {
    const double ref = std::pow(b, s2 + 0.5) * std::pow(x, nu2) * boost::math::cyl_bessel_k(nu2, b * x) /
                       (std::sqrt(pi) * std::tgamma(s2) * std::pow(2.0, nu2));
    CHECK(std::fabs(bgamma24.true_density(0.65, x) - ref) < 1e-8);
  }
}

TEST_CASE("bilateral gamma density against a Monte Carlo histogram")
{
  // 10^7 draws of X_1; box kernel of half-width 0.02 at 0 (se ~ 1.6e-3).
  const auto scheme = SamplingScheme::from_gaps(std::vector<double>(10'000'000, 1.0), 1.0);
  const auto obs = bgamma24.sample_increments(scheme, 2024);
  const double h = 0.02;
  std::size_t inside = 0;
  for (double z : obs.increments)
    inside += std::fabs(z) < h;
  const double kde = inside / (2.0 * h * obs.size());
  CHECK(std::fabs(kde - bgamma24.true_density(1.0, 0.0)) < 1e-2);
}

TEST_CASE("sample moments of simulated increments")
{
  const std::size_t n = 100000;
  const auto unit = SamplingScheme::from_gaps(std::vector<double>(n, 1.0), 1.0);
  auto mean_var = [](const std::vector<double>& z) {
    double s = 0, s2 = 0;
    for (double x : z) {
      s += x;
      s2 += x * x;
    }
    const double m = s / z.size();
    return std::pair{m, (s2 - z.size() * m * m) / (z.size() - 1)};
  };
  {
    const auto [m, v] = mean_var(gamma32.sample_increments(unit, 1).increments);
    CHECK(std::fabs(m - 1.5) < 4.0 * std::sqrt(0.75 / n));
  }
  {
    const auto [m, v] = mean_var(bgamma24.sample_increments(unit, 2).increments);
    // Var X_1 = 2 a / b^2 = 0.25
    CHECK(std::fabs(m) < 4.0 * std::sqrt(0.25 / n));
  }
  {
    const auto [m, v] = mean_var(cpn3.sample_increments(unit, 3).increments);
    // cumulants k2 = 3, k4 = 9: mu4 = 36, Var(s^2) ~ (36 - 9) / n
    CHECK(std::fabs(v - 3.0) < 4.0 * std::sqrt(27.0 / n));
  }
  {
    const auto [m, v] = mean_var(bm21.sample_increments(unit, 4).increments);
    CHECK(std::fabs(m - 2.0) < 4.0 * std::sqrt(1.0 / n));
  }
}

TEST_CASE("irregular gaps: increments follow the law of X_delta")
{
  const auto scheme = draw_uniform_gaps(200000, 6, 8);
  const auto obs = gamma32.sample_increments(scheme, 9);
  // (Z_j - a delta_j / b) / sqrt(a delta_j) * b is standardised.
  double s = 0, s2 = 0;
  for (std::size_t j = 0; j < obs.size(); ++j) {
    const double d = scheme.delta(j);
    const double t = (obs.increments[j] - 1.5 * d) / (std::sqrt(3.0 * d) / 2.0);
    s += t;
    s2 += t * t;
  }
  const double n = obs.size();
  CHECK(std::fabs(s / n) < 4.0 / std::sqrt(n));
  CHECK(std::fabs(s2 / n - 1.0) < 0.05);
}

TEST_CASE("moment bounds")
{
  CHECK(gamma32.moment_bound_C(2) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(bgamma24.moment_bound_C(2) == doctest::Approx(0.75).epsilon(1e-14));
  // Gamma(3,2) fourth moment: a(a+1)(a+2)(a+3)/b^4 = 360/16
  CHECK(gamma32.moment_bound_C(4) == doctest::Approx(22.5).epsilon(1e-14));
  CHECK(code_of([] { bm21.moment_bound_C(2); }) == ErrorCode::no_jump_representation);
  CHECK(code_of([] { gamma32.moment_bound_C(3); }) == ErrorCode::unsupported_moment);
  // CPN(3): positive part is compound Poisson with rate 3/2 and half-normal
  // jumps; its second moment is lambda E xi^2 + (lambda E xi)^2 with
  // E xi = sqrt(2/pi), E xi^2 = 1.
  const double l = 1.5, e1 = std::sqrt(2.0 / pi);
  CHECK(cpn3.moment_bound_C(2) == doctest::Approx(2.0 * (l + l * l * e1 * e1)).epsilon(1e-12));
}

TEST_CASE("modulus and conjugate symmetry of the characteristic functions")
{
  for (const auto* m : {&gamma32, &bgamma24, &cpn3, &bm21}) {
    for (double delta : {0.1, 1.0, 6.0}) {
      for (int i = 0; i < 256; ++i) {
        const double u = -20.0 + 40.0 * i / 255.0;
        const cdouble a = m->char_function(delta, u);
        REQUIRE(std::abs(a) <= 1.0 + 1e-12);
        REQUIRE(std::abs(m->char_function(delta, -u) - std::conj(a)) <= 1e-14);
      }
    }
  }
}

TEST_CASE("finite differences of the exponent match its derivative")
{
  Rng rng(77);
  const double h = 1e-5;
  for (const auto* m : {&gamma32, &bgamma24, &cpn3, &bm21}) {
    for (int i = 0; i < 32; ++i) {
      const double u = -10.0 + 20.0 * rng.uniform();
      const cdouble fd = (m->char_exponent(u + h) - m->char_exponent(u - h)) / (2.0 * h);
      REQUIRE(std::abs(fd - m->char_exponent_derivative(u)) < 1e-6);
    }
  }
}

TEST_CASE("quadrature of g reproduces its Fourier transform")
{
  for (const auto* m : {&gamma32, &bgamma24, &cpn3}) {
    for (double u : {0.0, 1.0, -1.0, 5.0, -5.0}) {
      const double re = panels([&](double x) { return std::cos(u * x) * m->true_g(x); }, -40, 0) +
                        panels([&](double x) { return std::cos(u * x) * m->true_g(x); }, 0, 40);
      const double im = panels([&](double x) { return std::sin(u * x) * m->true_g(x); }, -40, 0) +
                        panels([&](double x) { return std::sin(u * x) * m->true_g(x); }, 0, 40);
      REQUIRE(std::abs(cdouble(re, im) - m->fourier_g(u)) < 1e-6);
    }
  }
}

TEST_CASE("empirical characteristic function of simulated increments")
{
  const std::size_t n = 1'000'000;
  for (const auto* m : {&gamma32, &bgamma24, &cpn3, &bm21}) {
    const double delta = 0.7;
    const auto scheme = SamplingScheme::from_gaps(std::vector<double>(n, delta), delta);
    const auto z = m->sample_increments(scheme, 31).increments;
    for (int i = 0; i < 16; ++i) {
      const double u = -6.0 + 12.0 * i / 15.0;
      cdouble ecf = 0;
      for (double x : z)
        ecf += std::polar(1.0, u * x);
      ecf /= double(n);
      REQUIRE(std::abs(ecf - m->char_function(delta, u)) < 5.0 / std::sqrt(double(n)));
    }
  }
}

TEST_CASE("closed-form spectral tails against quadrature")
{
  using boost::math::quadrature::gauss_kronrod;
  auto tail = [](auto f, double cutoff) {
    // int_{|u| > cutoff} f = 2 int_cutoff^inf f via u = cutoff / t.
    auto g = [&](double t) { return t <= 0 ? 0.0 : f(cutoff / t) * cutoff / (t * t); };
    return 2.0 * gauss_kronrod<double, 61>::integrate(g, 0.0, 1.0, 15, 1e-13);
  };
  for (double cutoff : {0.5, 3.0, 17.0}) {
    CAPTURE(cutoff);
    for (const auto* m : {&gamma32, &bgamma24, &cpn3}) {
      const double ref = tail([&](double u) { return std::norm(m->fourier_g(u)); }, cutoff);
      CHECK(m->fourier_g_sq_tail(cutoff) == doctest::Approx(ref).epsilon(1e-8));
    }
    for (const auto* m : {&gamma32, &bgamma24, &bm21}) {
      const double ref = tail([&](double u) { return std::norm(m->char_function(1.0, u)); }, cutoff);
      CHECK(m->char_function_sq_tail(1.0, cutoff) == doctest::Approx(ref).epsilon(1e-8));
    }
  }
}
