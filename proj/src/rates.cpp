#include "levy/rates.hpp"

#include "levy/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <regex>
#include <vector>

namespace levy {

namespace {

template <class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void bad(const std::string& what)
{
  throw Error(ErrorCode::invalid_argument, what);
}

// Distinct gaps with their total length: sum_j delta_j f(delta_j) becomes
// sum_i mass_i f(delta_i).
struct GapGroups
{
  std::vector<double> delta;
  std::vector<double> log_mass;
  std::vector<double> mass;

  explicit GapGroups(const SamplingScheme& scheme)
  {
    std::map<double, double> grouped;
    for (double d : scheme.deltas())
      grouped[d] += d;
    for (const auto& [d, m] : grouped) {
      delta.push_back(d);
      mass.push_back(m);
      log_mass.push_back(std::log(m));
    }
  }

  // log sum_i mass_i exp(e_i(delta_i))
  template <class Exponent>
  double log_sum(Exponent&& e) const
  {
    double top = -INFINITY;
    std::vector<double> terms(delta.size());
    for (std::size_t i = 0; i < delta.size(); ++i) {
      terms[i] = log_mass[i] + e(delta[i]);
      top = std::max(top, terms[i]);
    }
    if (!std::isfinite(top))
      return top;
    double s = 0.0;
    for (double t : terms)
      s += std::exp(t - top);
    return top + std::log(s);
  }
};

using Fn = std::function<double(double)>;

double bisect(const Fn& f, double lo, double hi)
{
  double flo = f(lo);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    const double fm = f(mid);
    if (fm == 0.0)
      return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

enum class Branch
{
  //! f must be monotone over the whole scan.
  unique,
  //! take the first sign change from the low end; f must be monotone up to it.
  first,
};

/*!
 * Scans f on `points` equally spaced abscissae in [lo, hi], locates the sign
 * change, checks monotonicity and bisects inside it.
 */
double scan_and_solve(const Fn& f, double lo, double hi, Branch branch, const char* id, int points = 400)
{
  std::vector<double> xs(points), fs(points);
  for (int i = 0; i < points; ++i) {
    xs[i] = lo + (hi - lo) * i / (points - 1);
    fs[i] = f(xs[i]);
    if (std::isnan(fs[i]))
      throw Error(ErrorCode::bracket_failure, std::string(id) + ": equation is not finite on the bracket");
  }
  int change = -1;
  for (int i = 0; i + 1 < points; ++i) {
    if ((fs[i] < 0.0) != (fs[i + 1] < 0.0)) {
      change = i;
      break;
    }
  }
  if (change < 0)
    throw Error(ErrorCode::bracket_failure,
                std::string(id) + ": no sign change on [" + std::to_string(lo) + ", " +
                  std::to_string(hi) + "], f = " + std::to_string(fs.front()) + " .. " +
                  std::to_string(fs.back()));
  const int last = branch == Branch::unique ? points - 1 : change + 1;
  const bool increasing = fs[last] > fs[0];
  for (int i = 0; i < last; ++i) {
    const bool ok = increasing ? fs[i + 1] >= fs[i] : fs[i + 1] <= fs[i];
    if (!ok)
      throw Error(ErrorCode::bracket_failure,
                  std::string(id) + ": equation is not monotone on the bracket near " +
                    std::to_string(xs[i]));
  }
  return bisect(f, xs[change], xs[change + 1]);
}

BandwidthSolution finish(const Fn& log_ratio, double log_h, const char* id, double rate)
{
  return {std::exp(log_h), std::expm1(log_ratio(log_h)), id, rate};
}

// int_a^b dx / q_reg(x), integrated in s = log x: the scan pieces are
// geometric, and a = 0 maps to s = -inf.
double q_reg_integral(const GapGroups& g, const std::function<double(double)>& log_abs_phi, double a, double b)
{
  if (b <= a)
    return 0.0;
  auto integrand = [&](double s) {
    const double x = std::exp(s);
    const double lp = log_abs_phi(x);
    return std::exp(s - g.log_sum([&](double d) { return d * lp; }));
  };
  using boost::math::quadrature::gauss_kronrod;
  const double sa = a > 0.0 ? std::log(a) : -INFINITY;
  return gauss_kronrod<double, 31>::integrate(integrand, sa, std::log(b), 15, 1e-9);
}

/*!
 * Density bandwidth: on s = log(1/h),
 *   F(s) = log|phi_reg(U)|^2 - k log(L(U) I(U)),  I(U) = int_0^U dx / q_reg(x),
 * which is decreasing in U. The integral is accumulated along the scan.
 */
BandwidthSolution solve_density(const SamplingScheme& scheme,
                                const std::function<double(double)>& log_abs_phi,
                                const std::function<double(double)>& log_factor,
                                int k,
                                const char* id,
                                const std::function<double(double)>& rate)
{
  const GapGroups g(scheme);
  const double s_lo = std::log(1e-8), s_hi = std::log(1e8);
  const int points = 400;
  std::vector<double> ss(points), us(points), is(points), fs(points);
  auto F = [&](double u, double integral) {
    return 2.0 * log_abs_phi(u) - k * (log_factor(u) + std::log(integral));
  };
  double integral = 0.0, prev_u = 0.0;
  int change = -1;
  for (int i = 0; i < points; ++i) {
    ss[i] = s_lo + (s_hi - s_lo) * i / (points - 1);
    us[i] = std::exp(ss[i]);
    integral += q_reg_integral(g, log_abs_phi, prev_u, us[i]);
    prev_u = us[i];
    is[i] = integral;
    fs[i] = F(us[i], integral);
    if (i > 0 && fs[i] > fs[i - 1])
      throw Error(ErrorCode::bracket_failure, std::string(id) + ": equation is not monotone");
    if (fs[i] < 0.0) {
      change = i - 1;
      break;
    }
  }
  if (change < 0)
    throw Error(ErrorCode::bracket_failure, std::string(id) + ": no crossing for 1/h in [1e-8, 1e8]");
  const double base_u = us[change], base_i = is[change];
  auto f_of_s = [&](double s) {
    const double u = std::exp(s);
    return F(u, base_i + q_reg_integral(g, log_abs_phi, base_u, u));
  };
  const double s_star = bisect(f_of_s, ss[change], ss[change + 1]);
  const double h = std::exp(-s_star);
  return {h, std::expm1(f_of_s(s_star)), id, rate(h)};
}

} // namespace

void validate(const SmoothnessClass& cls)
{
  std::visit(overloaded{
               [](const GPol& c) {
                 if (!(c.beta > 0.0))
                   bad("GPol needs beta > 0");
               },
               [](const GExp& c) {
                 if (!(c.alpha > 0.0 && c.alpha < 0.5))
                   bad("GExp needs alpha in (0, 1/2)");
                 if (!(c.c_phi > 0.0))
                   bad("GExp needs c_phi > 0");
               },
               [](const GCp& c) {
                 if (!(c.C_phi > 0.0 && c.C_phi <= 1.0))
                   bad("GCp needs C_phi in (0, 1]");
                 if (!(c.a >= 0.0) || !(c.rho >= 0.0) || !(c.c_g >= 0.0))
                   bad("GCp needs a, rho, c_g >= 0");
                 const bool grows = c.a > 0.0 || (c.rho > 0.0 && c.c_g > 0.0);
                 if (!grows)
                   bad("GCp equation does not depend on h for these parameters");
               },
               [](const GLocal& c) {
                 if (!(c.a > 0.0 && c.beta > 0.0))
                   bad("GLocal needs a > 0 and beta > 0");
               },
               [](const FPol& c) {
                 if (!(c.beta > 0.5) || c.k < 1)
                   bad("FPol needs beta > 1/2 and k >= 1");
               },
               [](const FExp& c) {
                 if (!(c.alpha > 0.0 && c.alpha <= 2.0) || !(c.c > 0.0) || c.k < 1)
                   bad("FExp needs alpha in (0, 2], c > 0 and k >= 1");
               },
             },
             cls);
}

BandwidthSolution solve_h_global_pol(const SamplingScheme& scheme, double beta)
{
  validate(GPol{beta});
  const double horizon = scheme.horizon();
  if (horizon < 1.0)
    throw Error(ErrorCode::no_root_in_unit_interval, "T < 1: the root lies above h = 1");
  const GapGroups g(scheme);
  Fn f = [&](double x) { return g.log_sum([&](double d) { return (2.0 * d * beta + 2.0) * x; }); };
  const double lo = -0.5 * std::log(horizon) - 1.0;
  const double x = horizon == 1.0 ? 0.0 : scan_and_solve(f, lo, 0.0, Branch::unique, "global_pol");
  return finish(f, x, "global_pol", std::exp(x));
}

BandwidthSolution solve_h_local(const SamplingScheme& scheme, double a, double beta)
{
  validate(GLocal{a, beta});
  const double horizon = scheme.horizon();
  if (horizon < 1.0)
    throw Error(ErrorCode::no_root_in_unit_interval, "T < 1: the root lies above h = 1");
  const GapGroups g(scheme);
  Fn f = [&](double x) {
    return g.log_sum([&](double d) { return (2.0 * beta * d + 2.0 * a + 1.0) * x; });
  };
  const double lo = -std::log(horizon) / (2.0 * a + 1.0) - 1.0;
  const double x = horizon == 1.0 ? 0.0 : scan_and_solve(f, lo, 0.0, Branch::unique, "local_pol");
  return finish(f, x, "local_pol", std::exp(2.0 * a * x));
}

BandwidthSolution solve_h_global_exp(const SamplingScheme& scheme, double alpha, double c_phi)
{
  validate(GExp{alpha, c_phi});
  const GapGroups g(scheme);
  Fn f = [&](double x) {
    const double u_alpha = std::exp(-alpha * x);
    return g.log_sum([&](double d) { return -2.0 * d * c_phi * u_alpha; }) + 2.0 * (alpha - 1.0) * x;
  };
  const double x = scan_and_solve(f, -60.0, 0.0, Branch::first, "global_exp", 1200);
  return finish(f, x, "global_exp", std::exp((1.0 - 2.0 * alpha) * x));
}

BandwidthSolution solve_h_cp(const SamplingScheme& scheme, double a, double rho, double c_g, double C_phi)
{
  validate(GCp{C_phi, a, rho, c_g});
  const GapGroups g(scheme);
  const double log_rhs = g.log_sum([&](double d) { return d * std::log(C_phi); });
  Fn f = [&](double x) { return 2.0 * c_g * std::exp(-rho * x) - 2.0 * a * x - log_rhs; };
  if (f(0.0) > 0.0)
    throw Error(ErrorCode::no_root_in_unit_interval, "compound Poisson equation has no root h < 1");
  double lo = -1.0;
  while (f(lo) <= 0.0) {
    lo *= 2.0;
    if (lo < -1e4)
      throw Error(ErrorCode::bracket_failure, "compound Poisson equation: no bracket");
  }
  const double x = f(0.0) == 0.0 ? 0.0 : scan_and_solve(f, lo, 0.0, Branch::unique, "cp");
  const double rate =
    rho > 0.0 ? std::exp(-2.0 * c_g * std::exp(-rho * x)) : std::exp((2.0 * a - 1.0) * x);
  return finish(f, x, "cp", rate);
}

BandwidthSolution solve_h_density(const SamplingScheme& scheme, const FPol& cls)
{
  validate(cls);
  const double horizon = scheme.horizon();
  return solve_density(
    scheme,
    [&](double u) { return -cls.beta * std::log1p(u); },
    [](double) { return 0.0; },
    cls.k,
    "density_pol",
    [&](double h) { return std::max(std::pow(h, 2.0 * cls.beta - 1.0), 1.0 / horizon); });
}

BandwidthSolution solve_h_density(const SamplingScheme& scheme, const FExp& cls)
{
  validate(cls);
  const double horizon = scheme.horizon();
  std::function<double(double)> log_factor = [](double) { return 0.0; };
  const char* id = "density_exp_small_alpha";
  if (cls.alpha == 0.5) {
    log_factor = [](double u) { return std::log(std::max(std::log(u), 1.0)); };
    id = "density_exp_log";
  } else if (cls.alpha > 0.5) {
    log_factor = [&](double u) { return (2.0 * cls.alpha - 1.0) * std::log(u); };
    id = "density_exp_power";
  }
  return solve_density(
    scheme,
    [&](double u) { return -cls.c * std::pow(u, cls.alpha); },
    log_factor,
    cls.k,
    id,
    [&](double h) {
      double lead = std::pow(h, cls.alpha - 1.0);
      if (cls.alpha >= 0.5)
        lead = std::max(lead, 1.0);
      return std::max(lead * std::exp(-2.0 * cls.c * std::pow(1.0 / h, cls.alpha)), 1.0 / horizon);
    });
}

BandwidthSolution solve_h(const SamplingScheme& scheme, const SmoothnessClass& cls)
{
  return std::visit(overloaded{
                      [&](const GPol& c) { return solve_h_global_pol(scheme, c.beta); },
                      [&](const GExp& c) { return solve_h_global_exp(scheme, c.alpha, c.c_phi); },
                      [&](const GCp& c) { return solve_h_cp(scheme, c.a, c.rho, c.c_g, c.C_phi); },
                      [&](const GLocal& c) { return solve_h_local(scheme, c.a, c.beta); },
                      [&](const FPol& c) { return solve_h_density(scheme, c); },
                      [&](const FExp& c) { return solve_h_density(scheme, c); },
                    },
                    cls);
}

SmoothnessClass parse_smoothness_class(const std::string& text)
{
  static const std::regex re(R"(^\s*([a-z]+)\s*\(([^)]*)\)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re))
    throw Error(ErrorCode::config, "cannot parse smoothness class '" + text + "'");
  std::vector<double> args;
  const std::string inner = m[2];
  std::size_t pos = 0;
  while (pos <= inner.size()) {
    const auto comma = inner.find(',', pos);
    const std::string item = inner.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      args.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::config, "bad number '" + item + "' in '" + text + "'");
    }
    if (comma == std::string::npos)
      break;
    pos = comma + 1;
  }
  const std::string name = m[1];
  auto need = [&](std::size_t count) {
    if (args.size() != count)
      throw Error(ErrorCode::config, name + " takes " + std::to_string(count) + " arguments");
  };
  SmoothnessClass cls;
  if (name == "pol") {
    need(1);
    cls = GPol{args[0]};
  } else if (name == "exp") {
    need(2);
    cls = GExp{args[0], args[1]};
  } else if (name == "cp") {
    need(4);
    cls = GCp{args[3], args[0], args[1], args[2]};
  } else if (name == "local") {
    need(2);
    cls = GLocal{args[0], args[1]};
  } else if (name == "fpol") {
    need(2);
    cls = FPol{args[0], static_cast<int>(args[1])};
  } else if (name == "fexp") {
    need(3);
    cls = FExp{args[0], args[1], static_cast<int>(args[2])};
  } else {
    throw Error(ErrorCode::config, "unknown smoothness class '" + name + "'");
  }
  try {
    validate(cls);
  } catch (const Error& e) {
    throw Error(ErrorCode::config, e.what());
  }
  return cls;
}

} // namespace levy
