// Hot loops over (observation, frequency) pairs. This file is compiled with
// -ffast-math so that exp/sin/cos map to the glibc vector math library;
// sin and cos are kept in separate loops because a fused sincos has no
// vector variant.
#include "spectral_kernel.hpp"

#include <cmath>
#include <vector>

namespace levy::detail {

namespace {

struct Scratch
{
  explicit Scratch(std::size_t n)
    : mag(n)
    , arg(n)
    , c(n)
    , s(n)
  {
  }
  std::vector<double> mag, arg, c, s;
};

void phases(const double* __restrict z, double u, std::size_t n, Scratch& w)
{
  double* __restrict arg = w.arg.data();
  for (std::size_t j = 0; j < n; ++j)
    arg[j] = u * z[j];
}

void trig(std::size_t n, Scratch& w)
{
  const double* __restrict arg = w.arg.data();
  double* __restrict c = w.c.data();
  double* __restrict s = w.s.data();
  for (std::size_t j = 0; j < n; ++j)
    c[j] = std::cos(arg[j]);
  for (std::size_t j = 0; j < n; ++j)
    s[j] = std::sin(arg[j]);
}

void reduce_blocks(const double* __restrict d,
                   const double* __restrict z,
                   const Scratch& w,
                   std::span<const std::size_t> offsets,
                   std::size_t k,
                   std::size_t nodes,
                   KernelOutput& out)
{
  const double* __restrict mag = w.mag.data();
  const double* __restrict c = w.c.data();
  const double* __restrict s = w.s.data();
  const std::size_t blocks = offsets.size() - 1;
  for (std::size_t b = 0; b < blocks; ++b) {
    double pr = 0.0, pi = 0.0, qr = 0.0, qi = 0.0, s2 = 0.0;
    for (std::size_t j = offsets[b]; j < offsets[b + 1]; ++j) {
      const double mc = mag[j] * c[j];
      const double ms = mag[j] * s[j];
      qr += d[j] * mc;
      qi += d[j] * ms;
      pr -= z[j] * ms;
      pi += z[j] * mc;
      s2 += d[j] * d[j] * mag[j] * mag[j];
    }
    const std::size_t at = b * nodes + k;
    out.p_re[at] = pr;
    out.p_im[at] = pi;
    out.q_re[at] = qr;
    out.q_im[at] = qi;
    out.s2[at] = s2;
  }
}

} // namespace

void accumulate_exponential(std::span<const double> deltas,
                            std::span<const double> z,
                            std::span<const std::complex<double>> log_w,
                            double scale,
                            double du,
                            std::span<const std::size_t> offsets,
                            KernelOutput out)
{
  const std::size_t n = deltas.size();
  const std::size_t nodes = log_w.size();
  Scratch w(n);
  const double* __restrict d = deltas.data();
  const double* __restrict zz = z.data();
  for (std::size_t k = 0; k < nodes; ++k) {
    const double u = static_cast<double>(k) * du;
    const double lr = log_w[k].real();
    const double li = log_w[k].imag();
    double* __restrict mag = w.mag.data();
    double* __restrict arg = w.arg.data();
    if (lr == 0.0 && li == 0.0) {
      for (std::size_t j = 0; j < n; ++j)
        mag[j] = scale;
      phases(zz, u, n, w);
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        mag[j] = scale * std::exp(d[j] * lr);
        arg[j] = d[j] * li + u * zz[j];
      }
    }
    trig(n, w);
    reduce_blocks(d, zz, w, offsets, k, nodes, out);
  }
}

void accumulate_tabulated(std::span<const double> deltas,
                          std::span<const double> z,
                          std::span<const std::complex<double>> tables,
                          std::span<const std::size_t> group,
                          double scale,
                          double du,
                          std::size_t nodes,
                          std::span<const std::size_t> offsets,
                          KernelOutput out)
{
  const std::size_t n = deltas.size();
  Scratch w(n);
  std::vector<double> wr(n), wi(n);
  const double* __restrict d = deltas.data();
  const double* __restrict zz = z.data();
  for (std::size_t k = 0; k < nodes; ++k) {
    const double u = static_cast<double>(k) * du;
    phases(zz, u, n, w);
    trig(n, w);
    // (wr + i wi)(c + i s) folded into mag = 1 with rotated c, s
    for (std::size_t j = 0; j < n; ++j) {
      const std::complex<double> wt = scale * tables[group[j] * nodes + k];
      wr[j] = wt.real();
      wi[j] = wt.imag();
    }
    double* __restrict mag = w.mag.data();
    double* __restrict c = w.c.data();
    double* __restrict s = w.s.data();
    for (std::size_t j = 0; j < n; ++j) {
      const double m = std::hypot(wr[j], wi[j]);
      const double cr = wr[j] * c[j] - wi[j] * s[j];
      const double ci = wr[j] * s[j] + wi[j] * c[j];
      mag[j] = m;
      c[j] = m > 0.0 ? cr / m : 0.0;
      s[j] = m > 0.0 ? ci / m : 0.0;
    }
    reduce_blocks(d, zz, w, offsets, k, nodes, out);
  }
}

void weight_distances(std::span<const double> deltas,
                      std::span<const std::complex<double>> log_a,
                      std::span<const std::complex<double>> log_b,
                      double du,
                      std::size_t k_end,
                      std::span<double> out)
{
  const std::size_t n = deltas.size();
  std::vector<double> ma(n), mb(n), sn(n);
  const double* __restrict d = deltas.data();
  double* __restrict acc = out.data();
  for (std::size_t j = 0; j < n; ++j)
    acc[j] = 0.0;
  for (std::size_t k = 0; k <= k_end; ++k) {
    const double ar = log_a[k].real(), br = log_b[k].real();
    const double half_dphase = 0.5 * (log_a[k].imag() - log_b[k].imag());
    const double trap = 2.0 * ((k == 0 || k == k_end) ? 0.5 * du : du);
    double* __restrict pa = ma.data();
    double* __restrict pb = mb.data();
    double* __restrict ps = sn.data();
    for (std::size_t j = 0; j < n; ++j) {
      pa[j] = std::exp(d[j] * ar);
      pb[j] = std::exp(d[j] * br);
    }
    for (std::size_t j = 0; j < n; ++j)
      ps[j] = std::sin(d[j] * half_dphase);
    for (std::size_t j = 0; j < n; ++j) {
      const double diff = pa[j] - pb[j];
      acc[j] += trap * (diff * diff + 4.0 * pa[j] * pb[j] * ps[j] * ps[j]);
    }
  }
}

} // namespace levy::detail
