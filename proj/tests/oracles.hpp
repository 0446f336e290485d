#pragma once
// Independent reference implementations the tests compare against. These
// deliberately avoid the library's own code paths: decisions are recomputed
// from first principles (long double enumeration, quadrature, flat event
// enumeration) so a shared bug cannot cancel out.
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "twrc/modem.hpp"
#include "twrc/queue.hpp"

namespace oracle {

using twrc::cplx;

// Exact joint-hypothesis bit decision by long double enumeration over all
// symbol pairs. which: 0 = user a's bit k, 1 = user b's bit k, 2 = xor bit k.
// Returns 1 when the posterior mass of bit=1 is >= that of bit=0.
inline int mixture_map_bit(cplx y, cplx h_a, cplx h_b, double n0, const twrc::Constellation& c,
                           int which, int k) {
  const int s = c.size();
  std::vector<long double> e(static_cast<std::size_t>(s) * s);
  long double m = -1e4900L;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      std::complex<long double> d(y.real(), y.imag());
      std::complex<long double> ha(h_a.real(), h_a.imag()), hb(h_b.real(), h_b.imag());
      std::complex<long double> xi(c.points[i].real(), c.points[i].imag());
      std::complex<long double> xj(c.points[j].real(), c.points[j].imag());
      std::complex<long double> r = d - ha * xi - hb * xj;
      e[i * s + j] = -(r.real() * r.real() + r.imag() * r.imag()) / (long double)n0;
      if (e[i * s + j] > m) m = e[i * s + j];
    }
  long double s1 = 0.0L, s0 = 0.0L;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      int bit = which == 0 ? c.bits[i][k] : which == 1 ? c.bits[j][k] : c.bits[i][k] ^ c.bits[j][k];
      (bit ? s1 : s0) += expl(e[i * s + j] - m);
    }
  return s1 >= s0 ? 1 : 0;
}

// Composite Simpson rule on [a, b].
template <class F>
double simpson(F f, double a, double b, int panels) {
  double h = (b - a) / (2.0 * panels);
  double acc = f(a) + f(b);
  for (int i = 1; i < 2 * panels; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// E[Q(sqrt(2 x))] with x exponential of mean rho, via the substitution
// x = -rho ln u mapping the average onto (0, 1).
inline double avg_q_exponential(double rho) {
  auto f = [rho](double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 0.5;
    return 0.5 * std::erfc(std::sqrt(-rho * std::log(u)));
  };
  return simpson(f, 0.0, 1.0, 200000);
}

// Kolmogorov-Smirnov statistic of samples against a CDF.
template <class Cdf>
double ks_statistic(std::vector<double> samples, Cdf cdf) {
  std::sort(samples.begin(), samples.end());
  double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double c = cdf(samples[i]);
    d = std::max(d, std::abs(c - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - c));
  }
  return d;
}

// Flat enumeration of the scheduler's one-slot events: mode, detection
// outcome, rate draw, then arrivals, each summed as an explicit tuple.
inline Eigen::MatrixXd brute_force_transition(const twrc::SchedulerModel& mdl) {
  const int ck = mdl.n_r + 1;
  const int n = (mdl.n_a + 1) * ck;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  const std::vector<double> arr = twrc::poisson_pmf(mdl.lambda, mdl.t, mdl.n_a);

  for (int m = 0; m <= mdl.n_a; ++m)
    for (int k = 0; k <= mdl.n_r; ++k) {
      const int row = m * ck + k;
      auto land = [&](double w, int base_m, int new_k) {
        for (int i = 0; i <= mdl.n_a; ++i)
          p(row, std::min(base_m + i, mdl.n_a) * ck + new_k) += w * arr[i];
      };
      // Mode I: uplink slot, nothing to send when the source queue is empty.
      if (m == 0) {
        land(mdl.f[0], 0, k);
      } else {
        land(mdl.f[0] * mdl.p[2], m, k);
        for (std::size_t nn = 0; nn < mdl.c_pmf.size(); ++nn) {
          int moved = std::min(static_cast<int>(nn), m);
          land(mdl.f[0] * (mdl.p[0] + mdl.p[1]) * mdl.c_pmf[nn], m - moved,
               std::min(k + moved, mdl.n_r));
        }
      }
      // Modes II and III: downlink slots draining the relay queue.
      for (std::size_t nn = 0; nn < mdl.r_pmf.size(); ++nn)
        land(mdl.f[1] * mdl.r_pmf[nn], m, std::max(k - static_cast<int>(nn), 0));
      for (std::size_t nn = 0; nn < mdl.q_pmf.size(); ++nn)
        land(mdl.f[2] * mdl.q_pmf[nn], m, std::max(k - static_cast<int>(nn), 0));
      // Mode IV: idle.
      land(mdl.f[3], m, k);
    }
  return p;
}

}  // namespace oracle
