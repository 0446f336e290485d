#pragma once
#include <array>
#include <utility>

namespace twrc {

// Average-SNR budget for the closed forms (BPSK analysis). rho_a/rho_b are
// the uplink Es/N0 budgets; with the default delta = 1/sqrt(2) the mean
// channel power is 1 and they equal the average received SNRs. rho_ra/rho_rb
// are the average received downlink SNRs fed to avg_ser_downlink directly.
struct LinkBudget {
  double rho_a = 1.0, rho_b = 1.0;
  double rho_ra = 1.0, rho_rb = 1.0;
  double delta = 0.70710678118654752440;
};

struct SerBreakdown {
  double p_r = 0.0;      // relay-side average SER, p_dif + p_dir
  double p_dif = 0.0;
  double p_dir = 0.0;
  double p_dir_first = 0.0;   // the two direct terms are exposed separately:
  double p_dir_second = 0.0;  // their combination cancels identically (see tests)
  double p_ra = 0.0, p_rb = 0.0;
  double p_hdmf = 0.0;
};

// Gaussian tail Q(x) via erfc.
double q_function(double x);

// P_HDMF = P_r + (0.5 - P_r)(P_ra + P_rb), the two-direction average.
double instantaneous_ser_hdmf(double p_r, double p_ra, double p_rb);
// One direction: P_ab = 1 - (1-P_r)(1-P_rb) - P_r*P_rb.
double e2e_ser_one_way(double p_r, double p_rb);

// Rayleigh-averaged downlink SER, rho = average received SNR.
double avg_ser_downlink(double rho);

// (E{p_abr}, E{p_ar}, E{p_br}); the three closed forms sum to 1 exactly.
std::array<double, 3> selection_probs_avg(double rho_a, double rho_b);

// Differential branch average SER, difference of the two closed-form terms,
// clamped to [0, 1].
double avg_ser_dif(double rho_a, double rho_b, double delta);

// Direct branch average SER terms; the second is a (negative) lower-edge
// bound. Returned as (first, second); avg_ser_dir() is their clamped sum.
std::pair<double, double> avg_ser_dir_terms(double rho_a, double rho_b);
double avg_ser_dir(double rho_a, double rho_b);

SerBreakdown avg_ser_hdmf(const LinkBudget& b);

// Q(sqrt(2 min(a^2 rho_a, b^2 rho_b))) < P_abr < Q(sqrt(2 a^2 rho_a)) + Q(sqrt(2 b^2 rho_b)).
std::pair<double, double> p_abr_bounds(double alpha, double beta, double rho_a, double rho_b);

}  // namespace twrc
