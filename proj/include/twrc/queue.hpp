#pragma once
#include <Eigen/Dense>
#include <array>
#include <random>
#include <vector>

namespace twrc {

// Four-mode slot scheduler over the tracked pair (Q_a, Q_rb). Rates enter
// only through the pmfs; epsilon records the provisioning margin used to
// build the service pmfs (see provision_rate_pmf).
struct SchedulerModel {
  double lambda = 0.5;  // frame arrivals per slot-time
  double t = 1.0;       // slot length
  std::array<double, 4> f{0.25, 0.25, 0.25, 0.25};
  std::vector<double> c_pmf;  // A->R supported-rate pmf (Mode I)
  std::vector<double> r_pmf;  // R->A,B broadcast pmf (Mode II)
  std::vector<double> q_pmf;  // R->B pmf (Mode III)
  std::array<double, 3> p{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};  // p_abr, p_ar, p_br
  int n_a = 64;  // source buffer cap
  int n_r = 32;  // relay buffer cap
  double epsilon = 0.0;
};

struct QueueStateDist {
  Eigen::VectorXd pi;  // over states s = m*(n_r+1)+k
  double qa_avg = 0.0;
  double qrb_avg = 0.0;
};

struct SimAverages {
  double qa_avg = 0.0;
  double qrb_avg = 0.0;
  int qa_end = 0;
  int qrb_end = 0;
};

// Poisson(lambda*t) probabilities for i = 0..i_max, tail mass folded into
// the last entry so the vector sums to one.
std::vector<double> poisson_pmf(double lambda, double t, int i_max);

// Default rate quantizer n = min(N_rate, floor(log2(1 + |h|^2 rho))) with
// |h| Rayleigh(delta), by CDF differencing.
std::vector<double> rate_pmf_from_fading(double delta, double rho, int n_rate);

// Scales the quantizer's SNR argument (bisection) until the pmf mean equals
// target_mean; ConfigError when the target is not reachable below n_rate.
std::vector<double> provision_rate_pmf(double delta, double rho_base, int n_rate,
                                       double target_mean);

// ConfigError when pmfs/f/p are not distributions or caps are invalid.
void validate_model(const SchedulerModel& model);

// One-step transition matrix of (Q_a, Q_rb), assembled mode by mode with
// weights f_i; arrivals and services beyond the caps fold onto the boundary.
// Every row sums to 1 within 1e-12.
Eigen::MatrixXd build_transition_matrix(const SchedulerModel& model);

// Pi = 1 (I - P + U)^{-1} with U all-ones, cross-checked by power iteration;
// NonErgodicError when the stationary distribution is not unique (singular
// system) or the solution fails the balance equations. n_r gives the grid
// shape s = m*(n_r+1)+k for the queue averages.
QueueStateDist stationary(const Eigen::MatrixXd& p, int n_r);

// Independent slot-by-slot event simulation of the same scheduler.
// ConfigError when slots <= warmup.
SimAverages simulate_schedule(const SchedulerModel& model, long slots, long warmup,
                              std::mt19937_64& rng, int qa0 = 0, int qrb0 = 0);

}  // namespace twrc
