#include "twrc/queue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twrc/errors.hpp"

namespace twrc {

namespace {

bool is_pmf(const std::vector<double>& v) {
  if (v.empty()) return false;
  double sum = 0.0;
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= 1e-9;
}

double pmf_mean(const std::vector<double>& v) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) m += static_cast<double>(i) * v[i];
  return m;
}

double draw_u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int draw_pmf(const std::vector<double>& pmf, std::mt19937_64& rng) {
  double u = draw_u01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < pmf.size(); ++i) {
    acc += pmf[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(pmf.size()) - 1;
}

}  // namespace

std::vector<double> poisson_pmf(double lambda, double t, int i_max) {
  if (lambda < 0.0 || t < 0.0) throw ConfigError("arrival rate and slot length must be >= 0");
  if (i_max < 0) throw ConfigError("poisson support must be non-negative");
  double mu = lambda * t;
  std::vector<double> a(static_cast<std::size_t>(i_max) + 1, 0.0);
  double term = std::exp(-mu);
  double prefix = 0.0;
  for (int i = 0; i < i_max; ++i) {
    a[i] = term;
    prefix += term;
    term *= mu / static_cast<double>(i + 1);
  }
  a[i_max] = std::max(0.0, 1.0 - prefix);
  return a;
}

std::vector<double> rate_pmf_from_fading(double delta, double rho, int n_rate) {
  if (delta <= 0.0) throw ConfigError("fading delta must be positive");
  if (rho <= 0.0) throw ConfigError("SNR must be positive");
  if (n_rate < 1) throw ConfigError("rate levels must be >= 1");
  // |h|^2 is exponential with mean 2 delta^2; P(n >= v) = P(|h|^2 >= (2^v - 1)/rho).
  double mean_power = 2.0 * delta * delta;
  auto tail = [&](int v) {
    return std::exp(-(std::exp2(static_cast<double>(v)) - 1.0) / (rho * mean_power));
  };
  std::vector<double> pmf(static_cast<std::size_t>(n_rate) + 1, 0.0);
  for (int v = 0; v < n_rate; ++v) pmf[v] = std::max(0.0, tail(v) - tail(v + 1));
  pmf[n_rate] = tail(n_rate);
  return pmf;
}

std::vector<double> provision_rate_pmf(double delta, double rho_base, int n_rate,
                                       double target_mean) {
  if (target_mean <= 0.0) throw ConfigError("target service mean must be positive");
  if (target_mean >= static_cast<double>(n_rate) - 0.05)
    throw ConfigError("target service mean not reachable with this rate cap");
  double lo = 1e-12, hi = 1e15;
  auto mean_at = [&](double scale) {
    return pmf_mean(rate_pmf_from_fading(delta, rho_base * scale, n_rate));
  };
  if (mean_at(hi) < target_mean)
    throw ConfigError("target service mean not reachable with this rate cap");
  for (int it = 0; it < 200; ++it) {
    double mid = std::sqrt(lo * hi);
    if (mean_at(mid) < target_mean)
      lo = mid;
    else
      hi = mid;
  }
  return rate_pmf_from_fading(delta, rho_base * hi, n_rate);
}

void validate_model(const SchedulerModel& model) {
  if (model.lambda < 0.0 || model.t < 0.0)
    throw ConfigError("arrival rate and slot length must be >= 0");
  if (model.n_a < 1 || model.n_r < 1) throw ConfigError("buffer caps must be >= 1");
  double fsum = model.f[0] + model.f[1] + model.f[2] + model.f[3];
  for (double x : model.f)
    if (!(x >= 0.0)) throw ConfigError("mode probabilities must be >= 0");
  if (std::abs(fsum - 1.0) > 1e-9) throw ConfigError("mode probabilities must sum to 1");
  double psum = model.p[0] + model.p[1] + model.p[2];
  for (double x : model.p)
    if (!(x >= 0.0)) throw ConfigError("selection probabilities must be >= 0");
  if (std::abs(psum - 1.0) > 1e-9) throw ConfigError("selection probabilities must sum to 1");
  if (!is_pmf(model.c_pmf) || !is_pmf(model.r_pmf) || !is_pmf(model.q_pmf))
    throw ConfigError("rate pmfs must be probability vectors");
}

Eigen::MatrixXd build_transition_matrix(const SchedulerModel& model) {
  validate_model(model);
  const int na = model.n_a, nr = model.n_r;
  const int cols_k = nr + 1;
  const int n = (na + 1) * cols_k;
  const std::vector<double> a = poisson_pmf(model.lambda, model.t, na);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);

  // Distributes `weight` over arrival counts on top of base_m, landing in
  // relay-queue column j.
  auto add_arrivals = [&](int row, int base_m, int j, double weight) {
    if (weight <= 0.0) return;
    for (int i = 0; i <= na; ++i)
      p(row, std::min(base_m + i, na) * cols_k + j) += weight * a[i];
  };

  const double w_move = model.p[0] + model.p[1];  // differential or direct-A
  const double w_hold = model.p[2];               // direct-B: tracked queues idle

  for (int m = 0; m <= na; ++m)
    for (int k = 0; k <= nr; ++k) {
      const int row = m * cols_k + k;
      // Mode I: uplink MAC slot.
      if (m == 0) {
        add_arrivals(row, 0, k, model.f[0]);
      } else {
        for (std::size_t nn = 0; nn < model.c_pmf.size(); ++nn) {
          double w = model.f[0] * w_move * model.c_pmf[nn];
          if (w <= 0.0) continue;
          int moved = std::min<int>(static_cast<int>(nn), m);
          add_arrivals(row, m - moved, std::min(k + moved, nr), w);
        }
        add_arrivals(row, m, k, model.f[0] * w_hold);
      }
      // Mode II: broadcast drains the relay queue.
      for (std::size_t nn = 0; nn < model.r_pmf.size(); ++nn)
        add_arrivals(row, m, std::max(k - static_cast<int>(nn), 0), model.f[1] * model.r_pmf[nn]);
      // Mode III: relay-to-B only.
      for (std::size_t nn = 0; nn < model.q_pmf.size(); ++nn)
        add_arrivals(row, m, std::max(k - static_cast<int>(nn), 0), model.f[2] * model.q_pmf[nn]);
      // Mode IV: tracked queues unchanged.
      add_arrivals(row, m, k, model.f[3]);
    }
  return p;
}

QueueStateDist stationary(const Eigen::MatrixXd& p, int n_r) {
  const Eigen::Index n = p.rows();
  if (n < 1 || p.cols() != n) throw ConfigError("transition matrix must be square");
  const int cols_k = n_r + 1;
  if (n_r < 0 || n % cols_k != 0) throw ConfigError("state count does not match the queue grid");
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = p.row(i).sum();
    if (std::abs(row - 1.0) > 1e-9) throw ConfigError("transition matrix is not row-stochastic");
  }
  // Solve pi (I - P + U) = 1 with U all-ones. The system is nonsingular
  // exactly when the stationary distribution is unique; a vanishing pivot
  // flags multiple recurrent classes (a consistent solve can still come back
  // finite in that case, so the residual alone is not a sufficient check).
  Eigen::MatrixXd m =
      (Eigen::MatrixXd::Identity(n, n) - p + Eigen::MatrixXd::Ones(n, n)).transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (pivots.minCoeff() <= 1e-12 * std::max(1.0, pivots.maxCoeff()))
    throw NonErgodicError("stationary distribution is not unique");
  Eigen::VectorXd pi = lu.solve(rhs);
  if (!pi.allFinite()) throw NonErgodicError("stationary solve produced non-finite values");
  double solve_resid = (m * pi - rhs).cwiseAbs().maxCoeff();
  if (solve_resid > 1e-8) throw NonErgodicError("stationary system is singular");
  if (pi.minCoeff() < -1e-10) throw NonErgodicError("stationary solve left the simplex");
  pi = pi.cwiseMax(0.0);
  double total = pi.sum();
  if (!(total > 0.0)) throw NonErgodicError("stationary solve degenerate");
  pi /= total;
  // Power-iteration cross-check: a true stationary vector is a fixed point.
  Eigen::RowVectorXd v = pi.transpose();
  for (int it = 0; it < 50; ++it) v = v * p;
  double drift = (v.transpose() - pi).cwiseAbs().maxCoeff();
  if (drift > 1e-10) throw NonErgodicError("stationary vector is not a fixed point");

  QueueStateDist out;
  out.pi = pi;
  for (Eigen::Index s = 0; s < n; ++s) {
    out.qa_avg += static_cast<double>(s / cols_k) * pi(s);
    out.qrb_avg += static_cast<double>(s % cols_k) * pi(s);
  }
  return out;
}

SimAverages simulate_schedule(const SchedulerModel& model, long slots, long warmup,
                              std::mt19937_64& rng, int qa0, int qrb0) {
  validate_model(model);
  if (slots <= warmup || warmup < 0) throw ConfigError("slots must exceed warmup");
  if (qa0 < 0 || qa0 > model.n_a || qrb0 < 0 || qrb0 > model.n_r)
    throw ConfigError("initial queue state outside the buffer caps");
  const std::vector<double> arrivals = poisson_pmf(model.lambda, model.t, model.n_a);
  const std::vector<double> f(model.f.begin(), model.f.end());
  const std::vector<double> p(model.p.begin(), model.p.end());
  int qa = qa0, qrb = qrb0;
  double sum_a = 0.0, sum_rb = 0.0;
  for (long s = 0; s < slots; ++s) {
    int mode = draw_pmf(f, rng);
    if (mode == 0) {
      if (qa > 0) {
        int outcome = draw_pmf(p, rng);
        if (outcome != 2) {  // differential or direct-A moves data
          int n = draw_pmf(model.c_pmf, rng);
          int moved = std::min(n, qa);
          qa -= moved;
          qrb = std::min(qrb + moved, model.n_r);
        }
      }
    } else if (mode == 1) {
      qrb = std::max(qrb - draw_pmf(model.r_pmf, rng), 0);
    } else if (mode == 2) {
      qrb = std::max(qrb - draw_pmf(model.q_pmf, rng), 0);
    }
    qa = std::min(qa + draw_pmf(arrivals, rng), model.n_a);
    if (s >= warmup) {
      sum_a += qa;
      sum_rb += qrb;
    }
  }
  double denom = static_cast<double>(slots - warmup);
  return {sum_a / denom, sum_rb / denom, qa, qrb};
}

}  // namespace twrc
