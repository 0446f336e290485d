#include "twrc/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace twrc {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw std::domain_error(std::string(what) + " must be positive");
}

}  // namespace

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double instantaneous_ser_hdmf(double p_r, double p_ra, double p_rb) {
  return p_r + (0.5 - p_r) * (p_ra + p_rb);
}

double e2e_ser_one_way(double p_r, double p_rb) {
  return 1.0 - (1.0 - p_r) * (1.0 - p_rb) - p_r * p_rb;
}

double avg_ser_downlink(double rho) {
  require_positive(rho, "downlink SNR");
  return 0.5 * (1.0 - std::sqrt(rho / (rho + 1.0)));
}

std::array<double, 3> selection_probs_avg(double rho_a, double rho_b) {
  require_positive(rho_a, "rho_a");
  require_positive(rho_b, "rho_b");
  double p_abr = 2.0 * rho_a / (2.0 * rho_a + rho_b) - rho_a / (rho_a + rho_b) +
                 2.0 * rho_b / (2.0 * rho_b + rho_a) - rho_b / (rho_a + rho_b);
  double p_ar = rho_a / (rho_a + 2.0 * rho_b);
  double p_br = rho_b / (2.0 * rho_a + rho_b);
  return {p_abr, p_ar, p_br};
}

double avg_ser_dif(double rho_a, double rho_b, double delta) {
  require_positive(rho_a, "rho_a");
  require_positive(rho_b, "rho_b");
  require_positive(delta, "delta");
  double d2 = delta * delta;
  double first = (2.0 * rho_a / (2.0 * rho_a + rho_b)) *
                 (1.0 - 1.0 / std::sqrt(1.0 + 1.0 / (2.0 * rho_a * d2) + 1.0 / (rho_b * d2)));
  double second = (rho_a / (rho_a + rho_b)) *
                  (1.0 - 1.0 / std::sqrt(1.0 + 1.0 / (rho_a * d2) + 1.0 / (rho_b * d2)));
  return std::clamp(first - second, 0.0, 1.0);
}

std::pair<double, double> avg_ser_dir_terms(double rho_a, double rho_b) {
  require_positive(rho_a, "rho_a");
  require_positive(rho_b, "rho_b");
  double q = q_function(std::sqrt(2.0 * rho_b / rho_a));
  double first = (2.0 * rho_a / (2.0 * rho_b + rho_a)) * q;
  double second = -(2.0 / (1.0 + 2.0 * rho_b / rho_a)) * q;
  return {first, second};
}

double avg_ser_dir(double rho_a, double rho_b) {
  auto [first, second] = avg_ser_dir_terms(rho_a, rho_b);
  return std::clamp(first + second, 0.0, 1.0);
}

SerBreakdown avg_ser_hdmf(const LinkBudget& b) {
  SerBreakdown s;
  s.p_dif = avg_ser_dif(b.rho_a, b.rho_b, b.delta);
  auto [first, second] = avg_ser_dir_terms(b.rho_a, b.rho_b);
  s.p_dir_first = first;
  s.p_dir_second = second;
  s.p_dir = std::clamp(first + second, 0.0, 1.0);
  s.p_r = std::clamp(s.p_dif + s.p_dir, 0.0, 1.0);
  s.p_ra = avg_ser_downlink(b.rho_ra);
  s.p_rb = avg_ser_downlink(b.rho_rb);
  s.p_hdmf = std::clamp(instantaneous_ser_hdmf(s.p_r, s.p_ra, s.p_rb), 0.0, 1.0);
  return s;
}

std::pair<double, double> p_abr_bounds(double alpha, double beta, double rho_a, double rho_b) {
  require_positive(alpha, "alpha");
  require_positive(beta, "beta");
  require_positive(rho_a, "rho_a");
  require_positive(rho_b, "rho_b");
  double phi_a = alpha * alpha * rho_a;
  double phi_b = beta * beta * rho_b;
  double lower = q_function(std::sqrt(2.0 * std::min(phi_a, phi_b)));
  double upper = q_function(std::sqrt(2.0 * phi_a)) + q_function(std::sqrt(2.0 * phi_b));
  return {lower, upper};
}

}  // namespace twrc
