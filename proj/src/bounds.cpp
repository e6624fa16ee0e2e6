#include "submod/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "submod/core.hpp"

namespace submod::bounds {

namespace {

std::int64_t ceil_to_count(double x) {
  return static_cast<std::int64_t>(std::ceil(x));
}

}  // namespace

double h_alpha(int kappa, double alpha) {
  if (alpha <= 0.0) throw DomainError("h_alpha: alpha must be positive");
  const double ratio = static_cast<double>(kappa) / alpha;
  if (ratio <= 1.0)
    throw DomainError("h_alpha: kappa/alpha <= 1 makes h non-positive");
  return std::log(ratio) / alpha;
}

double n1_budget_real(int n, double delta, double epsilon, double range_r) {
  return range_r * range_r * std::log(6.0 * n / delta) /
         (2.0 * epsilon * epsilon);
}

std::int64_t n1_budget(int n, double delta, double epsilon, double range_r) {
  return ceil_to_count(n1_budget_real(n, delta, epsilon, range_r));
}

double n2_budget_real(int n, double delta, double epsilon, double range_r,
                      int kappa, double alpha) {
  const double h = h_alpha(kappa, alpha);
  return range_r * range_r * std::log(6.0 * n * h / delta) /
         (2.0 * epsilon * epsilon);
}

std::int64_t n2_budget(int n, double delta, double epsilon, double range_r,
                       int kappa, double alpha) {
  return ceil_to_count(n2_budget_real(n, delta, epsilon, range_r, kappa, alpha));
}

double confidence_radius_for_count(std::int64_t t, double decision_count,
                                   double delta, double range_r) {
  const double td = static_cast<double>(t);
  return range_r *
         std::sqrt(std::log(12.0 * decision_count * td * td / delta) /
                   (2.0 * td));
}

double confidence_radius(std::int64_t t, int n, double delta, double range_r,
                         int kappa, double alpha) {
  return confidence_radius_for_count(t, static_cast<double>(n) * h_alpha(kappa, alpha),
                                     delta, range_r);
}

double gap_phi(double w, double gain, double epsilon) {
  return 0.5 * (epsilon + std::abs(w - gain));
}

CallBound call_sample_bound_detail(double phi, int n, double delta,
                                     double range_r, int kappa, double alpha,
                                     double epsilon) {
  if (!(phi > 0.0)) throw DomainError("call_sample_bound: phi must be positive");
  const double h = h_alpha(kappa, alpha);
  const double r2 = range_r * range_r;
  const double phi2 = phi * phi;
  CallBound out;
  out.n2 = n2_budget(n, delta, epsilon, range_r, kappa, alpha);
  out.adaptive_real =
      (2.0 * r2 / phi2) *
      std::log(4.0 * r2 * std::sqrt(3.0 * n * h / delta) / phi2);
  // For extreme gaps the closed form can dip below one sample (outside the
  // validity range of the ln(x)/x helper bound); clamp there.
  std::int64_t adaptive = ceil_to_count(out.adaptive_real);
  if (out.adaptive_real < 1.0 || !std::isfinite(out.adaptive_real)) {
    adaptive = 1;
    out.clamped = true;
  }
  out.bound = std::min(adaptive, out.n2);
  return out;
}

std::int64_t call_sample_bound(double phi, int n, double delta,
                                 double range_r, int kappa, double alpha,
                                 double epsilon) {
  return call_sample_bound_detail(phi, n, delta, range_r, kappa, alpha,
                                    epsilon)
      .bound;
}

double hoeffding_tail(std::int64_t n_samples, double t, double range_r) {
  if (n_samples < 1) throw DomainError("hoeffding_tail: need N >= 1");
  if (!(t > 0.0)) throw DomainError("hoeffding_tail: need t > 0");
  if (!(range_r > 0.0)) throw DomainError("hoeffding_tail: need R > 0");
  const double nd = static_cast<double>(n_samples);
  return 2.0 * std::exp(-2.0 * nd * t * t / (range_r * range_r));
}

double logx_over_x_threshold(double a) {
  // a <= ln 2 keeps the threshold >= 2, where ln(x)/x is decreasing.
  if (!(a > 0.0) || a > std::log(2.0))
    throw DomainError("logx_over_x_threshold: need a in (0, ln 2]");
  return (2.0 / a) * std::log(2.0 / a);
}

int rounds_upper(int kappa, double alpha) {
  const double rounds =
      std::log(static_cast<double>(kappa) / alpha) / std::log(1.0 / (1.0 - alpha));
  return static_cast<int>(std::ceil(rounds));
}

}  // namespace submod::bounds
