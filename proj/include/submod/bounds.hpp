#pragma once

#include <cstdint>

namespace submod::bounds {

// Closed-form quantities shared by the sampling algorithms and the assertion
// layer. All logarithms are natural; sample counts are ceiled at the
// outermost level only, with inner quantities kept in full double precision.
// The *_real variants expose the pre-ceiling values for identity checks.

// h(alpha) = ln(kappa/alpha) / alpha. Throws DomainError when kappa/alpha <= 1
// (h would be non-positive).
double h_alpha(int kappa, double alpha);

// Samples per singleton in the initial max-singleton scan:
// ceil(R^2 * ln(6n/delta) / (2 eps^2)).
std::int64_t n1_budget(int n, double delta, double epsilon, double range_r);
double n1_budget_real(int n, double delta, double epsilon, double range_r);

// Per-decision sample cap of the adaptive sampler:
// ceil(R^2 * ln(6n*h(alpha)/delta) / (2 eps^2)).
std::int64_t n2_budget(int n, double delta, double epsilon, double range_r,
                       int kappa, double alpha);
double n2_budget_real(int n, double delta, double epsilon, double range_r,
                      int kappa, double alpha);

// Confidence radius after t samples when the union bound covers
// `decision_count` marginal-gain decisions:
// R * sqrt(ln(12 * decision_count * t^2 / delta) / (2t)).
double confidence_radius_for_count(std::int64_t t, double decision_count,
                                   double delta, double range_r);

// The radius used by the threshold algorithms, where the union bound covers
// the n*h(alpha) decisions of a full run.
double confidence_radius(std::int64_t t, int n, double delta, double range_r,
                         int kappa, double alpha);

// Gap between the true gain and the threshold: (epsilon + |w - gain|) / 2.
double gap_phi(double w, double gain, double epsilon);

struct CallBound {
  std::int64_t bound = 0;     // min(adaptive branch, N2), clamped below at 1
  double adaptive_real = 0;   // (2R^2/phi^2) * ln(4R^2 sqrt(3n h/delta) / phi^2)
  std::int64_t n2 = 0;
  bool clamped = false;       // adaptive branch fell below 1 sample
};

// Instance-dependent cap on the samples one adaptive accept/reject decision
// can take when the true gain sits at gap phi from the threshold. Throws
// DomainError when phi <= 0.
CallBound call_sample_bound_detail(double phi, int n, double delta,
                                     double range_r, int kappa, double alpha,
                                     double epsilon);
std::int64_t call_sample_bound(double phi, int n, double delta,
                                 double range_r, int kappa, double alpha,
                                 double epsilon);

// Two-sided Hoeffding tail for the mean of N samples in [0,R]:
// 2 exp(-2 N t^2 / R^2).
double hoeffding_tail(std::int64_t n_samples, double t, double range_r);

// Smallest x0 = (2/a) ln(2/a) such that ln(x)/x <= a for all x >= x0.
// Valid for a in (0, ln 2].
double logx_over_x_threshold(double a);

// Upper bound on the number of threshold rounds:
// ceil(ln(kappa/alpha) / ln(1/(1-alpha))).
int rounds_upper(int kappa, double alpha);

}  // namespace submod::bounds
