#include "submod/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "submod/bounds.hpp"

namespace submod {

CsVerdict confident_sample(MarginalOracle& oracle, const ElementSet& s, int u,
                           double w, const AlgoConfig& cfg, CsProbe* probe) {
  const int n = oracle.universe_size();
  const std::int64_t n2 =
      bounds::n2_budget(n, cfg.delta, cfg.epsilon, cfg.range_r, cfg.kappa,
                        cfg.alpha);
  const double decisions = static_cast<double>(n) * bounds::h_alpha(cfg.kappa, cfg.alpha);
  double mean = 0.0;
  for (std::int64_t t = 1; t <= n2; ++t) {
    const double x = oracle.sample(s, u);
    mean += (x - mean) / static_cast<double>(t);
    const double c =
        bounds::confidence_radius_for_count(t, decisions, cfg.delta, cfg.range_r);
    if (probe) probe->on_sample(t, mean, c);
    if (mean - c >= w - cfg.epsilon)
      return {true, t, mean, CsExit::lower_crossed};
    if (mean + c <= w + cfg.epsilon)
      return {false, t, mean, CsExit::upper_crossed};
  }
  return {mean >= w, n2, mean, CsExit::budget_exhausted};
}

double estimate_max_singleton(MarginalOracle& oracle, const GroundSet& ground,
                              const AlgoConfig& cfg) {
  const std::int64_t n1 =
      bounds::n1_budget(ground.n, cfg.delta, cfg.epsilon, cfg.range_r);
  ElementSet empty(ground.n);
  double best = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < ground.n; ++s)
    best = std::max(best, oracle.estimate_mean(empty, s, n1));
  return best;
}

namespace {

// Shared skeleton of the threshold algorithms: max-singleton scan, then
// rounds over the universe with a per-candidate decision function.
SolutionTrace run_threshold_rounds(
    MarginalOracle& oracle, const GroundSet& ground, const AlgoConfig& cfg,
    const std::function<CsVerdict(const ElementSet&, int, double)>& decide) {
  validate_config(cfg, ground);
  if (ground.n != oracle.universe_size())
    throw InvalidParameter("n", ground.n, "matching oracle universe");

  SolutionTrace trace;
  const std::int64_t n1 =
      bounds::n1_budget(ground.n, cfg.delta, cfg.epsilon, cfg.range_r);
  trace.singleton_sample_cost =
      static_cast<std::uint64_t>(n1) * static_cast<std::uint64_t>(ground.n);
  trace.marginal_evaluations = static_cast<std::uint64_t>(ground.n);
  const double d = estimate_max_singleton(oracle, ground, cfg);
  trace.max_singleton_estimate = d;
  trace.total_samples = trace.singleton_sample_cost;
  if (d <= 0.0) {
    // All singleton estimates non-positive: no usable threshold range.
    trace.degenerate_estimate = true;
    return trace;
  }

  ElementSet solution(ground.n);
  ThresholdState state = ThresholdState::start(d);
  while (state.active(cfg) && solution.size() < cfg.kappa) {
    for (int u = 0; u < ground.n; ++u) {
      if (solution.size() >= cfg.kappa) break;
      if (solution.contains(u)) continue;
      const CsVerdict verdict = decide(solution, u, state.w);
      trace.decisions.push_back({u, state.round, state.w, verdict.samples_used,
                                 verdict.accept, verdict.final_mean});
      trace.total_samples += static_cast<std::uint64_t>(verdict.samples_used);
      ++trace.marginal_evaluations;
      if (verdict.accept) solution.add(u);
    }
    state.decay(cfg.alpha);
  }
  trace.rounds_executed = state.round;
  trace.accepted.assign(solution.elements().begin(), solution.elements().end());
  return trace;
}

}  // namespace

SolutionTrace ctg(MarginalOracle& oracle, const GroundSet& ground,
                  const AlgoConfig& cfg) {
  return run_threshold_rounds(
      oracle, ground, cfg,
      [&](const ElementSet& s, int u, double w) {
        return confident_sample(oracle, s, u, w, cfg);
      });
}

SolutionTrace eps_ap(MarginalOracle& oracle, const GroundSet& ground,
                     const AlgoConfig& cfg) {
  validate_config(cfg, ground);
  const std::int64_t n2 =
      bounds::n2_budget(oracle.universe_size(), cfg.delta, cfg.epsilon,
                        cfg.range_r, cfg.kappa, cfg.alpha);
  return run_threshold_rounds(
      oracle, ground, cfg,
      [&](const ElementSet& s, int u, double w) {
        const double mean = oracle.estimate_mean(s, u, n2);
        return CsVerdict{mean >= w, n2, mean, CsExit::budget_exhausted};
      });
}

SolutionTrace threshold_greedy_exact(const Objective& f, const AlgoConfig& cfg) {
  const GroundSet ground{f.universe_size()};
  validate_config(cfg, ground);
  SolutionTrace trace;
  ElementSet empty(ground.n);
  double d = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < ground.n; ++s) d = std::max(d, f.marginal(empty, s));
  trace.marginal_evaluations = static_cast<std::uint64_t>(ground.n);
  trace.max_singleton_estimate = d;
  if (d <= 0.0) {
    trace.degenerate_estimate = true;
    return trace;
  }
  ElementSet solution(ground.n);
  ThresholdState state = ThresholdState::start(d);
  while (state.active(cfg) && solution.size() < cfg.kappa) {
    for (int u = 0; u < ground.n; ++u) {
      if (solution.size() >= cfg.kappa) break;
      if (solution.contains(u)) continue;
      const double gain = f.marginal(solution, u);
      const bool accept = gain >= state.w;
      trace.decisions.push_back({u, state.round, state.w, 0, accept, gain});
      ++trace.marginal_evaluations;
      if (accept) solution.add(u);
    }
    state.decay(cfg.alpha);
  }
  trace.rounds_executed = state.round;
  trace.accepted.assign(solution.elements().begin(), solution.elements().end());
  return trace;
}

SolutionTrace greedy_exact(const Objective& f, int kappa) {
  const GroundSet ground{f.universe_size()};
  if (kappa <= 0) throw InvalidParameter("kappa", kappa, ">0");
  if (kappa > ground.n) throw KappaExceedsUniverse(kappa, ground.n);
  SolutionTrace trace;
  ElementSet solution(ground.n);
  for (int it = 0; it < kappa; ++it) {
    int best = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (int u = 0; u < ground.n; ++u) {
      if (solution.contains(u)) continue;
      const double gain = f.marginal(solution, u);
      ++trace.marginal_evaluations;
      if (gain > best_gain) {
        best_gain = gain;
        best = u;
      }
    }
    trace.decisions.push_back({best, it, 0.0, 0, true, best_gain});
    solution.add(best);
  }
  trace.rounds_executed = kappa;
  trace.accepted.assign(solution.elements().begin(), solution.elements().end());
  return trace;
}

namespace {

// One best-arm selection round over the current candidates. Samples land one
// at a time on the most ambiguous element until some TOP-l instance separates
// its top-l set from the rest at tolerance epsilon. Returns the chosen
// element and the number of samples spent.
struct TopxResult {
  int chosen = -1;
  std::int64_t samples = 0;
  double chosen_mean = 0.0;
};

class RadiusTable {
 public:
  RadiusTable(double decision_count, double delta, double range_r)
      : decision_count_(decision_count), delta_(delta), range_r_(range_r) {}

  double at(std::int64_t t) {
    const auto i = static_cast<size_t>(t);
    while (table_.size() <= i)
      table_.push_back(table_.size() == 0
                           ? std::numeric_limits<double>::infinity()
                           : bounds::confidence_radius_for_count(
                                 static_cast<std::int64_t>(table_.size()),
                                 decision_count_, delta_, range_r_));
    return table_[i];
  }

 private:
  double decision_count_, delta_, range_r_;
  std::vector<double> table_;
};

TopxResult topx_select(MarginalOracle& oracle, const ElementSet& solution,
                       const std::vector<int>& candidates,
                       const AlgoConfig& cfg, int k_prime, RadiusTable& radii,
                       RngStream& pick_rng) {
  const int m = static_cast<int>(candidates.size());
  std::vector<double> mean(static_cast<size_t>(m), 0.0);
  std::vector<std::int64_t> count(static_cast<size_t>(m), 0);
  TopxResult out;

  auto draw = [&](int i) {
    const double x = oracle.sample(solution, candidates[static_cast<size_t>(i)]);
    ++count[static_cast<size_t>(i)];
    mean[static_cast<size_t>(i)] +=
        (x - mean[static_cast<size_t>(i)]) / static_cast<double>(count[static_cast<size_t>(i)]);
    ++out.samples;
  };
  for (int i = 0; i < m; ++i) draw(i);

  std::vector<int> order(static_cast<size_t>(m));
  std::vector<int> reorder(static_cast<size_t>(m));
  std::vector<double> radius(static_cast<size_t>(m));
  std::vector<double> perturbed(static_cast<size_t>(m));
  std::vector<char> in_top(static_cast<size_t>(m));
  const int l_max = std::min(k_prime, m);
  std::int64_t step = 0;

  for (;;) {
    for (int i = 0; i < m; ++i)
      radius[static_cast<size_t>(i)] = radii.at(count[static_cast<size_t>(i)]);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double ma = mean[static_cast<size_t>(a)], mb = mean[static_cast<size_t>(b)];
      return ma != mb ? ma > mb : a < b;
    });

    // Termination: some TOP-l set separated from the rest at tolerance eps.
    for (int l = 1; l <= l_max; ++l) {
      if (l == m) {
        const int pick = order[static_cast<size_t>(
            pick_rng.uniform_below(static_cast<std::uint64_t>(l)))];
        out.chosen = candidates[static_cast<size_t>(pick)];
        out.chosen_mean = mean[static_cast<size_t>(pick)];
        return out;
      }
      double min_lcb = std::numeric_limits<double>::infinity();
      for (int j = 0; j < l; ++j) {
        const int i = order[static_cast<size_t>(j)];
        min_lcb = std::min(min_lcb, mean[static_cast<size_t>(i)] - radius[static_cast<size_t>(i)]);
      }
      double max_ucb = -std::numeric_limits<double>::infinity();
      for (int j = l; j < m; ++j) {
        const int i = order[static_cast<size_t>(j)];
        max_ucb = std::max(max_ucb, mean[static_cast<size_t>(i)] + radius[static_cast<size_t>(i)]);
      }
      if (min_lcb >= max_ucb - cfg.epsilon) {
        const int pick = order[static_cast<size_t>(
            pick_rng.uniform_below(static_cast<std::uint64_t>(l)))];
        out.chosen = candidates[static_cast<size_t>(pick)];
        out.chosen_mean = mean[static_cast<size_t>(pick)];
        return out;
      }
    }

    // No instance separated: serve the TOP-l instances round robin. Perturb
    // means by -radius inside the empirical top set and +radius outside,
    // re-rank, and sample the widest interval in the symmetric difference.
    const int l = 1 + static_cast<int>(step % static_cast<std::int64_t>(l_max));
    ++step;
    std::fill(in_top.begin(), in_top.end(), 0);
    for (int j = 0; j < l && j < m; ++j)
      in_top[static_cast<size_t>(order[static_cast<size_t>(j)])] = 1;
    for (int i = 0; i < m; ++i)
      perturbed[static_cast<size_t>(i)] =
          in_top[static_cast<size_t>(i)]
              ? mean[static_cast<size_t>(i)] - radius[static_cast<size_t>(i)]
              : mean[static_cast<size_t>(i)] + radius[static_cast<size_t>(i)];
    reorder = order;
    std::nth_element(reorder.begin(), reorder.begin() + (l - 1), reorder.end(),
                     [&](int a, int b) {
                       const double pa = perturbed[static_cast<size_t>(a)];
                       const double pb = perturbed[static_cast<size_t>(b)];
                       return pa != pb ? pa > pb : a < b;
                     });
    int ambiguous = -1;
    double widest = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      const int i = reorder[static_cast<size_t>(j)];
      const bool in_new_top = j < l;
      if (in_new_top == static_cast<bool>(in_top[static_cast<size_t>(i)])) continue;
      const double r = radius[static_cast<size_t>(i)];
      if (r > widest || (r == widest && i < ambiguous)) {
        widest = r;
        ambiguous = i;
      }
    }
    if (ambiguous < 0) {
      // Perturbed ranking agrees with the empirical one; the widest interval
      // near the boundary is the remaining source of ambiguity.
      int boundary_in = order[static_cast<size_t>(l - 1)];
      int boundary_out = order[static_cast<size_t>(std::min(l, m - 1))];
      ambiguous = radius[static_cast<size_t>(boundary_in)] >=
                          radius[static_cast<size_t>(boundary_out)]
                      ? boundary_in
                      : boundary_out;
    }
    draw(ambiguous);
  }
}

}  // namespace

SolutionTrace exp_greedy(MarginalOracle& oracle, const GroundSet& ground,
                         const AlgoConfig& cfg, int k_prime) {
  validate_config(cfg, ground);
  if (ground.n != oracle.universe_size())
    throw InvalidParameter("n", ground.n, "matching oracle universe");
  if (k_prime < 1 || k_prime > cfg.kappa)
    throw InvalidParameter("k_prime", k_prime, "in [1, kappa]");

  SolutionTrace trace;
  ElementSet solution(ground.n);
  // Union bound over the n*kappa decisions of a standard-greedy run.
  RadiusTable radii(static_cast<double>(ground.n) * cfg.kappa, cfg.delta,
                    cfg.range_r);
  RngStream pick_rng = derive_stream(cfg.seed, 0x70c5);

  std::vector<int> candidates;
  for (int it = 0; it < cfg.kappa; ++it) {
    candidates.clear();
    for (int u = 0; u < ground.n; ++u)
      if (!solution.contains(u)) candidates.push_back(u);
    if (candidates.empty()) break;
    const TopxResult sel =
        topx_select(oracle, solution, candidates, cfg, k_prime, radii, pick_rng);
    trace.decisions.push_back(
        {sel.chosen, it, 0.0, sel.samples, true, sel.chosen_mean});
    trace.total_samples += static_cast<std::uint64_t>(sel.samples);
    trace.marginal_evaluations += candidates.size();
    solution.add(sel.chosen);
  }
  trace.rounds_executed = static_cast<int>(trace.decisions.size());
  trace.accepted.assign(solution.elements().begin(), solution.elements().end());
  return trace;
}

namespace {

double binomial_guard(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (c > 1e12) return c;  // far past any guard, stop growing
  }
  return c;
}

}  // namespace

std::pair<std::vector<int>, double> brute_force_opt(const Objective& f,
                                                    int kappa) {
  const int n = f.universe_size();
  if (kappa <= 0) throw InvalidParameter("kappa", kappa, ">0");
  if (kappa > n) throw KappaExceedsUniverse(kappa, n);
  if (binomial_guard(n, kappa) > 1e6)
    throw InstanceTooLarge("C(n,kappa) exceeds 10^6 subsets");

  ElementSet probe(n);
  std::vector<int> best;
  double best_value = f.value(probe);  // empty set
  std::vector<int> idx;
  for (int size = 1; size <= kappa; ++size) {
    idx.resize(static_cast<size_t>(size));
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
      probe.clear();
      for (int e : idx) probe.add(e);
      const double v = f.value(probe);
      if (v > best_value) {
        best_value = v;
        best = idx;
      }
      // Advance to the next lexicographic combination.
      int pos = size - 1;
      while (pos >= 0 && idx[static_cast<size_t>(pos)] == n - size + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<size_t>(pos)];
      for (int j = pos + 1; j < size; ++j)
        idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
  }
  return {best, best_value};
}

}  // namespace submod
