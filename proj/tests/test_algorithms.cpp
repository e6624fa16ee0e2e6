#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "submod/algorithms.hpp"
#include "submod/bounds.hpp"
#include "test_support.hpp"

using namespace submod;
using test_support::make_set;

namespace {

AlgoConfig reference_config(int kappa, double epsilon) {
  AlgoConfig cfg;
  cfg.kappa = kappa;
  cfg.epsilon = epsilon;
  cfg.delta = 0.2;
  cfg.alpha = 0.2;
  cfg.range_r = 2.0;
  cfg.seed = 1;
  return cfg;
}

// Exact gain of every decision in a trace, replayed in chronological order.
std::vector<double> replay_gains(const Objective& f,
                                 const SolutionTrace& trace) {
  ElementSet s(f.universe_size());
  std::vector<double> gains;
  for (const auto& d : trace.decisions) {
    gains.push_back(f.marginal(s, d.element));
    if (d.accepted) s.add(d.element);
  }
  return gains;
}

std::int64_t smallest_t_with_radius_below(double target, int n,
                                          const AlgoConfig& cfg) {
  for (std::int64_t t = 1;; ++t) {
    if (bounds::confidence_radius(t, n, cfg.delta, cfg.range_r, cfg.kappa,
                                  cfg.alpha) <= target)
      return t;
  }
}

struct CountingProbe : CsProbe {
  std::int64_t calls = 0;
  void on_sample(std::int64_t, double, double) override { ++calls; }
};

}  // namespace

TEST_CASE("confident_sample exits low/high/exhausted under zero noise") {
  const auto obj = test_support::disjoint_coverage({3, 1});
  NoisyMarginalOracle oracle(obj, NoiseModel::none(), derive_stream(1, 0));
  const int n = 2;
  const AlgoConfig cfg = reference_config(2, 0.1);
  const ElementSet empty(n);

  // Gain 3 against w = gain - 10 eps accepts once C_t <= 11 eps.
  {
    const double w = 3.0 - 10.0 * cfg.epsilon;
    const CsVerdict v = confident_sample(oracle, empty, 0, w, cfg);
    CHECK(v.accept);
    CHECK(v.exit_kind == CsExit::lower_crossed);
    CHECK(v.final_mean == 3.0);
    CHECK(v.samples_used ==
          smallest_t_with_radius_below(11.0 * cfg.epsilon, n, cfg));
    const double phi = bounds::gap_phi(w, 3.0, cfg.epsilon);
    CHECK(v.samples_used <= bounds::call_sample_bound(
                                phi, n, cfg.delta, cfg.range_r, cfg.kappa,
                                cfg.alpha, cfg.epsilon));
  }

  // Mirror case: gain 3 against w = gain + 10 eps rejects.
  {
    const double w = 3.0 + 10.0 * cfg.epsilon;
    const CsVerdict v = confident_sample(oracle, empty, 0, w, cfg);
    CHECK_FALSE(v.accept);
    CHECK(v.exit_kind == CsExit::upper_crossed);
    CHECK(v.samples_used ==
          smallest_t_with_radius_below(11.0 * cfg.epsilon, n, cfg));
  }

  // Gain exactly at the threshold runs the full budget and accepts the tie.
  {
    const CsVerdict v = confident_sample(oracle, empty, 0, 3.0, cfg);
    CHECK(v.accept);
    CHECK(v.exit_kind == CsExit::budget_exhausted);
    CHECK(v.samples_used == bounds::n2_budget(n, cfg.delta, cfg.epsilon,
                                              cfg.range_r, cfg.kappa,
                                              cfg.alpha));
  }
}

TEST_CASE("confident_sample verdicts satisfy their invariants under noise") {
  const auto obj = test_support::random_coverage(15, 10, 4, 17);
  const int n = 15;
  const AlgoConfig cfg = reference_config(5, 0.1);
  const auto n2 = bounds::n2_budget(n, cfg.delta, cfg.epsilon, cfg.range_r,
                                    cfg.kappa, cfg.alpha);
  NoisyMarginalOracle oracle(obj, NoiseModel::gaussian(1.0),
                             derive_stream(18, 0));
  RngStream rng = derive_stream(19, 0);
  for (int i = 0; i < 100; ++i) {
    const ElementSet s = test_support::random_subset(n, 4, rng);
    const int u = test_support::random_outside(s, rng);
    const double w = 4.0 * rng.uniform();
    CountingProbe probe;
    const CsVerdict v = confident_sample(oracle, s, u, w, cfg, &probe);
    REQUIRE(v.samples_used >= 1);
    REQUIRE(v.samples_used <= n2);
    CHECK(probe.calls == v.samples_used);
    const double c = bounds::confidence_radius(v.samples_used, n, cfg.delta,
                                               cfg.range_r, cfg.kappa,
                                               cfg.alpha);
    switch (v.exit_kind) {
      case CsExit::lower_crossed:
        CHECK(v.accept);
        CHECK(v.final_mean - c >= w - cfg.epsilon);
        break;
      case CsExit::upper_crossed:
        CHECK_FALSE(v.accept);
        CHECK(v.final_mean + c <= w + cfg.epsilon);
        break;
      case CsExit::budget_exhausted:
        CHECK(v.samples_used == n2);
        CHECK(v.accept == (v.final_mean >= w));
        break;
    }
  }
}

TEST_CASE("ctg hand trace on a three-item instance") {
  // 0 and 1 duplicate the same three tags, 2 holds a fresh one.
  const CoverageObjective obj({{0, 1, 2}, {0, 1, 2}, {3}}, 4);
  NoisyMarginalOracle oracle(obj, NoiseModel::none(), derive_stream(2, 0));
  const AlgoConfig cfg = reference_config(2, 0.01);
  const GroundSet ground{3};
  const SolutionTrace trace = ctg(oracle, ground, cfg);
  CHECK(trace.max_singleton_estimate == 3.0);
  REQUIRE(trace.accepted.size() == 2);
  CHECK(trace.accepted[0] == 0);
  CHECK(trace.accepted[1] == 2);
  CHECK(test_support::make_set(3, trace.accepted).size() == 2);
  ElementSet s(3);
  for (int e : trace.accepted) s.add(e);
  CHECK(obj.value(s) == 4.0);
  CHECK(obj.value(s) == brute_force_opt(obj, 2).second);
}

TEST_CASE("ctg with budget equal to the universe accepts everything") {
  const auto obj = test_support::disjoint_coverage({1, 2, 3, 1, 2, 3});
  NoisyMarginalOracle oracle(obj, NoiseModel::none(), derive_stream(3, 0));
  const AlgoConfig cfg = reference_config(6, 0.1);
  const SolutionTrace trace = ctg(oracle, GroundSet{6}, cfg);
  CHECK(trace.accepted.size() == 6);
}

TEST_CASE("noiseless ctg decisions are sound on every decision") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto obj = test_support::random_coverage(15, 10, 4, 100 + seed);
    NoisyMarginalOracle oracle(obj, NoiseModel::none(),
                               derive_stream(101, seed));
    const AlgoConfig cfg = reference_config(4, 0.05);
    const SolutionTrace trace = ctg(oracle, GroundSet{15}, cfg);
    const auto gains = replay_gains(obj, trace);
    for (size_t i = 0; i < trace.decisions.size(); ++i) {
      const auto& d = trace.decisions[i];
      if (d.accepted)
        CHECK(gains[i] >= d.threshold - cfg.epsilon);
      else
        CHECK(gains[i] <= d.threshold + cfg.epsilon);
    }
  }
}

TEST_CASE("ctg sample accounting matches the oracle counter") {
  const auto obj = test_support::random_coverage(12, 8, 4, 23);
  NoisyMarginalOracle oracle(obj, NoiseModel::gaussian(1.0),
                             derive_stream(24, 0));
  const AlgoConfig cfg = reference_config(3, 0.1);
  const SolutionTrace trace = ctg(oracle, GroundSet{12}, cfg);
  const auto n1 = bounds::n1_budget(12, cfg.delta, cfg.epsilon, cfg.range_r);
  CHECK(trace.singleton_sample_cost == static_cast<std::uint64_t>(n1) * 12);
  std::uint64_t decision_samples = 0;
  for (const auto& d : trace.decisions)
    decision_samples += static_cast<std::uint64_t>(d.samples);
  CHECK(trace.total_samples == trace.singleton_sample_cost + decision_samples);
  CHECK(trace.total_samples == oracle.sample_count());
  CHECK(trace.marginal_evaluations == 12 + trace.decisions.size());
}

TEST_CASE("ctg respects the call-count bound and solution feasibility") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto obj = test_support::random_coverage(14, 9, 4, 300 + seed);
    NoisyMarginalOracle oracle(obj, NoiseModel::gaussian(1.0),
                               derive_stream(301, seed));
    const AlgoConfig cfg = reference_config(4, 0.1);
    const SolutionTrace trace = ctg(oracle, GroundSet{14}, cfg);
    CHECK(trace.decisions.size() <=
          static_cast<size_t>(14 * bounds::rounds_upper(cfg.kappa, cfg.alpha)));
    CHECK(trace.accepted.size() <= 4);
    // Every accepted element has exactly one accepting decision.
    for (int e : trace.accepted) {
      int accepting = 0;
      for (const auto& d : trace.decisions)
        if (d.element == e && d.accepted) ++accepting;
      CHECK(accepting == 1);
    }
    const auto n2 = bounds::n2_budget(14, cfg.delta, cfg.epsilon, cfg.range_r,
                                      cfg.kappa, cfg.alpha);
    for (const auto& d : trace.decisions) CHECK(d.samples <= n2);
    // Thresholds follow the geometric schedule.
    for (const auto& d : trace.decisions)
      CHECK(d.threshold ==
            doctest::Approx(trace.max_singleton_estimate *
                            std::pow(1.0 - cfg.alpha, d.round))
                .epsilon(1e-12));
  }
}

TEST_CASE("ctg flags a degenerate singleton scan") {
  const CoverageObjective obj({{}, {}, {}}, 0);
  NoisyMarginalOracle oracle(obj, NoiseModel::none(), derive_stream(4, 0));
  const SolutionTrace trace = ctg(oracle, GroundSet{3}, reference_config(2, 0.1));
  CHECK(trace.degenerate_estimate);
  CHECK(trace.accepted.empty());
  CHECK(trace.decisions.empty());
}

TEST_CASE("ctg meets the approximation guarantee on most noisy trials") {
  const int trials = 10;
  int ok = 0;
  const AlgoConfig cfg = reference_config(3, 0.1);
  for (int trial = 0; trial < trials; ++trial) {
    const auto obj = test_support::random_coverage(
        12, 10, 4, 500 + static_cast<std::uint64_t>(trial));
    NoisyMarginalOracle oracle(obj, NoiseModel::gaussian(1.0),
                               derive_stream(501, static_cast<std::uint64_t>(trial)));
    const SolutionTrace trace = ctg(oracle, GroundSet{12}, cfg);
    ElementSet s(12);
    for (int e : trace.accepted) s.add(e);
    const double f_opt = brute_force_opt(obj, 3).second;
    const double target =
        (1.0 - std::exp(-1.0) - cfg.alpha) * f_opt - 2.0 * 3 * cfg.epsilon;
    if (obj.value(s) >= target) ++ok;
  }
  CHECK(ok >= 8);
}

TEST_CASE("eps_ap spends exactly n2 samples per decision") {
  const auto obj = test_support::random_coverage(10, 8, 4, 31);
  NoisyMarginalOracle oracle(obj, NoiseModel::gaussian(1.0),
                             derive_stream(32, 0));
  const AlgoConfig cfg = reference_config(3, 0.2);
  const SolutionTrace trace = eps_ap(oracle, GroundSet{10}, cfg);
  const auto n2 = bounds::n2_budget(10, cfg.delta, cfg.epsilon, cfg.range_r,
                                    cfg.kappa, cfg.alpha);
  REQUIRE(!trace.decisions.empty());
  for (const auto& d : trace.decisions) CHECK(d.samples == n2);
  CHECK(trace.total_samples == oracle.sample_count());
}

TEST_CASE("eps_ap and ctg pick identical sets without noise") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto obj = test_support::random_coverage(15, 10, 4, 600 + seed);
    const AlgoConfig cfg = reference_config(4, 0.01);
    NoisyMarginalOracle o1(obj, NoiseModel::none(), derive_stream(601, seed));
    NoisyMarginalOracle o2(obj, NoiseModel::none(), derive_stream(602, seed));
    const SolutionTrace a = ctg(o1, GroundSet{15}, cfg);
    const SolutionTrace b = eps_ap(o2, GroundSet{15}, cfg);
    CHECK(a.accepted == b.accepted);
  }
}

TEST_CASE("adaptive sampling saves samples against the fixed-budget baseline") {
  int saved = 0;
  const int seeds = 10;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    const auto obj = test_support::random_coverage(20, 12, 5, 700 + seed);
    const AlgoConfig cfg = reference_config(4, 0.1);
    NoisyMarginalOracle o1(obj, NoiseModel::gaussian(1.0),
                           derive_stream(701, seed));
    NoisyMarginalOracle o2(obj, NoiseModel::gaussian(1.0),
                           derive_stream(701, seed));
    const SolutionTrace a = ctg(o1, GroundSet{20}, cfg);
    const SolutionTrace b = eps_ap(o2, GroundSet{20}, cfg);
    if (b.total_samples >= a.total_samples) ++saved;
  }
  CHECK(saved >= 9);
}

TEST_CASE("exact threshold greedy and greedy meet their guarantees") {
  RngStream rng = derive_stream(40, 0);
  for (int inst = 0; inst < 30; ++inst) {
    const int n = 4 + static_cast<int>(rng.uniform_below(9));
    const int kappa = 1 + static_cast<int>(rng.uniform_below(3));
    const auto obj = test_support::random_coverage(
        n, 8, 4, 800 + static_cast<std::uint64_t>(inst));
    const double f_opt = brute_force_opt(obj, kappa).second;

    AlgoConfig cfg = reference_config(kappa, 0.1);
    const SolutionTrace tg = threshold_greedy_exact(obj, cfg);
    ElementSet s(n);
    for (int e : tg.accepted) s.add(e);
    CHECK(obj.value(s) >=
          (1.0 - std::exp(-1.0) - cfg.alpha) * f_opt - 1e-9);

    const SolutionTrace gr = greedy_exact(obj, kappa);
    ElementSet g(n);
    for (int e : gr.accepted) g.add(e);
    CHECK(obj.value(g) >= (1.0 - std::exp(-1.0)) * f_opt - 1e-9);
    CHECK(gr.accepted.size() == static_cast<size_t>(kappa));
  }
}

TEST_CASE("greedy hand trace with a tie broken by index") {
  const CoverageObjective obj({{0, 1}, {1, 2}, {2}}, 3);
  const SolutionTrace trace = greedy_exact(obj, 2);
  REQUIRE(trace.accepted.size() == 2);
  CHECK(trace.accepted[0] == 0);
  CHECK(trace.accepted[1] == 1);
  ElementSet s(3);
  for (int e : trace.accepted) s.add(e);
  CHECK(obj.value(s) == 3.0);
}

TEST_CASE("exp_greedy with k'=1 matches exact greedy when gains are distinct") {
  RngStream wrng = derive_stream(41, 0);
  for (int inst = 0; inst < 10; ++inst) {
    std::vector<double> weights;
    for (int i = 0; i < 10; ++i) weights.push_back(0.5 + 1.5 * wrng.uniform());
    const test_support::WeightedModularObjective obj(weights);
    NoisyMarginalOracle oracle(obj, NoiseModel::none(),
                               derive_stream(42, static_cast<std::uint64_t>(inst)));
    AlgoConfig cfg = reference_config(3, 0.15);
    cfg.seed = static_cast<std::uint64_t>(inst);
    const SolutionTrace ours = exp_greedy(oracle, GroundSet{10}, cfg, 1);
    const SolutionTrace ref = greedy_exact(obj, 3);
    CHECK(ours.accepted == ref.accepted);
    CHECK(ours.total_samples == oracle.sample_count());
  }
}

TEST_CASE("exp_greedy near-tied top pair stays within the per-iteration bound") {
  // Two top gains differ by less than epsilon; the rest sit far below.
  std::vector<double> weights = {5.03, 5.0};
  RngStream wrng = derive_stream(43, 0);
  for (int i = 0; i < 18; ++i) weights.push_back(1.0 + 1.5 * wrng.uniform());
  const test_support::WeightedModularObjective obj(weights);
  NoisyMarginalOracle oracle(obj, NoiseModel::none(), derive_stream(44, 0));
  const AlgoConfig cfg = reference_config(3, 0.1);
  const int n = 20;
  const SolutionTrace trace = exp_greedy(oracle, GroundSet{n}, cfg, 1);
  REQUIRE(!trace.decisions.empty());
  CHECK(trace.decisions[0].element == 0);  // the 5.03 element
  const double r2 = cfg.range_r * cfg.range_r;
  const double eps2 = cfg.epsilon * cfg.epsilon;
  const double per_iteration_cap =
      n * (r2 / eps2) *
      std::log(r2 * cfg.kappa * n / (cfg.delta * eps2));
  CHECK(static_cast<double>(trace.decisions[0].samples) <= per_iteration_cap);
}

TEST_CASE("exp_greedy with k'=kappa fills the budget and stays near greedy") {
  const auto obj = test_support::random_coverage(60, 30, 6, 55);
  const SolutionTrace ref = greedy_exact(obj, 5);
  ElementSet rs(60);
  for (int e : ref.accepted) rs.add(e);
  const double ref_value = obj.value(rs);
  double mean_value = 0.0;
  const int trials = 10;
  for (int trial = 0; trial < trials; ++trial) {
    NoisyMarginalOracle oracle(obj, NoiseModel::gaussian(1.0),
                               derive_stream(56, static_cast<std::uint64_t>(trial)));
    AlgoConfig cfg = reference_config(5, 0.2);
    cfg.seed = static_cast<std::uint64_t>(trial);
    const SolutionTrace trace = exp_greedy(oracle, GroundSet{60}, cfg, 5);
    REQUIRE(trace.accepted.size() == 5);
    CHECK(trace.total_samples == oracle.sample_count());
    ElementSet s(60);
    for (int e : trace.accepted) s.add(e);
    mean_value += obj.value(s);
  }
  mean_value /= trials;
  CHECK(mean_value >= 0.9 * ref_value);
  CHECK(mean_value <= 1.1 * ref_value);
}

TEST_CASE("brute force optimum basics") {
  const CoverageObjective obj({{0}, {0}, {1}}, 2);
  CHECK(brute_force_opt(obj, 2).second == 2.0);
  const auto single = brute_force_opt(obj, 1);
  CHECK(single.second == 1.0);
  CHECK(single.first.size() == 1);
  CHECK_THROWS_AS(
      brute_force_opt(test_support::random_coverage(60, 30, 5, 1), 10),
      InstanceTooLarge);
}

TEST_CASE("greedy equals brute force on modular instances") {
  RngStream rng = derive_stream(45, 0);
  for (int inst = 0; inst < 10; ++inst) {
    std::vector<int> sizes;
    const int n = 5 + static_cast<int>(rng.uniform_below(6));
    for (int i = 0; i < n; ++i)
      sizes.push_back(1 + static_cast<int>(rng.uniform_below(5)));
    const auto obj = test_support::disjoint_coverage(sizes);
    const int kappa = 1 + static_cast<int>(rng.uniform_below(3));
    const SolutionTrace gr = greedy_exact(obj, kappa);
    ElementSet s(n);
    for (int e : gr.accepted) s.add(e);
    CHECK(obj.value(s) == brute_force_opt(obj, kappa).second);
  }
}

TEST_CASE("interval coverage holds for most adaptive calls") {
  const auto obj = test_support::random_coverage(20, 12, 5, 61);
  const AlgoConfig cfg = reference_config(5, 0.1);
  NoisyMarginalOracle oracle(obj, NoiseModel::gaussian(1.0),
                             derive_stream(62, 0));
  RngStream rng = derive_stream(63, 0);
  const int calls = 300;
  int covered = 0;
  for (int i = 0; i < calls; ++i) {
    const ElementSet s = test_support::random_subset(20, 4, rng);
    const int u = test_support::random_outside(s, rng);
    const double gain = obj.marginal(s, u);
    struct Probe : CsProbe {
      double gain = 0.0;
      bool ok = true;
      void on_sample(std::int64_t, double mean, double radius) override {
        if (std::abs(mean - gain) > radius) ok = false;
      }
    } probe;
    probe.gain = gain;
    const double w = gain + (rng.uniform() - 0.5) * cfg.epsilon;
    confident_sample(oracle, s, u, w, cfg, &probe);
    if (probe.ok) ++covered;
  }
  CHECK(static_cast<double>(covered) / calls >= 1.0 - cfg.delta / 3.0);
}

TEST_CASE("max-singleton scan lands within epsilon on most runs") {
  const auto obj = test_support::random_coverage(20, 12, 5, 64);
  const AlgoConfig cfg = reference_config(5, 0.1);
  ElementSet empty(20);
  double exact_max = 0.0;
  for (int s = 0; s < 20; ++s)
    exact_max = std::max(exact_max, obj.marginal(empty, s));
  const int runs = 50;
  int good = 0;
  for (int i = 0; i < runs; ++i) {
    NoisyMarginalOracle oracle(obj, NoiseModel::gaussian(1.0),
                               derive_stream(65, static_cast<std::uint64_t>(i)));
    const double d = estimate_max_singleton(oracle, GroundSet{20}, cfg);
    if (std::abs(d - exact_max) <= cfg.epsilon) ++good;
  }
  CHECK(static_cast<double>(good) / runs >= 1.0 - cfg.delta / 3.0);
}

TEST_CASE("per-decision samples respect the gap-function bound") {
  const auto obj = test_support::random_coverage(20, 12, 5, 66);
  const AlgoConfig cfg = reference_config(5, 0.1);
  NoisyMarginalOracle oracle(obj, NoiseModel::gaussian(1.0),
                             derive_stream(67, 0));
  const SolutionTrace trace = ctg(oracle, GroundSet{20}, cfg);
  const auto gains = replay_gains(obj, trace);
  std::int64_t violations = 0;
  for (size_t i = 0; i < trace.decisions.size(); ++i) {
    const double phi =
        bounds::gap_phi(trace.decisions[i].threshold, gains[i], cfg.epsilon);
    if (trace.decisions[i].samples >
        bounds::call_sample_bound(phi, 20, cfg.delta, cfg.range_r, cfg.kappa,
                                    cfg.alpha, cfg.epsilon))
      ++violations;
  }
  CHECK(static_cast<double>(violations) <=
        cfg.delta * static_cast<double>(trace.decisions.size()));
}

TEST_CASE("invalid algorithm inputs are rejected") {
  const auto obj = test_support::random_coverage(8, 6, 3, 68);
  NoisyMarginalOracle oracle(obj, NoiseModel::none(), derive_stream(69, 0));
  AlgoConfig cfg = reference_config(3, 0.1);
  CHECK_THROWS_AS(ctg(oracle, GroundSet{9}, cfg), InvalidParameter);
  CHECK_THROWS_AS(exp_greedy(oracle, GroundSet{8}, cfg, 0), InvalidParameter);
  CHECK_THROWS_AS(exp_greedy(oracle, GroundSet{8}, cfg, 4), InvalidParameter);
  cfg.kappa = 9;
  CHECK_THROWS_AS(ctg(oracle, GroundSet{8}, cfg), KappaExceedsUniverse);
}
