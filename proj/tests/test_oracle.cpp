#include <doctest.h>

#include <cmath>

#include "submod/bounds.hpp"
#include "submod/oracle.hpp"
#include "test_support.hpp"

using namespace submod;
using test_support::make_set;

namespace {

CoverageObjective three_tag_objective() {
  // 0:{a,b,c}, 1:{a}
  return CoverageObjective({{0, 1, 2}, {0}}, 3);
}

}  // namespace

TEST_CASE("noiseless samples equal the exact marginal gain") {
  const auto obj = three_tag_objective();
  NoisyMarginalOracle oracle(obj, NoiseModel::none(), derive_stream(1, 0));
  const ElementSet empty(2);
  CHECK(oracle.sample(empty, 0) == 3.0);
  ElementSet s(2);
  s.add(0);
  CHECK(oracle.sample(s, 0) == 0.0);
}

TEST_CASE("gaussian sample mean converges to the exact gain") {
  const auto obj = three_tag_objective();
  NoisyMarginalOracle oracle(obj, NoiseModel::gaussian(1.0),
                             derive_stream(2, 0));
  const ElementSet empty(2);
  const int draws = 100000;
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) sum += oracle.sample(empty, 0);
  CHECK(std::abs(sum / draws - 3.0) <
        3.0 / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("estimate_mean is exact under no noise and counts draws") {
  const auto obj = three_tag_objective();
  NoisyMarginalOracle oracle(obj, NoiseModel::none(), derive_stream(3, 0));
  const ElementSet empty(2);
  CHECK(oracle.sample_count() == 0);
  CHECK(oracle.estimate_mean(empty, 0, 7) == 3.0);
  CHECK(oracle.sample_count() == 7);
  CHECK(oracle.read_and_reset_counter() == 7);
  CHECK(oracle.sample_count() == 0);

  // The n=300 reference budget costs exactly 1821 draws.
  const auto n1 = bounds::n1_budget(300, 0.2, 0.1, 2.0);
  oracle.estimate_mean(empty, 0, n1);
  CHECK(oracle.read_and_reset_counter() == 1821);

  for (int k = 1; k <= 5; ++k) oracle.sample(empty, 1);
  CHECK(oracle.sample_count() == 5);
}

TEST_CASE("identical derived streams give identical means") {
  const auto obj = three_tag_objective();
  NoisyMarginalOracle a(obj, NoiseModel::gaussian(1.0), derive_stream(9, 4));
  NoisyMarginalOracle b(obj, NoiseModel::gaussian(1.0), derive_stream(9, 4));
  const ElementSet empty(2);
  CHECK(a.estimate_mean(empty, 0, 100) == b.estimate_mean(empty, 0, 100));
}

TEST_CASE("sampling an out-of-range element fails") {
  const auto obj = three_tag_objective();
  NoisyMarginalOracle oracle(obj, NoiseModel::none(), derive_stream(1, 1));
  const ElementSet empty(2);
  CHECK_THROWS_AS(oracle.sample(empty, 2), ElementOutOfRange);
  CHECK_THROWS_AS(oracle.sample(empty, -1), ElementOutOfRange);
  CHECK_THROWS_AS(oracle.estimate_mean(empty, 0, 0), DomainError);
}

TEST_CASE("gaussian draws are unbiased across random queries") {
  const auto obj = test_support::random_coverage(20, 12, 5, 71);
  RngStream pick = derive_stream(72, 0);
  const int draws = 100000;
  for (int pair = 0; pair < 20; ++pair) {
    const ElementSet s = test_support::random_subset(20, 8, pick);
    const int u = test_support::random_outside(s, pick);
    const double gain = obj.marginal(s, u);
    NoisyMarginalOracle oracle(obj, NoiseModel::gaussian(1.0),
                               derive_stream(73, static_cast<std::uint64_t>(pair)));
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) sum += oracle.sample(s, u);
    CHECK(std::abs(sum / draws - gain) <=
          4.0 / std::sqrt(static_cast<double>(draws)));
  }
}

TEST_CASE("noiseless oracle is exact on every query") {
  const auto obj = test_support::random_coverage(15, 10, 4, 74);
  NoisyMarginalOracle oracle(obj, NoiseModel::none(), derive_stream(75, 0));
  RngStream pick = derive_stream(76, 0);
  for (int i = 0; i < 200; ++i) {
    const ElementSet s = test_support::random_subset(15, 10, pick);
    const int u = static_cast<int>(pick.uniform_below(15));
    CHECK(oracle.sample(s, u) == obj.marginal(s, u));
  }
}

TEST_CASE("value-difference adapter counts two draws per sample") {
  const auto obj = three_tag_objective();
  ValueDifferenceOracle oracle(obj, NoiseModel::none(), derive_stream(5, 0));
  const ElementSet empty(2);
  CHECK(oracle.sample(empty, 0) == 3.0);
  CHECK(oracle.sample_count() == 2);
  oracle.estimate_mean(empty, 1, 10);
  CHECK(oracle.sample_count() == 22);
}

TEST_CASE("value-difference adapter is unbiased under gaussian value noise") {
  const auto obj = three_tag_objective();
  ValueDifferenceOracle oracle(obj, NoiseModel::gaussian(1.0),
                               derive_stream(6, 0));
  const ElementSet empty(2);
  const int draws = 100000;
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) sum += oracle.sample(empty, 0);
  // Differenced noise has variance 2 sigma^2.
  CHECK(std::abs(sum / draws - 3.0) <
        4.0 * std::sqrt(2.0) / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("live-edge oracle on sure and impossible graphs") {
  const auto path =
      InfluenceGraph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  LiveEdgeInfluenceOracle oracle(path, derive_stream(7, 0));
  const ElementSet empty(3);
  CHECK(oracle.sample(empty, 0) == 3.0);  // reaches the whole path
  ElementSet with_a(3);
  with_a.add(0);
  CHECK(oracle.sample(with_a, 1) == 0.0);  // already reached via a
  CHECK(oracle.sample_count() == 2);

  const auto isolated = InfluenceGraph::from_edges(3, {{0, 1, 0.0}});
  LiveEdgeInfluenceOracle iso(isolated, derive_stream(7, 1));
  CHECK(iso.sample(empty, 2) == 1.0);  // only the new seed itself
}

TEST_CASE("live-edge draws are unbiased for the expected marginal spread") {
  const auto g = InfluenceGraph::generate(8, 20, 51);
  LiveEdgeInfluenceOracle oracle(g, derive_stream(52, 0));
  const ElementSet empty(8);
  const int draws = 50000;
  for (int v = 0; v < 3; ++v) {
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) sum += oracle.sample(empty, v);
    const double fwd = test_support::forward_ic_spread(
        g, {v}, 100000, derive_stream(53, static_cast<std::uint64_t>(v)));
    CHECK(sum / draws == doctest::Approx(fwd).epsilon(0.05));
  }
}
