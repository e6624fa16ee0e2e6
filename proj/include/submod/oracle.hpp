#pragma once

#include <cstdint>
#include <vector>

#include "submod/core.hpp"
#include "submod/objectives.hpp"

namespace submod {

struct NoiseModel {
  enum class Kind { none, gaussian };
  Kind kind = Kind::none;
  double sigma = 0.0;

  static NoiseModel none() { return {Kind::none, 0.0}; }
  static NoiseModel gaussian(double sigma);
};

// The only channel algorithms have to the objective: one noisy draw of the
// marginal gain per call, with every draw counted. One oracle instance per
// trial; trials never share an oracle, so the counter needs no
// synchronization.
class MarginalOracle {
 public:
  virtual ~MarginalOracle() = default;

  // One independent draw with expectation equal to the exact marginal gain.
  virtual double sample(const ElementSet& s, int u) = 0;
  virtual int universe_size() const = 0;

  // Mean of t fresh draws; counter advances by t draws' worth.
  double estimate_mean(const ElementSet& s, int u, std::int64_t t);

  std::uint64_t sample_count() const noexcept { return count_; }
  std::uint64_t read_and_reset_counter() noexcept {
    const std::uint64_t c = count_;
    count_ = 0;
    return c;
  }

 protected:
  std::uint64_t count_ = 0;
};

// Exact gain plus one independent noise draw per sample. Gaussian noise is
// deliberately not clipped: the noise is treated as R/2-sub-Gaussian with
// R = 2*sigma, and clipping would bias the mean.
class NoisyMarginalOracle final : public MarginalOracle {
 public:
  NoisyMarginalOracle(const Objective& f, NoiseModel noise, RngStream rng);

  double sample(const ElementSet& s, int u) override;
  int universe_size() const override { return f_->universe_size(); }

 private:
  double exact_gain(const ElementSet& s, int u);

  const Objective* f_;
  NoiseModel noise_;
  RngStream rng_;
  // The exact gain is constant while (S, u) is fixed; cache it per set
  // version so repeated draws within one decision cost O(1).
  std::uint64_t cached_version_ = ~0ULL;
  std::vector<double> cached_gain_;
  std::vector<char> cached_known_;
};

// Marginal spread sampler for influence maximization: each draw realizes the
// live edges once and returns the number of nodes reached from S u {u} but
// not from S. Unbiased for the expected marginal spread under the
// independent cascade model; the natural range scale R is the node count.
class LiveEdgeInfluenceOracle final : public MarginalOracle {
 public:
  LiveEdgeInfluenceOracle(const InfluenceGraph& graph, RngStream rng);

  double sample(const ElementSet& s, int u) override;
  int universe_size() const override { return graph_->node_count; }

 private:
  const InfluenceGraph* graph_;
  RngStream rng_;
  std::vector<char> edge_live_;
  std::vector<char> reached_;
  std::vector<int> frontier_;
};

// Adapter for the setting where only noisy *values* of f can be sampled: one
// marginal draw issues two value draws and subtracts them, advancing the
// counter by 2.
class ValueDifferenceOracle final : public MarginalOracle {
 public:
  ValueDifferenceOracle(const Objective& f, NoiseModel noise, RngStream rng);

  double sample(const ElementSet& s, int u) override;
  int universe_size() const override { return f_->universe_size(); }

 private:
  const Objective* f_;
  NoiseModel noise_;
  RngStream rng_;
};

}  // namespace submod
