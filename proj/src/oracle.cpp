#include "submod/oracle.hpp"

#include <algorithm>

namespace submod {

NoiseModel NoiseModel::gaussian(double sigma) {
  if (!(sigma >= 0.0)) throw InvalidParameter("sigma", sigma, ">=0");
  return {Kind::gaussian, sigma};
}

double MarginalOracle::estimate_mean(const ElementSet& s, int u,
                                     std::int64_t t) {
  if (t < 1) throw DomainError("estimate_mean: need t >= 1");
  double sum = 0.0;
  for (std::int64_t i = 0; i < t; ++i) sum += sample(s, u);
  return sum / static_cast<double>(t);
}

NoisyMarginalOracle::NoisyMarginalOracle(const Objective& f, NoiseModel noise,
                                         RngStream rng)
    : f_(&f),
      noise_(noise),
      rng_(rng),
      cached_gain_(static_cast<size_t>(f.universe_size()), 0.0),
      cached_known_(static_cast<size_t>(f.universe_size()), 0) {}

double NoisyMarginalOracle::exact_gain(const ElementSet& s, int u) {
  if (s.version() != cached_version_) {
    cached_version_ = s.version();
    std::fill(cached_known_.begin(), cached_known_.end(), 0);
  }
  const auto ui = static_cast<size_t>(u);
  if (!cached_known_[ui]) {
    cached_gain_[ui] = f_->marginal(s, u);
    cached_known_[ui] = 1;
  }
  return cached_gain_[ui];
}

double NoisyMarginalOracle::sample(const ElementSet& s, int u) {
  if (u < 0 || u >= universe_size()) throw ElementOutOfRange(u, universe_size());
  ++count_;
  const double gain = exact_gain(s, u);
  if (noise_.kind == NoiseModel::Kind::gaussian && noise_.sigma > 0.0)
    return gain + rng_.gaussian(noise_.sigma);
  return gain;
}

LiveEdgeInfluenceOracle::LiveEdgeInfluenceOracle(const InfluenceGraph& graph,
                                                 RngStream rng)
    : graph_(&graph), rng_(rng) {
  if (graph.node_count < 1) throw EmptyGraph("graph has no nodes");
  edge_live_.assign(graph.edges.size(), 0);
  reached_.assign(static_cast<size_t>(graph.node_count), 0);
}

double LiveEdgeInfluenceOracle::sample(const ElementSet& s, int u) {
  if (u < 0 || u >= universe_size()) throw ElementOutOfRange(u, universe_size());
  ++count_;
  for (size_t i = 0; i < graph_->edges.size(); ++i)
    edge_live_[i] = rng_.uniform() < graph_->edges[i].weight ? 1 : 0;
  std::fill(reached_.begin(), reached_.end(), 0);
  frontier_.clear();
  for (int v : s.elements()) {
    reached_[static_cast<size_t>(v)] = 1;
    frontier_.push_back(v);
  }
  for (size_t head = 0; head < frontier_.size(); ++head) {
    const int v = frontier_[head];
    for (int ei : graph_->out_edges[static_cast<size_t>(v)]) {
      if (!edge_live_[static_cast<size_t>(ei)]) continue;
      const int w = graph_->edges[static_cast<size_t>(ei)].dst;
      if (!reached_[static_cast<size_t>(w)]) {
        reached_[static_cast<size_t>(w)] = 1;
        frontier_.push_back(w);
      }
    }
  }
  // Nodes newly reached when u joins the seed set under the same realization.
  if (reached_[static_cast<size_t>(u)]) return 0.0;
  int gained = 0;
  const size_t resume = frontier_.size();
  reached_[static_cast<size_t>(u)] = 1;
  frontier_.push_back(u);
  ++gained;
  for (size_t head = resume; head < frontier_.size(); ++head) {
    const int v = frontier_[head];
    for (int ei : graph_->out_edges[static_cast<size_t>(v)]) {
      if (!edge_live_[static_cast<size_t>(ei)]) continue;
      const int w = graph_->edges[static_cast<size_t>(ei)].dst;
      if (!reached_[static_cast<size_t>(w)]) {
        reached_[static_cast<size_t>(w)] = 1;
        frontier_.push_back(w);
        ++gained;
      }
    }
  }
  return gained;
}

ValueDifferenceOracle::ValueDifferenceOracle(const Objective& f,
                                             NoiseModel noise, RngStream rng)
    : f_(&f), noise_(noise), rng_(rng) {}

double ValueDifferenceOracle::sample(const ElementSet& s, int u) {
  if (u < 0 || u >= universe_size()) throw ElementOutOfRange(u, universe_size());
  count_ += 2;
  ElementSet with(universe_size());
  for (int e : s.elements()) with.add(e);
  if (!with.contains(u)) with.add(u);
  double v_with = f_->value(with);
  double v_without = f_->value(s);
  if (noise_.kind == NoiseModel::Kind::gaussian && noise_.sigma > 0.0) {
    v_with += rng_.gaussian(noise_.sigma);
    v_without += rng_.gaussian(noise_.sigma);
  }
  return v_with - v_without;
}

}  // namespace submod
