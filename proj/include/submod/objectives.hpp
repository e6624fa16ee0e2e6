#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "submod/core.hpp"

namespace submod {

// ---------------------------------------------------------------------------
// Exact ground-truth objectives. These are monotone submodular set functions
// used by oracles, verification and metrics -- never consulted directly by
// the algorithms under test.
// ---------------------------------------------------------------------------

class Objective {
 public:
  virtual ~Objective() = default;
  virtual int universe_size() const = 0;
  virtual double value(const ElementSet& x) const = 0;
  // Default marginal is the value difference f(S u {u}) - f(S).
  virtual double marginal(const ElementSet& s, int u) const;
};

// Tag-coverage data summarization: f(X) = number of distinct tags carried by
// at least one item of X.
class CoverageObjective final : public Objective {
 public:
  CoverageObjective(std::vector<std::vector<int>> item_tags,
                    int tag_universe_size,
                    std::vector<std::string> item_ids = {},
                    std::vector<std::string> tag_names = {});

  int universe_size() const override;
  int tag_universe_size() const { return tag_universe_size_; }
  double value(const ElementSet& x) const override;
  double marginal(const ElementSet& s, int u) const override;
  std::span<const int> tags_of(int item) const;

  // Text format: one item per line, `item_id<TAB>tag1,tag2,...`.
  static CoverageObjective load(const std::string& path);
  void save(const std::string& path) const;

  // Synthetic corpus with Zipf tag popularity: item t-counts are uniform in
  // [min_tags, max_tags], each tag drawn with weight 1/(k+1)^zipf_s.
  static CoverageObjective generate(int items, int tags, std::uint64_t seed,
                                    double zipf_s = 1.0, int min_tags = 2,
                                    int max_tags = 6);

 private:
  std::vector<std::vector<int>> item_tags_;
  int tag_universe_size_;
  std::vector<std::string> item_ids_;
  std::vector<std::string> tag_names_;
};

// ---------------------------------------------------------------------------
// Influence maximization under the independent cascade model.
// ---------------------------------------------------------------------------

struct InfluenceGraph {
  struct Edge {
    int src;
    int dst;
    double weight;  // activation probability in [0,1]
  };

  int node_count = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> in_edges;   // edge indices grouped by dst
  std::vector<std::vector<int>> out_edges;  // edge indices grouped by src

  static InfluenceGraph from_edges(int node_count, std::vector<Edge> edges);

  // Text format: one `src dst weight` per line, '#' starts a comment.
  static InfluenceGraph load(const std::string& path);
  void save(const std::string& path) const;

  // Random graph with distinct directed edges and U[0,1] weights.
  static InfluenceGraph generate(int nodes, int edge_count, std::uint64_t seed);
};

// Reverse-reachable sets sampled from uniform roots under live-edge
// realizations. For a fixed collection, the spread estimate
// n * |{sets hit by X}| / M is a deterministic monotone submodular function.
class RRSetCollection {
 public:
  RRSetCollection(std::vector<std::vector<int>> sets, std::vector<int> roots,
                  int node_count);

  int count() const { return static_cast<int>(sets_.size()); }
  int node_count() const { return node_count_; }
  const std::vector<int>& set_at(int i) const { return sets_[static_cast<size_t>(i)]; }
  const std::vector<int>& roots() const { return roots_; }

  // n * (fraction of RR sets intersecting x).
  double estimate(const ElementSet& x) const;

 private:
  std::vector<std::vector<int>> sets_;
  std::vector<int> roots_;
  int node_count_;
};

// Draws rr_count independent RR sets: uniform root, BFS over reverse edges,
// each edge kept independently with its activation probability.
RRSetCollection sample_rr_sets(const InfluenceGraph& graph, int rr_count,
                               RngStream rng);

// Influence spread objective whose "exact" values are a frozen RIS estimate
// with a dedicated seed (exact spread evaluation is intractable; a
// high-precision estimate stands in as ground truth for metrics).
class InfluenceObjective final : public Objective {
 public:
  InfluenceObjective(InfluenceGraph graph, int rr_set_count,
                     std::uint64_t rr_seed);

  int universe_size() const override;
  double value(const ElementSet& x) const override;
  double marginal(const ElementSet& s, int u) const override;

  const InfluenceGraph& graph() const { return graph_; }
  const RRSetCollection& collection() const { return collection_; }

 private:
  InfluenceGraph graph_;
  RRSetCollection collection_;
  std::vector<std::vector<int>> sets_of_node_;  // inverted index node -> RR ids
};

// File-format entry points named by what they ingest.
CoverageObjective load_tagged_dataset(const std::string& path);
InfluenceGraph load_graph(const std::string& path);

}  // namespace submod
