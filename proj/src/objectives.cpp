#include "submod/objectives.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace submod {

double Objective::marginal(const ElementSet& s, int u) const {
  ElementSet with(universe_size());
  for (int e : s.elements()) with.add(e);
  if (!with.contains(u)) with.add(u);
  return value(with) - value(s);
}

// ---------------------------------------------------------------------------
// CoverageObjective
// ---------------------------------------------------------------------------

CoverageObjective::CoverageObjective(std::vector<std::vector<int>> item_tags,
                                     int tag_universe_size,
                                     std::vector<std::string> item_ids,
                                     std::vector<std::string> tag_names)
    : item_tags_(std::move(item_tags)),
      tag_universe_size_(tag_universe_size),
      item_ids_(std::move(item_ids)),
      tag_names_(std::move(tag_names)) {
  if (item_tags_.empty()) throw EmptyDataset("coverage objective with no items");
  if (tag_universe_size_ < 0)
    throw InvalidParameter("tag_universe_size", tag_universe_size_, ">=0");
  for (const auto& tags : item_tags_)
    for (int t : tags)
      if (t < 0 || t >= tag_universe_size_)
        throw InvalidParameter("tag_id", t, "in [0, tag_universe_size)");
}

int CoverageObjective::universe_size() const {
  return static_cast<int>(item_tags_.size());
}

std::span<const int> CoverageObjective::tags_of(int item) const {
  if (item < 0 || item >= universe_size())
    throw ElementOutOfRange(item, universe_size());
  return item_tags_[static_cast<size_t>(item)];
}

double CoverageObjective::value(const ElementSet& x) const {
  std::vector<char> seen(static_cast<size_t>(tag_universe_size_), 0);
  int covered = 0;
  for (int item : x.elements())
    for (int t : item_tags_[static_cast<size_t>(item)])
      if (!seen[static_cast<size_t>(t)]) {
        seen[static_cast<size_t>(t)] = 1;
        ++covered;
      }
  return covered;
}

double CoverageObjective::marginal(const ElementSet& s, int u) const {
  if (u < 0 || u >= universe_size()) throw ElementOutOfRange(u, universe_size());
  std::vector<char> seen(static_cast<size_t>(tag_universe_size_), 0);
  for (int item : s.elements())
    for (int t : item_tags_[static_cast<size_t>(item)])
      seen[static_cast<size_t>(t)] = 1;
  int fresh = 0;
  for (int t : item_tags_[static_cast<size_t>(u)])
    if (!seen[static_cast<size_t>(t)]) {
      seen[static_cast<size_t>(t)] = 1;
      ++fresh;
    }
  return fresh;
}

CoverageObjective CoverageObjective::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::vector<int>> item_tags;
  std::vector<std::string> item_ids, tag_names;
  std::unordered_map<std::string, int> tag_index;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError(path, line_no, "expected item_id<TAB>tags");
    std::string id = line.substr(0, tab);
    if (id.empty()) throw ParseError(path, line_no, "empty item id");
    if (!seen_ids.insert(id).second)
      throw ParseError(path, line_no, "duplicate item id '" + id + "'");
    std::vector<int> tags;
    std::string rest = line.substr(tab + 1);
    if (!rest.empty()) {
      std::stringstream ss(rest);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw ParseError(path, line_no, "empty tag");
        auto [it, inserted] =
            tag_index.emplace(tok, static_cast<int>(tag_names.size()));
        if (inserted) tag_names.push_back(tok);
        if (std::find(tags.begin(), tags.end(), it->second) == tags.end())
          tags.push_back(it->second);
      }
    }
    item_ids.push_back(std::move(id));
    item_tags.push_back(std::move(tags));
  }
  if (item_tags.empty()) throw EmptyDataset(path + ": no items");
  const int tag_count = static_cast<int>(tag_names.size());
  return CoverageObjective(std::move(item_tags), tag_count,
                           std::move(item_ids), std::move(tag_names));
}

void CoverageObjective::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  for (size_t i = 0; i < item_tags_.size(); ++i) {
    if (i < item_ids_.size() && !item_ids_[i].empty())
      out << item_ids_[i];
    else
      out << "i" << i;
    out << '\t';
    const auto& tags = item_tags_[i];
    for (size_t j = 0; j < tags.size(); ++j) {
      if (j) out << ',';
      const auto t = static_cast<size_t>(tags[j]);
      if (t < tag_names_.size() && !tag_names_[t].empty())
        out << tag_names_[t];
      else
        out << "t" << tags[j];
    }
    out << '\n';
  }
}

CoverageObjective CoverageObjective::generate(int items, int tags,
                                              std::uint64_t seed,
                                              double zipf_s, int min_tags,
                                              int max_tags) {
  if (items < 1) throw InvalidParameter("items", items, ">=1");
  if (tags < 1) throw InvalidParameter("tags", tags, ">=1");
  if (min_tags < 0 || max_tags < min_tags || max_tags > tags)
    throw InvalidParameter("max_tags", max_tags,
                           "min_tags <= max_tags <= tags");
  RngStream rng = derive_stream(seed, 0x7a67);
  // Zipf CDF over tag ids.
  std::vector<double> cdf(static_cast<size_t>(tags));
  double total = 0.0;
  for (int k = 0; k < tags; ++k) {
    total += 1.0 / std::pow(static_cast<double>(k + 1), zipf_s);
    cdf[static_cast<size_t>(k)] = total;
  }
  std::vector<std::vector<int>> item_tags(static_cast<size_t>(items));
  std::vector<std::string> item_ids, tag_names;
  for (int t = 0; t < tags; ++t) tag_names.push_back("t" + std::to_string(t));
  for (int i = 0; i < items; ++i) {
    item_ids.push_back("i" + std::to_string(i));
    const int want =
        min_tags + static_cast<int>(rng.uniform_below(
                       static_cast<std::uint64_t>(max_tags - min_tags + 1)));
    auto& mine = item_tags[static_cast<size_t>(i)];
    while (static_cast<int>(mine.size()) < want) {
      const double u = rng.uniform() * total;
      const int tag = static_cast<int>(
          std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      if (std::find(mine.begin(), mine.end(), tag) == mine.end())
        mine.push_back(tag);
    }
  }
  return CoverageObjective(std::move(item_tags), tags, std::move(item_ids),
                           std::move(tag_names));
}

// ---------------------------------------------------------------------------
// InfluenceGraph
// ---------------------------------------------------------------------------

InfluenceGraph InfluenceGraph::from_edges(int node_count,
                                          std::vector<Edge> edges) {
  InfluenceGraph g;
  g.node_count = node_count;
  g.edges = std::move(edges);
  g.in_edges.assign(static_cast<size_t>(node_count), {});
  g.out_edges.assign(static_cast<size_t>(node_count), {});
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (e.src < 0 || e.src >= node_count) throw ElementOutOfRange(e.src, node_count);
    if (e.dst < 0 || e.dst >= node_count) throw ElementOutOfRange(e.dst, node_count);
    if (!(e.weight >= 0.0 && e.weight <= 1.0))
      throw InvalidParameter("weight", e.weight, "in [0,1]");
    g.in_edges[static_cast<size_t>(e.dst)].push_back(static_cast<int>(i));
    g.out_edges[static_cast<size_t>(e.src)].push_back(static_cast<int>(i));
  }
  return g;
}

InfluenceGraph InfluenceGraph::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<Edge> edges;
  int max_node = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    long long src = 0, dst = 0;
    double w = 0.0;
    if (!(ss >> src >> dst >> w))
      throw ParseError(path, line_no, "expected `src dst weight`");
    std::string extra;
    if (ss >> extra) throw ParseError(path, line_no, "trailing tokens");
    if (src < 0 || dst < 0)
      throw ParseError(path, line_no, "negative node id");
    if (!(w >= 0.0 && w <= 1.0))
      throw ParseError(path, line_no, "weight outside [0,1]");
    edges.push_back({static_cast<int>(src), static_cast<int>(dst), w});
    max_node = std::max(max_node, static_cast<int>(std::max(src, dst)));
  }
  if (edges.empty()) throw EmptyDataset(path + ": no edges");
  return from_edges(max_node + 1, std::move(edges));
}

void InfluenceGraph::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "# directed edges: src dst weight\n";
  char buf[64];
  for (const auto& e : edges) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g\n", e.src, e.dst, e.weight);
    out << buf;
  }
}

InfluenceGraph InfluenceGraph::generate(int nodes, int edge_count,
                                        std::uint64_t seed) {
  if (nodes < 1) throw InvalidParameter("nodes", nodes, ">=1");
  const long long max_edges =
      static_cast<long long>(nodes) * (nodes - 1);
  if (edge_count < 0 || edge_count > max_edges)
    throw InvalidParameter("edges", edge_count, "in [0, n*(n-1)]");
  RngStream rng = derive_stream(seed, 0x6772);
  std::unordered_set<long long> used;
  std::vector<Edge> edges;
  while (static_cast<int>(edges.size()) < edge_count) {
    const int src = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(nodes)));
    const int dst = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(nodes)));
    if (src == dst) continue;
    const long long key = static_cast<long long>(src) * nodes + dst;
    if (!used.insert(key).second) continue;
    edges.push_back({src, dst, rng.uniform()});
  }
  return from_edges(nodes, std::move(edges));
}

// ---------------------------------------------------------------------------
// Reverse influence sampling
// ---------------------------------------------------------------------------

RRSetCollection::RRSetCollection(std::vector<std::vector<int>> sets,
                                 std::vector<int> roots, int node_count)
    : sets_(std::move(sets)), roots_(std::move(roots)), node_count_(node_count) {
  if (sets_.empty()) throw EmptyDataset("empty RR-set collection");
}

double RRSetCollection::estimate(const ElementSet& x) const {
  if (x.size() == 0) return 0.0;
  int hits = 0;
  for (const auto& rr : sets_) {
    for (int v : rr)
      if (x.contains(v)) {
        ++hits;
        break;
      }
  }
  return static_cast<double>(node_count_) * hits / static_cast<double>(sets_.size());
}

RRSetCollection sample_rr_sets(const InfluenceGraph& graph, int rr_count,
                               RngStream rng) {
  if (graph.node_count < 1) throw EmptyGraph("graph has no nodes");
  if (rr_count < 1) throw DomainError("sample_rr_sets: need M >= 1");
  std::vector<std::vector<int>> sets;
  std::vector<int> roots;
  sets.reserve(static_cast<size_t>(rr_count));
  std::vector<char> visited(static_cast<size_t>(graph.node_count), 0);
  std::vector<int> frontier;
  for (int i = 0; i < rr_count; ++i) {
    const int root = static_cast<int>(
        rng.uniform_below(static_cast<std::uint64_t>(graph.node_count)));
    std::vector<int> rr;
    frontier.clear();
    frontier.push_back(root);
    visited[static_cast<size_t>(root)] = 1;
    rr.push_back(root);
    // BFS over reverse edges with independent live-edge draws.
    for (size_t head = 0; head < frontier.size(); ++head) {
      const int v = frontier[head];
      for (int ei : graph.in_edges[static_cast<size_t>(v)]) {
        const auto& e = graph.edges[static_cast<size_t>(ei)];
        if (visited[static_cast<size_t>(e.src)]) continue;
        if (rng.uniform() < e.weight) {
          visited[static_cast<size_t>(e.src)] = 1;
          frontier.push_back(e.src);
          rr.push_back(e.src);
        }
      }
    }
    for (int v : rr) visited[static_cast<size_t>(v)] = 0;
    std::sort(rr.begin(), rr.end());
    sets.push_back(std::move(rr));
    roots.push_back(root);
  }
  return RRSetCollection(std::move(sets), std::move(roots), graph.node_count);
}

// ---------------------------------------------------------------------------
// InfluenceObjective
// ---------------------------------------------------------------------------

InfluenceObjective::InfluenceObjective(InfluenceGraph graph, int rr_set_count,
                                       std::uint64_t rr_seed)
    : graph_(std::move(graph)),
      collection_(sample_rr_sets(graph_, rr_set_count,
                                 derive_stream(rr_seed, 0x7272))) {
  sets_of_node_.assign(static_cast<size_t>(graph_.node_count), {});
  for (int i = 0; i < collection_.count(); ++i)
    for (int v : collection_.set_at(i))
      sets_of_node_[static_cast<size_t>(v)].push_back(i);
}

int InfluenceObjective::universe_size() const { return graph_.node_count; }

double InfluenceObjective::value(const ElementSet& x) const {
  std::vector<char> hit(static_cast<size_t>(collection_.count()), 0);
  int covered = 0;
  for (int v : x.elements())
    for (int i : sets_of_node_[static_cast<size_t>(v)])
      if (!hit[static_cast<size_t>(i)]) {
        hit[static_cast<size_t>(i)] = 1;
        ++covered;
      }
  return static_cast<double>(graph_.node_count) * covered /
         static_cast<double>(collection_.count());
}

double InfluenceObjective::marginal(const ElementSet& s, int u) const {
  if (u < 0 || u >= universe_size()) throw ElementOutOfRange(u, universe_size());
  std::vector<char> hit(static_cast<size_t>(collection_.count()), 0);
  for (int v : s.elements())
    for (int i : sets_of_node_[static_cast<size_t>(v)])
      hit[static_cast<size_t>(i)] = 1;
  int fresh = 0;
  for (int i : sets_of_node_[static_cast<size_t>(u)])
    if (!hit[static_cast<size_t>(i)]) {
      hit[static_cast<size_t>(i)] = 1;
      ++fresh;
    }
  return static_cast<double>(graph_.node_count) * fresh /
         static_cast<double>(collection_.count());
}

CoverageObjective load_tagged_dataset(const std::string& path) {
  return CoverageObjective::load(path);
}

InfluenceGraph load_graph(const std::string& path) {
  return InfluenceGraph::load(path);
}

}  // namespace submod
