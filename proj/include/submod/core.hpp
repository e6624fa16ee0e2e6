#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace submod {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A scalar parameter violated its admissible range.
struct InvalidParameter : Error {
  InvalidParameter(std::string param_name, double param_value,
                   std::string param_constraint);
  std::string name;
  double value;
  std::string constraint;
};

struct KappaExceedsUniverse : Error {
  KappaExceedsUniverse(int kappa, int n);
};

struct ElementOutOfRange : Error {
  ElementOutOfRange(int element, int n);
};

// Argument outside the mathematical domain of a formula.
struct DomainError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& path, int line_number, const std::string& reason);
  int line;
};

struct EmptyDataset : Error {
  using Error::Error;
};

struct EmptyGraph : Error {
  using Error::Error;
};

struct InstanceTooLarge : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// Universe of n elements addressed by index 0..n-1; iteration order is
// always index order.
struct GroundSet {
  int n = 0;
};

// Shared algorithm parameters. kappa is the cardinality budget, epsilon the
// approximation precision, delta the failure probability, alpha the per-round
// threshold decay, range_r the sample range / sub-Gaussian scale of the noisy
// oracle, seed the base for all derived RNG streams.
struct AlgoConfig {
  int kappa = 1;
  double epsilon = 0.1;
  double delta = 0.2;
  double alpha = 0.2;
  double range_r = 2.0;
  std::uint64_t seed = 0;
};

// Throws InvalidParameter / KappaExceedsUniverse on the first violated
// constraint; returns cfg unchanged otherwise.
AlgoConfig validate_config(const AlgoConfig& cfg, const GroundSet& ground);

// ---------------------------------------------------------------------------
// Deterministic randomness
// ---------------------------------------------------------------------------

// Mixes two 64-bit values into one (splitmix64 finalizer); used to derive
// stream ids so that distinct inputs land on statistically unrelated streams.
std::uint64_t mix64(std::uint64_t a, std::uint64_t b) noexcept;

// A self-contained xoshiro256++ stream addressed by (seed, stream_id).
// Same (seed, stream_id) reproduces the identical sequence bit for bit on
// every platform; distinct stream_ids give independent sequences. Copyable
// value type; copies continue independently from the copied state.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  std::uint64_t next_u64() noexcept;

  // Uniform on [0,1) with 53 random bits.
  double uniform() noexcept;

  // Zero-mean gaussian via Box-Muller on explicit uniforms (no reliance on
  // implementation-defined std distributions).
  double gaussian(double sigma) noexcept;

  // Uniform integer in [0, bound); bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept;

  // Fresh independent stream derived from this stream's identity.
  RngStream substream(std::uint64_t id) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline RngStream derive_stream(std::uint64_t seed, std::uint64_t stream_id) {
  return RngStream(seed, stream_id);
}

// ---------------------------------------------------------------------------
// Element sets
// ---------------------------------------------------------------------------

// Insertion-ordered subset of a ground set with O(1) membership and a version
// stamp that changes on every mutation. Stamps are unique across all sets in
// the process, so (version, element) identifies a set state unambiguously
// (oracles key their per-set caches on it).
class ElementSet {
 public:
  explicit ElementSet(int universe_n);

  void add(int u);  // throws ElementOutOfRange; adding a member is an error
  void clear() noexcept;
  bool contains(int u) const noexcept { return member_[static_cast<size_t>(u)] != 0; }
  int size() const noexcept { return static_cast<int>(ordered_.size()); }
  int universe_size() const noexcept { return static_cast<int>(member_.size()); }
  std::span<const int> elements() const noexcept { return ordered_; }
  std::uint64_t version() const noexcept { return version_; }

 private:
  static std::uint64_t next_version() noexcept;

  std::vector<int> ordered_;
  std::vector<char> member_;
  std::uint64_t version_;
};

// ---------------------------------------------------------------------------
// Run instrumentation
// ---------------------------------------------------------------------------

// One accept/reject decision taken by an algorithm. threshold is the value of
// w in force (0 for algorithms without thresholds), samples the noisy draws
// spent on this decision (0 for exact-access algorithms), final_mean the last
// sample mean (the exact gain for exact-access algorithms).
struct DecisionRecord {
  int element = -1;
  int round = 0;
  double threshold = 0.0;
  std::int64_t samples = 0;
  bool accepted = false;
  double final_mean = 0.0;
};

// Full record of one algorithm run.
//
// total_samples == singleton_sample_cost + sum of decisions[i].samples, and
// equals the owning oracle's counter after the run.
struct SolutionTrace {
  std::vector<int> accepted;
  std::vector<DecisionRecord> decisions;
  int rounds_executed = 0;
  std::uint64_t total_samples = 0;
  std::uint64_t singleton_sample_cost = 0;  // n*N1 for threshold algorithms
  std::uint64_t marginal_evaluations = 0;
  double max_singleton_estimate = 0.0;  // the d of the threshold schedule
  bool degenerate_estimate = false;     // all singleton estimates <= 0
};

}  // namespace submod
