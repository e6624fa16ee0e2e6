#include "submod/core.hpp"

#include <atomic>
#include <limits>
#include <numbers>
#include <sstream>

namespace submod {

namespace {

std::string format_invalid(const std::string& name, double value,
                           const std::string& constraint) {
  std::ostringstream os;
  os << "invalid parameter " << name << "=" << value
     << " (requires " << constraint << ")";
  return os.str();
}

}  // namespace

InvalidParameter::InvalidParameter(std::string param_name, double param_value,
                                   std::string param_constraint)
    : Error(format_invalid(param_name, param_value, param_constraint)),
      name(std::move(param_name)),
      value(param_value),
      constraint(std::move(param_constraint)) {}

KappaExceedsUniverse::KappaExceedsUniverse(int kappa, int n)
    : Error("kappa=" + std::to_string(kappa) + " exceeds universe size n=" +
            std::to_string(n)) {}

ElementOutOfRange::ElementOutOfRange(int element, int n)
    : Error("element " + std::to_string(element) +
            " outside universe [0," + std::to_string(n) + ")") {}

ParseError::ParseError(const std::string& path, int line_number,
                       const std::string& reason)
    : Error(path + ":" + std::to_string(line_number) + ": " + reason),
      line(line_number) {}

AlgoConfig validate_config(const AlgoConfig& cfg, const GroundSet& ground) {
  if (ground.n < 1) throw InvalidParameter("n", ground.n, ">=1");
  if (cfg.kappa <= 0) throw InvalidParameter("kappa", cfg.kappa, ">0");
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon))
    throw InvalidParameter("epsilon", cfg.epsilon, ">0");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
    throw InvalidParameter("delta", cfg.delta, "in (0,1)");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw InvalidParameter("alpha", cfg.alpha, "in (0,1)");
  if (!(cfg.range_r > 0.0) || !std::isfinite(cfg.range_r))
    throw InvalidParameter("range_r", cfg.range_r, ">0");
  if (cfg.kappa > ground.n) throw KappaExceedsUniverse(cfg.kappa, ground.n);
  return cfg;
}

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t mix64(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 0x632be59bd9b4e019ULL);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t x = mix64(seed, stream_id);
  for (auto& s : state_) s = splitmix64(x);
}

std::uint64_t RngStream::next_u64() noexcept {
  const std::uint64_t result = rotl64(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl64(state_[3], 45);
  return result;
}

double RngStream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian(double sigma) noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_ * sigma;
  }
  double u1 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a) * sigma;
}

std::uint64_t RngStream::uniform_below(std::uint64_t bound) noexcept {
  // Lemire's nearly-divisionless unbiased bounded generation.
  unsigned __int128 m =
      static_cast<unsigned __int128>(next_u64()) * bound;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < bound) {
    const std::uint64_t t = (0 - bound) % bound;
    while (lo < t) {
      m = static_cast<unsigned __int128>(next_u64()) * bound;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

RngStream RngStream::substream(std::uint64_t id) const noexcept {
  return RngStream(seed_, mix64(stream_id_, id));
}

std::uint64_t ElementSet::next_version() noexcept {
  static std::atomic<std::uint64_t> counter{0};
  return counter.fetch_add(1, std::memory_order_relaxed) + 1;
}

ElementSet::ElementSet(int universe_n) : version_(next_version()) {
  if (universe_n < 1) throw InvalidParameter("n", universe_n, ">=1");
  member_.assign(static_cast<size_t>(universe_n), 0);
}

void ElementSet::add(int u) {
  if (u < 0 || u >= universe_size()) throw ElementOutOfRange(u, universe_size());
  if (member_[static_cast<size_t>(u)])
    throw Error("element " + std::to_string(u) + " already in set");
  member_[static_cast<size_t>(u)] = 1;
  ordered_.push_back(u);
  version_ = next_version();
}

void ElementSet::clear() noexcept {
  for (int u : ordered_) member_[static_cast<size_t>(u)] = 0;
  ordered_.clear();
  version_ = next_version();
}

}  // namespace submod
