#pragma once

#include <cstdint>
#include <random>

namespace scfto {

/// Subsystems that own an independent random stream.
enum class Subsystem : std::uint64_t {
  Placement = 1,
  Roles = 2,
  Channel = 3,
  Election = 4,
  HeadAction = 5,
  Observation = 6,
};

/// Node id used for streams that do not belong to a node.
inline constexpr std::uint64_t kNetworkStream = ~std::uint64_t{0};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Seed of the stream owned by (node, subsystem) in a given round. Depends
/// only on the key, so streams never observe each other's consumption.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t node,
                                    Subsystem tag, std::uint64_t round) {
  std::uint64_t h = detail::splitmix64(master);
  h = detail::splitmix64(h ^ node);
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(tag));
  return detail::splitmix64(h ^ round);
}

/// A keyed random stream. Draws are produced from the raw 64-bit engine
/// output so the sequence is identical across standard library vendors.
class Stream {
 public:
  Stream(std::uint64_t master, std::uint64_t node, Subsystem tag,
         std::uint64_t round)
      : engine_(derive_seed(master, node, tag, round)) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, hi].
  double uniform_open_closed(double hi) { return (1.0 - uniform()) * hi; }

  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace scfto
