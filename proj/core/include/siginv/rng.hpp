#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace siginv {

using Rng = std::mt19937_64;

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// SplitMix64 finaliser.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives independent named streams from one root seed, so that adding a
/// consumer of randomness never perturbs the draws of another.
class SeedTree {
 public:
  explicit SeedTree(std::uint64_t root) : root_(root) {}
  std::uint64_t root() const noexcept { return root_; }
  std::uint64_t seed(std::string_view name) const { return splitmix64(root_ ^ fnv1a64(name)); }
  Rng stream(std::string_view name) const { return Rng(seed(name)); }
  SeedTree child(std::string_view name) const { return SeedTree(seed(name)); }

 private:
  std::uint64_t root_;
};

}  // namespace siginv
