#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace itolab {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
/// Stateless: the output is a pure function of (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key) noexcept;
};

/// Independent random streams addressed by (seed, stream, index).
///
/// Draw `index` of stream `stream` depends on nothing else, so streams can be
/// generated in any order, in parallel, or extended without perturbing
/// earlier draws.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Two independent standard normals for the pair (2*pair, 2*pair + 1).
  std::pair<double, double> normal_pair(std::uint64_t stream, std::uint64_t pair) const noexcept;
  double normal(std::uint64_t stream, std::uint64_t index) const noexcept;
  /// Uniform on [0, 1).
  double uniform(std::uint64_t stream, std::uint64_t index) const noexcept;

 private:
  std::uint64_t seed_;
};

}  // namespace itolab
