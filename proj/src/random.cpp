#include "itolab/random.hpp"

#include <cmath>
#include <numbers>

namespace itolab {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline Philox4x32::Counter round(const Philox4x32::Counter& c, const Philox4x32::Key& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, c[0], hi0, lo0);
  mulhilo(kMul1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

Philox4x32::Counter make_counter(std::uint64_t a, std::uint64_t b) {
  return {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
}

Philox4x32::Key make_key(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter counter, Key key) noexcept {
  counter = round(counter, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    counter = round(counter, key);
  }
  return counter;
}

std::pair<double, double> StreamRng::normal_pair(std::uint64_t stream,
                                                 std::uint64_t pair) const noexcept {
  const auto out = Philox4x32::generate(make_counter(pair, stream), make_key(seed_));
  const std::uint64_t a = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  const std::uint64_t b = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
  // Box-Muller; u1 is in (0,1) so the logarithm is finite.
  const double u1 = (static_cast<double>(a >> 11) + 0.5) * kTwoPow53Inv;
  const double u2 = static_cast<double>(b >> 11) * kTwoPow53Inv;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

double StreamRng::normal(std::uint64_t stream, std::uint64_t index) const noexcept {
  const auto [z0, z1] = normal_pair(stream, index / 2);
  return (index % 2 == 0) ? z0 : z1;
}

double StreamRng::uniform(std::uint64_t stream, std::uint64_t index) const noexcept {
  // Uniforms live in a counter range disjoint from the normal pairs.
  const auto out = Philox4x32::generate(make_counter(index, stream ^ 0x8000000000000000ull),
                                        make_key(seed_));
  const std::uint64_t a = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  return static_cast<double>(a >> 11) * kTwoPow53Inv;
}

}  // namespace itolab
