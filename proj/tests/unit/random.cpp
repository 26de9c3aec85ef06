#include <catch_amalgamated.hpp>

#include <cmath>

#include "itolab/random.hpp"
#include "itolab/stats.hpp"

using itolab::Philox4x32;
using itolab::StreamRng;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  // Reference outputs published with Random123 (kat_vectors).
  CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) ==
        Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are pure functions of (seed, stream, index)") {
  const StreamRng a(42), b(42), c(43);
  for (std::uint64_t i = 0; i < 50; ++i) {
    CHECK(a.normal(7, i) == b.normal(7, i));
    CHECK(a.uniform(7, i) == b.uniform(7, i));
  }
  CHECK(a.normal(7, 0) != c.normal(7, 0));
  CHECK(a.normal(7, 0) != a.normal(8, 0));
  const auto [z0, z1] = a.normal_pair(3, 5);
  CHECK(a.normal(3, 10) == z0);
  CHECK(a.normal(3, 11) == z1);
}

TEST_CASE("uniforms lie in [0, 1) and normals have unit variance") {
  const StreamRng rng(1);
  itolab::Moments u, z, z2;
  for (std::uint64_t i = 0; i < 200000; ++i) {
    const double x = rng.uniform(0, i);
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    u.add(x);
    const double g = rng.normal(1, i);
    REQUIRE(std::isfinite(g));
    z.add(g);
    z2.add(g * g);
  }
  CHECK(u.mean_estimate().within(0.5, 5.0));
  CHECK(z.mean_estimate().within(0.0, 5.0));
  CHECK(z2.mean_estimate().within(1.0, 5.0));
}
