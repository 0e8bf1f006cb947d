#include <doctest.h>

#include <set>

#include "otgsa/rng.hpp"

using namespace otgsa;

TEST_CASE("philox known-answer vectors") {
  // Frozen from an independent implementation of the same generator.
  auto out = Philox::block({0, 0, 0, 0}, {0, 0});
  CHECK(out[0] == 0x16554d9eca36314cULL);
  CHECK(out[1] == 0xdb20fe9d672d0fdcULL);
  CHECK(out[2] == 0xd7e772cee186176bULL);
  CHECK(out[3] == 0x7e68b68aec7ba23bULL);

  out = Philox::block({1, 0, 0, 0}, {0, 0});
  CHECK(out[0] == 0x02f4ba6408e4d89bULL);
  CHECK(out[1] == 0x3dd62b0b9ca8c5b2ULL);
  CHECK(out[2] == 0x1c8667a55d902e79ULL);
  CHECK(out[3] == 0x907d7a052fd5b4dcULL);

  out = Philox::block({0xdeadbeef, 0x12345678, 0, 0},
                      {0xcafef00d, 0x9e3779b9});
  CHECK(out[0] == 0x8443d516a3119299ULL);
  CHECK(out[1] == 0xfb689b0060b7b3a9ULL);
  CHECK(out[2] == 0xe3581ea0a9eb907aULL);
  CHECK(out[3] == 0xf5209959e04209bdULL);

  const std::uint64_t ff = ~std::uint64_t{0};
  out = Philox::block({ff, ff, ff, ff}, {ff, ff});
  CHECK(out[0] == 0x87b092c3013fe90bULL);
  CHECK(out[1] == 0x438c3c67be8d0224ULL);
  CHECK(out[2] == 0x9cc7d7c69cd777b6ULL);
  CHECK(out[3] == 0xa09caebf594f0ba0ULL);
}

TEST_CASE("streams are reproducible and label-separated") {
  Philox a = substream(7, "alpha", 0);
  Philox b = substream(7, "alpha", 0);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());

  Philox c = substream(7, "alpha", 1);
  Philox d = substream(7, "beta", 0);
  Philox e = substream(8, "alpha", 0);
  Philox base = substream(7, "alpha", 0);
  int collisions = 0;
  for (int i = 0; i < 64; ++i) {
    const auto x = base.next_u64();
    if (x == c.next_u64()) ++collisions;
    if (x == d.next_u64()) ++collisions;
    if (x == e.next_u64()) ++collisions;
  }
  CHECK(collisions == 0);
}

TEST_CASE("uniform doubles live in [0,1) and look uniform") {
  Philox rng = substream(11, "uniform-check");
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 100000.0 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("bounded draws cover the range without bias") {
  Philox rng = substream(13, "below-check");
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 3000; ++i) seen.insert(rng.next_below(7));
  CHECK(seen.size() == 7);
  CHECK(*seen.rbegin() == 6);
}
