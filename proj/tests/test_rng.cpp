#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "flrce/rng.hpp"

using flrce::Rng;

TEST_CASE("rng replays identically for equal seeds") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) {
    REQUIRE(a.next_u64() == b.next_u64());
  }
  Rng c(123), d(124);
  bool all_equal = true;
  for (int i = 0; i < 16; ++i) {
    if (c.next_u64() != d.next_u64()) all_equal = false;
  }
  REQUIRE_FALSE(all_equal);
}

TEST_CASE("uniform stays in [0,1) and below() respects its bound") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  for (int i = 0; i < 10000; ++i) {
    REQUIRE(rng.below(7) < 7);
  }
}

TEST_CASE("dirichlet draws are simplex points") {
  Rng rng(99);
  for (const double alpha : {0.1, 1.0, 50.0}) {
    for (int rep = 0; rep < 50; ++rep) {
      const auto p = rng.dirichlet(alpha, 8);
      REQUIRE(p.size() == 8);
      double sum = 0.0;
      for (const double x : p) {
        REQUIRE(x >= 0.0);
        sum += x;
      }
      REQUIRE(sum == Catch::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("gamma mean tracks the shape parameter") {
  Rng rng(4);
  const double shape = 2.5;
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) sum += rng.gamma(shape);
  const double mean = sum / n;
  REQUIRE(mean == Catch::Approx(shape).margin(0.05));
}

TEST_CASE("sample_indices returns distinct sorted ids") {
  Rng rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const auto s = rng.sample_indices(10, 4);
    REQUIRE(s.size() == 4);
    for (std::size_t i = 1; i < s.size(); ++i) {
      REQUIRE(s[i - 1] < s[i]);
    }
    for (const int id : s) {
      REQUIRE(id >= 0);
      REQUIRE(id < 10);
    }
  }
}

TEST_CASE("derived seeds differ across streams and ids") {
  const auto a = flrce::derive_seed(42, flrce::kStreamTrain, 1, 2);
  const auto b = flrce::derive_seed(42, flrce::kStreamTrain, 2, 1);
  const auto c = flrce::derive_seed(42, flrce::kStreamServer, 1, 2);
  REQUIRE(a != b);
  REQUIRE(a != c);
  REQUIRE(flrce::derive_seed(42, flrce::kStreamTrain, 1, 2) == a);
}
