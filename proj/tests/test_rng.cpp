#include <cmath>

#include "brl/rng.hpp"
#include "doctest.h"

using brl::Rng;

TEST_CASE("identical seeds give identical sequences") {
  Rng a(0xDEADBEEF), b(0xDEADBEEF);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
  Rng a(1), b(2);
  bool differ = false;
  for (int i = 0; i < 8; ++i) differ = differ || (a.next_u64() != b.next_u64());
  CHECK(differ);
}

TEST_CASE("uniform stays in [0,1) with sane mean") {
  Rng rng(3);
  double acc = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    acc += u;
  }
  CHECK(std::fabs(acc / 20000.0 - 0.5) < 0.02);
}

TEST_CASE("uniform_u64 covers the range without bias at small n") {
  Rng rng(4);
  int counts[5] = {0, 0, 0, 0, 0};
  for (int i = 0; i < 50000; ++i) counts[rng.uniform_u64(5)]++;
  for (int c : counts) {
    CHECK(c > 9000);
    CHECK(c < 11000);
  }
  CHECK_THROWS(rng.uniform_u64(0));
}

TEST_CASE("normal has unit variance to statistical tolerance") {
  Rng rng(5);
  double s1 = 0.0, s2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s1 += x;
    s2 += x * x;
  }
  CHECK(std::fabs(s1 / n) < 0.02);
  CHECK(std::fabs(s2 / n - 1.0) < 0.03);
}

TEST_CASE("derived stream seeds are stable and distinct") {
  const auto s1 = Rng::derive_seed(99, 0);
  const auto s2 = Rng::derive_seed(99, 1);
  CHECK(s1 == Rng::derive_seed(99, 0));
  CHECK(s1 != s2);
}
