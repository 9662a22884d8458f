#include <cmath>
#include <cstdio>
#include <sstream>

#include "brl/error.hpp"
#include "brl/tensor.hpp"
#include "brl/threading.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace brl;
using brl::testing::max_abs_diff;
using brl::testing::random_tensor;

TEST_CASE("matmul identity leaves the matrix unchanged") {
  const Tensor a = Tensor::matrix({{1, 2}, {3, 4}});
  const Tensor c = matmul(a, Tensor::identity(2));
  CHECK(bits_equal(a, c));
}

TEST_CASE("matmul matches hand arithmetic") {
  // [[1,2]] x [[3],[4]] = [[1*3 + 2*4]] = [[11]]
  const Tensor c = matmul(Tensor::matrix({{1, 2}}), Tensor::matrix({{3}, {4}}));
  CHECK(c.shape() == std::vector<std::size_t>{1, 1});
  CHECK(c[0] == 11.0);
}

TEST_CASE("matmul zero case") {
  Rng rng(1);
  const Tensor z = Tensor::zeros({2, 3});
  const Tensor b = random_tensor(rng, {3, 4});
  const Tensor c = matmul(z, b);
  CHECK(bits_equal(c, Tensor::zeros({2, 4})));
}

TEST_CASE("matmul rejects mismatched shapes and names both") {
  const Tensor a({2, 3});
  const Tensor b({4, 2});
  CHECK_THROWS_WITH_AS(matmul(a, b), doctest::Contains("[2x3]"), ShapeError);
  try {
    matmul(a, b);
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).find("[4x2]") != std::string::npos);
  }
}

TEST_CASE("matmul associativity within 1e-9 relative") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Tensor a = random_tensor(rng, {4, 5});
    const Tensor b = random_tensor(rng, {5, 6});
    const Tensor c = random_tensor(rng, {6, 3});
    const Tensor left = matmul(matmul(a, b), c);
    const Tensor right = matmul(a, matmul(b, c));
    for (std::size_t i = 0; i < left.size(); ++i) {
      CHECK(std::fabs(left[i] - right[i]) <=
            1e-9 * std::max(1.0, std::max(std::fabs(left[i]), std::fabs(right[i]))));
    }
  }
}

TEST_CASE("hadamard examples") {
  CHECK(bits_equal(hadamard(Tensor::vector({1, 2, 3}), Tensor::vector({1, 1, 1})),
                   Tensor::vector({1, 2, 3})));
  CHECK(bits_equal(hadamard(Tensor::vector({1, 2}), Tensor::vector({3, 4})),
                   Tensor::vector({3, 8})));
  CHECK(bits_equal(hadamard(Tensor::vector({5, 6}), Tensor::vector({0, 0})),
                   Tensor::vector({0, 0})));
  CHECK_THROWS_AS(hadamard(Tensor({2}), Tensor({3})), ShapeError);
}

TEST_CASE("hadamard associativity") {
  Rng rng(9);
  SUBCASE("exact when products are exactly representable") {
    // Power-of-two values multiply without rounding, so association cannot
    // change the result.
    Tensor a({17}), b({17}), c({17});
    for (std::size_t i = 0; i < 17; ++i) {
      a[i] = std::ldexp(rng.uniform() < 0.5 ? 1.0 : -1.0, int(rng.uniform_u64(9)) - 4);
      b[i] = std::ldexp(rng.uniform() < 0.5 ? 1.0 : -1.0, int(rng.uniform_u64(9)) - 4);
      c[i] = std::ldexp(rng.uniform() < 0.5 ? 1.0 : -1.0, int(rng.uniform_u64(9)) - 4);
    }
    CHECK(bits_equal(hadamard(hadamard(a, b), c), hadamard(a, hadamard(b, c))));
  }
  SUBCASE("within two ulps on arbitrary finite values") {
    const Tensor a = random_tensor(rng, {17});
    const Tensor b = random_tensor(rng, {17});
    const Tensor c = random_tensor(rng, {17});
    const Tensor lhs = hadamard(hadamard(a, b), c);
    const Tensor rhs = hadamard(a, hadamard(b, c));
    for (std::size_t i = 0; i < 17; ++i) {
      CHECK(std::fabs(lhs[i] - rhs[i]) <= 2e-16 * std::fabs(lhs[i]) * 2.0);
    }
  }
}

TEST_CASE("gaussian_init is reproducible from the seed") {
  Rng r1(42), r2(42);
  const Tensor a = gaussian_init(r1, {4}, 0.02);
  const Tensor b = gaussian_init(r2, {4}, 0.02);
  CHECK(bits_equal(a, b));
}

TEST_CASE("gaussian_init sample mean near zero") {
  Rng rng(123);
  const Tensor t = gaussian_init(rng, {100000}, 1.0);
  const double mean = sum(t) / static_cast<double>(t.size());
  // 5 sigma of the mean estimator is ~0.0158 for 1e5 samples.
  CHECK(mean > -0.02);
  CHECK(mean < 0.02);
}

TEST_CASE("gaussian_init shape contract and parameter validation") {
  Rng rng(5);
  const Tensor t = gaussian_init(rng, {2, 3}, 1.0);
  CHECK(t.shape() == std::vector<std::size_t>{2, 3});
  CHECK(t.size() == 6);
  CHECK_THROWS_AS(gaussian_init(rng, {2}, 0.0), ValueError);
  CHECK_THROWS_AS(gaussian_init(rng, {2}, -1.0), ValueError);
}

TEST_CASE("serialize round-trip is bit-exact") {
  Rng rng(77);
  Tensor t = random_tensor(rng, {3, 4, 2});
  t[0] = 0.0;
  t[1] = -0.0;
  t[2] = 1e-308;
  t[3] = -12345.6789e55;
  std::stringstream ss;
  write_tensor(t, ss);
  const Tensor back = read_tensor(ss);
  CHECK(bits_equal(t, back));
}

TEST_CASE("tensor file io") {
  Rng rng(78);
  const Tensor t = random_tensor(rng, {5});
  const std::string path = "tensor_io_test.ten";
  save_tensor(t, path);
  const Tensor back = load_tensor(path);
  CHECK(bits_equal(t, back));
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_tensor("does_not_exist.ten"), IoError);
}

TEST_CASE("reshape checks element count") {
  const Tensor t({2, 3});
  CHECK(t.reshaped({6}).shape() == std::vector<std::size_t>{6});
  CHECK_THROWS_AS(t.reshaped({4}), ShapeError);
}

TEST_CASE("tile stacks copies of a vector") {
  const Tensor v = Tensor::vector({1, 2});
  const Tensor t = tile(v, 3);
  CHECK(t.shape() == std::vector<std::size_t>{3, 2});
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(t(i, 0) == 1.0);
    CHECK(t(i, 1) == 2.0);
  }
}

TEST_CASE("outer and transpose") {
  const Tensor m = outer(Tensor::vector({1, 2}), Tensor::vector({3, 4}));
  CHECK(bits_equal(m, Tensor::matrix({{3, 4}, {6, 8}})));
  CHECK(bits_equal(transpose(m), Tensor::matrix({{3, 6}, {4, 8}})));
}

TEST_CASE("check_finite names the offending tensor") {
  Tensor t({2});
  t[1] = std::nan("");
  CHECK_THROWS_WITH_AS(t.check_finite("loss"), doctest::Contains("loss"), NumericError);
}

TEST_CASE("matmul is identical for any thread count") {
  Rng rng(31);
  const Tensor a = random_tensor(rng, {33, 17});
  const Tensor b = random_tensor(rng, {17, 29});
  const Tensor single = matmul(a, b);
  brl::set_max_threads(4);
  const Tensor threaded = matmul(a, b);
  brl::set_max_threads(1);
  CHECK(bits_equal(single, threaded));
}
