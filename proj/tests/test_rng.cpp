#include <doctest.h>

#include <cmath>

#include "fogsim/rng.hpp"

using namespace fogsim;

TEST_SUITE("rng") {

TEST_CASE("streams with equal seeds produce equal sequences") {
  RngStream a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t xa = a.next_u64();
    all_equal = all_equal && (xa == b.next_u64());
    any_diff = any_diff || (xa != c.next_u64());
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("uniform_int stays in range and covers all values") {
  RngStream rng(7);
  std::vector<int> counts(6, 0);
  for (int i = 0; i < 60000; ++i) {
    const int v = rng.uniform_int(6);
    REQUIRE(v >= 0);
    REQUIRE(v < 6);
    counts[static_cast<std::size_t>(v)]++;
  }
  for (int c : counts) CHECK(c > 9000);
  CHECK_THROWS(rng.uniform_int(0));
}

TEST_CASE("poisson sample mean tracks the rate") {
  RngStream rng(11);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.poisson(1.8);
  CHECK(sum / n == doctest::Approx(1.8).epsilon(0.02));
  CHECK(rng.poisson(0.0) == 0);
}

TEST_CASE("derived seeds separate components and indices") {
  const std::uint64_t root = 1;
  CHECK(derive_seed(root, "train") != derive_seed(root, "eval"));
  CHECK(derive_seed(root, "train", 0) != derive_seed(root, "train", 1));
  CHECK(derive_seed(root, "train", 3) == derive_seed(root, "train", 3));
  CHECK(derive_seed(2, "train") != derive_seed(3, "train"));
}

}  // TEST_SUITE
