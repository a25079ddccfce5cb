#include <doctest.h>

#include <random>
#include <vector>

#include "gmon/error.hpp"
#include "gmon/local_statistics.hpp"
#include "gmon/rng.hpp"
#include "support/oracles.hpp"

using namespace gmon;

TEST_CASE("cusum_step examples") {
  const CusumParams p{0.5};
  CHECK(cusum_step({0.0}, 0.0, p).s_plus == 0.0);
  CHECK(cusum_step({2.0}, 1.0, p).s_plus == doctest::Approx(2.375));
  CHECK(cusum_step({0.1}, -3.0, p).s_plus == 0.0);
  CHECK_THROWS_AS(CusumParams{0.0}.validate(), InvalidParameter);
}

TEST_CASE("cusum oracle examples") {
  CHECK(oracle::cusum({}, 0.5) == 0.0);
  const double one[] = {1.0};
  CHECK(oracle::cusum(one, 0.5) == doctest::Approx(0.375));
}

TEST_CASE("folded cusum_step matches the change-point oracle") {
  Rng rng(2024);
  std::uniform_int_distribution<int> len(0, 50);
  std::normal_distribution<double> z;
  const double mus[] = {-0.5, -0.25, 0.25, 0.5, 1.0};
  for (int trial = 0; trial < 2000; ++trial) {
    const double mu = mus[trial % 5];
    std::vector<double> xs(static_cast<std::size_t>(len(rng)));
    for (auto& x : xs) x = z(rng) + 0.3 * mu;
    CusumState s;
    for (double x : xs) s = cusum_step(s, x, {mu});
    CHECK(s.s_plus == doctest::Approx(oracle::cusum(xs, mu)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("cusum_step is nondecreasing in x") {
  const CusumParams p{0.5};
  double prev = -1.0;
  for (double x = -3.0; x <= 3.0; x += 0.01) {
    const double s = cusum_step({0.4}, x, p).s_plus;
    CHECK(s >= prev);
    prev = s;
  }
}

TEST_CASE("adaptive mu hats") {
  const AdaptiveParams p;
  AdaptiveCusumState s;
  auto mu = adaptive_mu_hats(s, p);
  CHECK(mu.positive == 0.25);
  CHECK(mu.negative == -0.25);
  s.s1 = 6.0;
  s.t1 = 4.0;
  CHECK(adaptive_mu_hats(s, p).positive == doctest::Approx(0.875));
  s.s1 = -10.0;
  CHECK(adaptive_mu_hats(s, p).positive == 0.25);
}

TEST_CASE("adaptive cusum steps") {
  const AdaptiveParams p;
  auto up = adaptive_cusum_step({}, 1.0, p);
  CHECK(up.c1 == doctest::Approx(0.21875));
  CHECK(up.c2 == 0.0);
  auto down = adaptive_cusum_step({}, -1.0, p);
  CHECK(down.c1 == 0.0);
  CHECK(down.c2 == doctest::Approx(0.21875));
  auto flat = adaptive_cusum_step(adaptive_cusum_step({}, 0.0, p), 0.0, p);
  CHECK(flat.c1 == 0.0);

  CHECK(adaptive_stat({}) == 0.0);
  CHECK(adaptive_stat({1.2, 0.3}) == 1.2);
  CHECK(adaptive_stat({0.0, 2.5}) == 2.5);

  CHECK_THROWS_AS((AdaptiveParams{-0.1, 1.0, 4.0}.validate()), InvalidParameter);
}

TEST_CASE("adaptive cusum is sign antisymmetric") {
  const AdaptiveParams p;
  Rng rng(7);
  std::normal_distribution<double> z(0.2, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    AdaptiveCusumState a, b;
    for (int t = 0; t < 200; ++t) {
      const double x = z(rng);
      a = adaptive_cusum_step(a, x, p);
      b = adaptive_cusum_step(b, -x, p);
      REQUIRE(a.c1 == b.c2);
      REQUIRE(a.c2 == b.c1);
      REQUIRE(a.c1 >= 0.0);
      REQUIRE(a.c2 >= 0.0);
    }
  }
}
