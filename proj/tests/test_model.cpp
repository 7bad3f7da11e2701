#include <doctest.h>

#include <cmath>
#include <vector>

#include "hring/model.hpp"

using namespace hring;

TEST_CASE("ring_distance follows the forward ring") {
  CHECK(ring_distance(8, 2, 5) == 3);
  CHECK(ring_distance(8, 5, 2) == 5);
  CHECK(ring_distance(8, 4, 4) == 0);
  CHECK_THROWS_AS(ring_distance(8, 8, 1), InputError);
  CHECK_THROWS_AS(ring_distance(8, 1, 9), InputError);
}

TEST_CASE("harmonic weights at small n") {
  const auto d4 = DistanceDistribution::harmonic(4);
  CHECK(d4.weight(1) == doctest::Approx(6.0 / 11).epsilon(1e-15));
  CHECK(d4.weight(2) == doctest::Approx(3.0 / 11).epsilon(1e-15));
  CHECK(d4.weight(3) == doctest::Approx(2.0 / 11).epsilon(1e-15));
  CHECK(d4.strictly_decreasing());
  CHECK(d4.describe() == "harmonic");

  const auto d2 = DistanceDistribution::harmonic(2);
  CHECK(d2.weight(1) == 1.0);

  const auto u5 = DistanceDistribution::make(5, 0.0);
  for (Distance r = 1; r <= 4; ++r) CHECK(u5.weight(r) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_FALSE(u5.strictly_decreasing());
}

TEST_CASE("distance law construction rejects bad input") {
  CHECK_THROWS_AS(DistanceDistribution::make(1, 1.0), InputError);
  CHECK_THROWS_AS(DistanceDistribution::make(8, -0.5), InputError);
  CHECK_THROWS_AS(DistanceDistribution::make(8, NAN), InputError);
  CHECK_THROWS_AS(DistanceDistribution::make(8, INFINITY), InputError);
}

TEST_CASE("distance law invariants across sizes and exponents") {
  for (const std::uint32_t n : {2u, 3u, 17u, 1000u, 1u << 20}) {
    for (const double beta : {0.0, 0.5, 1.0, 2.0, 3.5}) {
      const auto d = DistanceDistribution::make(n, beta);
      CompensatedSum total;
      for (Distance r = 1; r < n; ++r) {
        REQUIRE(d.weight(r) > 0.0);
        total.add(d.weight(r));
        if (r + 1 < n) {
          REQUIRE(d.cdf(r) <= d.cdf(r + 1));
          if (beta > 0.0) REQUIRE(d.weight(r) > d.weight(r + 1));
        }
      }
      CHECK(std::abs(total.value() - 1.0) <= 1e-12);
      CHECK(d.cdf(n - 1) == 1.0);
      CHECK(std::abs(d.interval_mass(1, n - 1) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("harmonic weights equal (1/r)/H_{n-1} against an independent harmonic sum") {
  for (const std::uint32_t n : {4u, 100u, 4097u}) {
    // Independent route: long double, summed smallest term first.
    long double h = 0.0L;
    for (std::uint32_t i = n - 1; i >= 1; --i) h += 1.0L / i;
    const auto d = DistanceDistribution::harmonic(n);
    for (const Distance r : {1u, 2u, n / 2, n - 1}) {
      const double expected = static_cast<double>((1.0L / r) / h);
      CHECK(d.weight(r) == doctest::Approx(expected).epsilon(1e-14));
    }
    CHECK(harmonic_number(n - 1) == doctest::Approx(static_cast<double>(h)).epsilon(1e-15));
  }
}

TEST_CASE("interval_mass") {
  const auto d = DistanceDistribution::harmonic(4);
  // Direct summation: (1/2 + 1/3) / (1 + 1/2 + 1/3) = 5/11.
  CHECK(d.interval_mass(2, 3) == doctest::Approx(5.0 / 11).epsilon(1e-14));
  CHECK(d.interval_mass(3, 2) == 0.0);
  CHECK(d.interval_mass(1, 3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(d.interval_mass(0, 2), InputError);
  CHECK_THROWS_AS(d.interval_mass(1, 4), InputError);

  const auto big = DistanceDistribution::make(1000, 1.3);
  for (Distance a = 1; a < 999; a += 37) {
    for (Distance m = a; m < 999; m += 53) {
      CHECK(std::abs(big.interval_mass(a, m) + big.interval_mass(m + 1, 999) - big.interval_mass(a, 999)) <=
            1e-15);
    }
  }
}

TEST_CASE("degree laws") {
  SUBCASE("two-point") {
    const auto d = DegreeDistribution::two_point(2.5);
    REQUIRE(d.entries().size() == 2);
    CHECK(d.prob(2) == 0.5);
    CHECK(d.prob(3) == 0.5);
    CHECK(d.mean() == 2.5);

    const auto p = DegreeDistribution::two_point(2.0);
    CHECK(p.is_point_mass());
    CHECK(p.prob(2) == 1.0);

    for (int i = 0; i <= 2000; ++i) {
      const double m = 0.01 * i;
      CHECK(std::abs(DegreeDistribution::two_point(m).mean() - m) <= 1e-12);
    }
    CHECK_THROWS_AS(DegreeDistribution::two_point(-1.0), InputError);
  }
  SUBCASE("fixed") {
    const auto d = DegreeDistribution::fixed(0);
    CHECK(d.prob(0) == 1.0);
    CHECK(d.mean() == 0.0);
    CHECK(d.origin() == "fixed:0");
  }
  SUBCASE("explicit pmf") {
    const auto d = DegreeDistribution::from_pmf({{0, 0.5}, {4, 0.5}});
    CHECK(d.mean() == 2.0);
    CHECK(d.cap() == 4);
    CHECK_THROWS_AS(DegreeDistribution::from_pmf({{0, 0.5}, {4, 0.4}}), InputError);
    CHECK_THROWS_AS(DegreeDistribution::from_pmf({{1, 0.5}, {1, 0.5}}), InputError);
    CHECK_THROWS_AS(DegreeDistribution::from_pmf({{1, -0.5}, {2, 1.5}}), InputError);
    // Within the 1e-9 acceptance window the pmf is rescaled to sum to one.
    const auto near = DegreeDistribution::from_pmf({{0, 2.0 / 3}, {6, 0.3333333333}});
    CHECK(std::abs(near.prob(0) + near.prob(6) - 1.0) <= 1e-15);
  }
  SUBCASE("truncated families") {
    const auto g = DegreeDistribution::geometric(2.0, 56);
    CHECK(g.cap() == 56);
    CHECK(g.mean() == doctest::Approx(2.0).epsilon(1e-6));
    CHECK_FALSE(g.warning().has_value());

    const auto tight = DegreeDistribution::geometric(2.0, 2);
    CHECK(tight.warning().has_value());
    CHECK(tight.mean() < 1.8);

    const auto p = DegreeDistribution::poisson(3.0, 40);
    CHECK(p.mean() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(p.prob(2) / p.prob(3) - 1.0) <= 1e-12);  // 3^2/2! == 3^3/3!
  }
}

TEST_CASE("spec mini-language") {
  CHECK(parse_degree_spec("fixed:3", 16).prob(3) == 1.0);
  CHECK(parse_degree_spec("twopoint:1.5", 16).mean() == 1.5);
  CHECK(parse_degree_spec("pmf:0=2/3,6=1/3", 16).mean() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(parse_degree_spec("geometric:2", 1024).cap() == default_degree_cap(1024));
  CHECK(default_degree_cap(1024) == 56);
  CHECK(parse_degree_spec("poisson:2,9", 1024).cap() == 9);
  CHECK_THROWS_AS(parse_degree_spec("fixed:-1", 16), InputError);
  CHECK_THROWS_AS(parse_degree_spec("uniform:2", 16), InputError);
  CHECK_THROWS_AS(parse_degree_spec("fixed", 16), InputError);
  CHECK_THROWS_AS(parse_degree_spec("pmf:1=0.5,3", 16), InputError);
  try {
    parse_degree_spec("twopoint:abc", 16);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("'abc'") != std::string::npos);
  }

  CHECK(parse_distance_spec("harmonic") == 1.0);
  CHECK(parse_distance_spec("powerlaw:2") == 2.0);
  CHECK(parse_distance_spec("powerlaw:0") == 0.0);
  CHECK_THROWS_AS(parse_distance_spec("powerlaw:-1"), InputError);
  CHECK_THROWS_AS(parse_distance_spec("zipf"), InputError);
}

TEST_CASE("sampling frequencies") {
  constexpr int kDraws = 1'000'000;
  SUBCASE("single support point") {
    RandomStream s(3);
    const auto d = DistanceDistribution::harmonic(2);
    for (int i = 0; i < 100; ++i) CHECK(d.sample(s) == 1);
  }
  SUBCASE("harmonic n=4") {
    RandomStream s(11);
    const auto d = DistanceDistribution::harmonic(4);
    std::vector<int> counts(4, 0);
    for (int i = 0; i < kDraws; ++i) ++counts[d.sample(s)];
    CHECK(counts[0] == 0);
    CHECK(std::abs(counts[1] / double(kDraws) - 6.0 / 11) < 0.002);
    // Chi-square with 2 degrees of freedom; 13.8 is the 0.999 quantile.
    double chi2 = 0.0;
    for (Distance r = 1; r <= 3; ++r) {
      const double e = kDraws * d.weight(r);
      chi2 += (counts[r] - e) * (counts[r] - e) / e;
    }
    CHECK(chi2 < 13.8);
  }
  SUBCASE("uniform n=5") {
    RandomStream s(12);
    const auto d = DistanceDistribution::make(5, 0.0);
    std::vector<int> counts(5, 0);
    for (int i = 0; i < kDraws; ++i) ++counts[d.sample(s)];
    for (Distance r = 1; r <= 4; ++r) CHECK(std::abs(counts[r] / double(kDraws) - 0.25) < 0.002);
  }
  SUBCASE("degrees") {
    RandomStream s(13);
    const auto fixed = DegreeDistribution::fixed(3);
    for (int i = 0; i < 100; ++i) CHECK(fixed.sample(s) == 3);

    const auto tp = DegreeDistribution::two_point(1.5);
    double total = 0.0;
    for (int i = 0; i < kDraws; ++i) total += tp.sample(s);
    CHECK(std::abs(total / kDraws - 1.5) < 0.01);

    const auto pmf = parse_degree_spec("pmf:0=0.5,4=0.5", 8);
    int zeros = 0;
    for (int i = 0; i < kDraws; ++i) zeros += pmf.sample(s) == 0 ? 1 : 0;
    CHECK(std::abs(zeros / double(kDraws) - 0.5) < 0.002);
  }
}

TEST_CASE("streams are reproducible and children are distinct") {
  RandomStream a(42);
  RandomStream b(42);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next() == b.next());

  const RandomStream master(42);
  auto c0 = master.child(0);
  auto c0_again = master.child(0);
  auto c1 = master.child(1);
  CHECK(c0.key() == c0_again.key());
  CHECK(c0.key() != c1.key());
  int same = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = c0.next();
    REQUIRE(x == c0_again.next());
    same += x == c1.next() ? 1 : 0;
  }
  CHECK(same == 0);

  RandomStream u(5);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    REQUIRE(u.below(7) < 7);
  }
}
