#include <catch2/catch_amalgamated.hpp>

#include "irerm/accuracy.hpp"
#include "irerm/rng.hpp"

using namespace irerm;

TEST_CASE("h values for both estimator families") {
  AccuracyLevel e;
  e.mode = AccuracyMode::expectation;
  e.y = 0.25;
  CHECK(h_value(e) == 0.5);
  e.y = 0.0;
  CHECK(h_value(e) == 0.0);

  AccuracyLevel f;
  f.mode = AccuracyMode::finite_sum;
  f.N = 100;
  f.y = 100;
  CHECK(h_value(f) == 0.0);
  f.y = 25;
  CHECK(h_value(f) == 2.0);

  f.y = 0;
  CHECK_THROWS_AS(h_value(f), std::domain_error);
  e.y = 1.5;
  CHECK_THROWS_AS(h_value(e), std::domain_error);
}

TEST_CASE("cheapest level for an h bound") {
  const auto a = level_for_h_bound(0.5, AccuracyMode::expectation);
  CHECK(a.y == 0.25);
  CHECK(level_for_h_bound(2.0, AccuracyMode::expectation).y == 1.0);
  const auto exact = level_for_h_bound(0.0, AccuracyMode::expectation);
  CHECK(exact.y == 0.0);
  CHECK(exact.exact());

  CHECK(level_for_h_bound(0.0, AccuracyMode::finite_sum, 50).y == 50.0);
  CHECK(level_for_h_bound(2.0, AccuracyMode::finite_sum, 100).y == 25.0);
}

TEST_CASE("h(level_for_h_bound(b)) <= b for random bounds") {
  RandomStream stream(991);
  for (int t = 0; t < 2000; ++t) {
    const double b = 3.0 * stream.next_unit();
    CHECK(h_value(level_for_h_bound(b, AccuracyMode::expectation)) <= b);
    CHECK(h_value(level_for_h_bound(b, AccuracyMode::finite_sum, 1000)) <= b);
  }
}

TEST_CASE("sample counts") {
  AccuracyLevel a;
  a.mode = AccuracyMode::expectation;
  a.y = 0.5;
  CHECK(samples_for(a) == 2);
  a.y = 1.0;
  CHECK(samples_for(a) == 1);
  a.y = 0.3;
  CHECK(samples_for(a) == 4);
  a.y = 0.0;
  CHECK_THROWS_AS(samples_for(a), std::domain_error);
}

TEST_CASE("level_from_samples inverts p(y) on integer counts") {
  RandomStream stream(17);
  for (int t = 0; t < 2000; ++t) {
    const auto p = static_cast<std::int64_t>(1 + stream.next_below(1'000'000));
    CHECK(samples_for(level_from_samples(p)) == p);
  }
}

TEST_CASE("h is nonincreasing in the sample count") {
  double prev = 10.0;
  for (std::int64_t p = 1; p <= 64; ++p) {
    const double h = h_value(level_from_samples(p));
    CHECK(h <= prev);
    prev = h;
  }
  prev = 100.0;
  for (std::int64_t y = 1; y <= 100; ++y) {
    AccuracyLevel a;
    a.mode = AccuracyMode::finite_sum;
    a.N = 100;
    a.y = static_cast<double>(y);
    const double h = h_value(a);
    CHECK(h <= prev);
    prev = h;
  }
}

TEST_CASE("sample bound for a probabilistic accuracy request") {
  const ProbabilisticAccuracySpec s1{0.75, 1.0, 1.0};
  CHECK(samples_for(required_level_for_probability(s1, AccuracyMode::expectation)) == 4);
  const ProbabilisticAccuracySpec s2{0.75, 0.5, 1.0};
  CHECK(samples_for(required_level_for_probability(s2, AccuracyMode::expectation)) == 16);

  const ProbabilisticAccuracySpec s3{0.9, 1.0, 100.0};
  const auto lvl = required_level_for_probability(s3, AccuracyMode::finite_sum, 10);
  CHECK(lvl.y == 10.0);
  CHECK(lvl.exact());

  const ProbabilisticAccuracySpec s4{1.0, 1.0, 1.0};
  CHECK_THROWS_AS(required_level_for_probability(s4, AccuracyMode::expectation),
                  std::domain_error);
}
