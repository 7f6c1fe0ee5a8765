#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "soul/schedules.hpp"

using namespace soul;

TEST_SUITE("schedules") {

TEST_CASE("delta law") {
  ScheduleSet s;
  s.delta0 = 60.0;
  s.a = 0.8;
  CHECK(eval_delta(1, s) == 60.0);
  CHECK(eval_delta(32, s) == doctest::Approx(60.0 / std::pow(32.0, 0.8)));
  s.delta0 = 0.2;
  s.a = 0.95;
  CHECK(eval_delta(1, s) == 0.2);
  s.a = 0.0;
  CHECK(eval_delta(12345, s) == 0.2);
  CHECK_THROWS_AS(eval_delta(0, s), std::invalid_argument);
}

TEST_CASE("gamma and batch laws") {
  ScheduleSet s;
  s.gamma0 = 8.34e-5;
  s.b = 0.0;
  for (std::size_t n : {1, 10, 1000000}) CHECK(eval_gamma(n, s) == 8.34e-5);
  s.m0 = 1;
  s.c = 0.0;
  CHECK(eval_batch(1, s) == 1);
  CHECK(eval_batch(999, s) == 1);
  s.c = 1.5;
  CHECK(eval_batch(4, s) == 8);
  CHECK(eval_batch(2, s) == 3);  // ceil(2.83)
  CHECK_THROWS_AS(eval_gamma(0, s), std::invalid_argument);
  CHECK_THROWS_AS(eval_batch(0, s), std::invalid_argument);
}

TEST_CASE("gamma is capped by gamma_bar") {
  ScheduleSet s;
  s.gamma0 = 5.0;
  s.b = 0.5;
  s.gamma_bar = 1.0;
  CHECK(eval_gamma(1, s) == 1.0);
  CHECK(eval_gamma(100, s) == doctest::Approx(0.5));
}

TEST_CASE("schedules are monotone") {
  ScheduleSet s;
  s.delta0 = 3.0;
  s.a = 0.7;
  s.gamma0 = 0.5;
  s.b = 0.3;
  s.gamma_bar = 0.2;
  s.m0 = 2;
  s.c = 0.6;
  for (std::size_t n = 1; n < 10000; ++n) {
    REQUIRE(eval_delta(n + 1, s) <= eval_delta(n, s));
    REQUIRE(eval_gamma(n + 1, s) <= eval_gamma(n, s));
    REQUIRE(eval_gamma(n, s) <= s.gamma_bar);
    REQUIRE(eval_batch(n + 1, s) >= eval_batch(n, s));
    REQUIRE(eval_batch(n, s) >= 1);
  }
}

TEST_CASE("validate rejects bad parameters") {
  ScheduleSet s;
  s.delta0 = 0.0;
  CHECK_THROWS(s.validate());
  s = ScheduleSet{};
  s.m0 = 0;
  CHECK_THROWS(s.validate());
  s = ScheduleSet{};
  s.a = -0.1;
  CHECK_THROWS(s.validate());
}

TEST_CASE("increasing batch examples") {
  CHECK(check_increasing_batch(0.8, 0.5, 0.8).valid);
  CHECK(check_increasing_batch(0.0, 2.1, 3.2).valid);
  // a - b + c = 1 exactly: on the boundary, so not admissible.
  const auto boundary = check_increasing_batch(0.0, 2.1, 3.1);
  CHECK_FALSE(boundary.valid);
  REQUIRE(boundary.violated.size() == 1);
  CHECK(boundary.violated[0] == "a-b+c>1");
  const auto v = check_increasing_batch(1.0, 1.0, 2.0);
  CHECK_FALSE(v.valid);
  REQUIRE(v.violated.size() == 1);
  CHECK(v.violated[0] == "a<1");
}

TEST_CASE("fixed batch examples") {
  const auto ok = check_fixed_batch(0.9, 0.3);
  CHECK(ok.valid);
  CHECK(ok.b_lo == doctest::Approx(0.2));
  CHECK(ok.b_hi == doctest::Approx(0.4));
  const auto empty = check_fixed_batch(0.8, 0.35);
  CHECK_FALSE(empty.valid);
  CHECK(empty.interval_empty());
  const auto edge = check_fixed_batch(5.0 / 6.0, 1.0 / 3.0);
  CHECK_FALSE(edge.valid);
  CHECK(edge.interval_empty());
}

}  // TEST_SUITE
