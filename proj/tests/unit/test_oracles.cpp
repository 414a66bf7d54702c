#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles/bridge.hpp"
#include "oracles/selftest.hpp"

using namespace oracles;

TEST_CASE("exact rationals") {
  CHECK(Rational::of(2, 4) == Rational::of(1, 2));
  CHECK(Rational::of(0, 0) == Rational::of(0, 1));
  CHECK(Rational::of(3, 0).infinite());
  CHECK(Rational::of(1, 3) < Rational::of(1, 2));
  CHECK(Rational::of(5, 1) < Rational::of(1, 0));
  CHECK_FALSE(Rational::of(1, 0) < Rational::of(2, 0));
}

TEST_CASE("exact gap and balance") {
  CHECK(exact_gap(10, 5, 3, 10) == Rational::of(5, 21));
  CHECK(exact_balance({1, 2, 3, 4, 5, 6}, 10, 5, 10) == 3);
  CHECK(exact_balance({1, 2, 3, 4, 5, 6, 7, 8, 9}, 9, 1, 10) == 1);
  CHECK(exact_balance({1, 2, 3, 4, 5}, 0, 0, 5) == 1);
  CHECK(exact_balance({1, 2, 3, 4, 5}, 0, 7, 5) == 5);
}

TEST_CASE("frame plan rounding") {
  CHECK(frame_plan(2, 0.625, 10).f_m_dl == 5);
  CHECK(frame_plan(6, 0.625, 10).f_m_dl == 3);
  CHECK_FALSE(frame_plan(9, 0.625, 10).feasible());
}

TEST_CASE("nearest rank and wrap distance basics") {
  CHECK(nearest_rank({4, 1, 3, 2}, 50) == 2.0);
  CHECK_FALSE(nearest_rank({}, 50).has_value());
  CHECK(wrap_distance(0, 0, 30, 40, 500.0) == doctest::Approx(50.0));
}

TEST_CASE("library conversions round-trip") {
  std::mt19937_64 rng(4);
  const PlannerCase c = random_planner_case(rng, 2, 6, 20, 5);
  const auto lib = to_library(c.assoc0);
  CHECK(lib.check_partition());
  const PlainAssociation back = from_library(lib);
  CHECK(back.serving == c.assoc0.serving);
  CHECK(back.er == c.assoc0.er);
}

TEST_CASE("self-test passes") {
  std::ostringstream out;
  CHECK(run_selftest(out, 500, 31));
  CHECK(out.str().find("FAIL") == std::string::npos);
}
