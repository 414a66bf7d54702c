#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "dyntdd/stats.hpp"
#include "oracles/bridge.hpp"

using namespace dyntdd;

TEST_CASE("nearest-rank percentiles") {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  CHECK(percentile(v, 50.0) == 50.0);
  CHECK(percentile(v, 5.0) == 5.0);
  CHECK(percentile(v, 95.0) == 95.0);
  CHECK(percentile(v, 0.0) == 1.0);
  CHECK(percentile(v, 100.0) == 100.0);

  const std::vector<double> one{3.25};
  const double ps[] = {5.0, 50.0, 95.0};
  for (const auto& p : upt_percentiles(one, ps)) CHECK(p == 3.25);

  for (const auto& p : upt_percentiles({}, ps)) CHECK_FALSE(p.has_value());
  CHECK_THROWS(percentile(v, 101.0));
}

TEST_CASE("percentiles agree with a sort-based oracle") {
  const auto r = oracles::check_percentiles(500, 42);
  CHECK(r.ok());
}

TEST_CASE("UPT filters by direction and tier") {
  std::vector<UptRecord> recs;
  recs.push_back({Direction::Dl, Tier::Macro, false, 0, 4'000'000, 10, 19});
  recs.push_back({Direction::Dl, Tier::Small, true, 1, 4'000'000, 0, 99});
  recs.push_back({Direction::Ul, Tier::Small, false, 2, 1'000'000, 5, 5});
  CHECK(recs[0].upt_bps() == doctest::Approx(4e8));
  CHECK(recs[2].upt_bps() == doctest::Approx(1e9));

  CHECK(upt_mbps(recs, Direction::Dl, TierFilter::All).size() == 2);
  const auto macro = upt_mbps(recs, Direction::Dl, TierFilter::Macro);
  REQUIRE(macro.size() == 1);
  CHECK(macro[0] == doctest::Approx(400.0));
  const auto small = upt_mbps(recs, Direction::Dl, TierFilter::Small);
  REQUIRE(small.size() == 1);
  CHECK(small[0] == doctest::Approx(40.0));
  CHECK(upt_mbps(recs, Direction::Ul, TierFilter::Macro).empty());
}

TEST_CASE("one-sided sign test") {
  CHECK(sign_test_p(20, 0) == doctest::Approx(std::pow(0.5, 20)));
  CHECK(sign_test_p(0, 20) == doctest::Approx(1.0));
  CHECK(sign_test_p(0, 0) == 1.0);
  // P(X >= 15) for Binomial(20, 1/2).
  CHECK(sign_test_p(15, 5) == doctest::Approx(21700.0 / 1048576.0));
  CHECK(sign_test_p(14, 6) > 0.05);
  CHECK(sign_test_p(15, 5) < 0.05);
}

TEST_CASE("relative gain") {
  CHECK(relative_gain(2.0, 1.0) == doctest::Approx(1.0));
  CHECK(relative_gain(0.5, 1.0) == doctest::Approx(-0.5));
  CHECK(relative_gain(3.3, 3.3) == 0.0);
}
