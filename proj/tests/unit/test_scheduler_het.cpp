#include <doctest.h>

#include <random>

#include "dyntdd/scheduler_het.hpp"
#include "oracles/bridge.hpp"

using namespace dyntdd;

namespace {

const MacroFramePlan kPlan523 = MacroFramePlan::from_abs(2);

// Macrocell 0, small cell 0 serving UE 1 with UE 0 offloaded into it.
struct Fixture {
  Association assoc{1, 1, 3};
  TrafficState traffic{3};

  Fixture() {
    assoc.assign(0, 0);
    assoc.assign(1, 1);
    assoc.assign(2, 0);
    assoc.offload(0, 0);
  }
};

}  // namespace

TEST_CASE("instantaneous dynamic-portion densities") {
  Fixture fx;
  fx.traffic.omega_dl = {2'000'000, 7'000'000, 0};
  fx.traffic.omega_ul = {1'000'000, 2'000'000, 5'000'000};
  const auto d = inst_dyn_densities(0, fx.assoc, fx.traffic, kPlan523, 3);
  CHECK(d.dl == doctest::Approx(1e6));
  CHECK(d.ul == doctest::Approx(1e6));

  // Without buffered ER DL data the DL side is zero, or 0/0 at t = f_s_dyn.
  fx.traffic.omega_dl[0] = 0;
  CHECK(inst_dyn_densities(0, fx.assoc, fx.traffic, kPlan523, 3).dl == 0.0);
  CHECK(inst_dyn_densities(0, fx.assoc, fx.traffic, kPlan523, 5).dl == 0.0);
}

TEST_CASE("instantaneous formula mirrors the statistical one") {
  Fixture fx;
  fx.traffic.lambda_dl = {3, 1, 2};
  fx.traffic.lambda_ul = {4, 5, 6};
  fx.traffic.omega_dl = {3, 1, 2};
  fx.traffic.omega_ul = {4, 5, 6};
  for (int t = 1; t <= 5; ++t) {
    const auto a = dyn_densities_with_candidate(0, std::nullopt, fx.assoc, fx.traffic, kPlan523, t);
    const auto b = inst_dyn_densities(0, fx.assoc, fx.traffic, kPlan523, t);
    CHECK(a.dl == b.dl);
    CHECK(a.ul == b.ul);
  }
}

TEST_CASE("per-frame UL count in the dynamic portion") {
  Fixture fx;
  const auto set = kPlan523.dyn_set();
  fx.traffic.omega_dl = {4'000'000, 0, 0};
  fx.traffic.omega_ul = {600'000, 400'000, 0};
  CHECK(t_inst_het(0, fx.assoc, fx.traffic, kPlan523, set) == 1);

  // Empty ER DL and UL buffers defer to the statistical choice, even with
  // non-ER DL data and macro UL data present.
  Fixture idle;
  idle.traffic.lambda_dl = {0.4, 0.0, 0.0};
  idle.traffic.lambda_ul = {0.2, 0.25, 0.0};
  idle.traffic.omega_dl = {0, 9'000'000, 0};
  idle.traffic.omega_ul = {0, 0, 3'000'000};
  CHECK(t_inst_het(0, idle.assoc, idle.traffic, kPlan523, set) ==
        t_stat_het(0, std::nullopt, idle.assoc, idle.traffic, kPlan523, set));
  CHECK(t_inst_het(0, idle.assoc, idle.traffic, kPlan523, set) == 3);
}

TEST_CASE("UL count stays inside the dynamic set") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> bits(0, 6'000'000);
  for (int A = 0; A <= 8; ++A) {
    const auto plan = MacroFramePlan::from_abs(A);
    const auto set = plan.dyn_set();
    for (int trial = 0; trial < 50; ++trial) {
      Fixture fx;
      for (int q = 0; q < 3; ++q) {
        fx.traffic.omega_dl[q] = bits(rng);
        fx.traffic.omega_ul[q] = trial % 3 == 0 ? 0 : bits(rng);
      }
      const int t = t_inst_het(0, fx.assoc, fx.traffic, plan, set);
      CHECK(t >= 1);
      CHECK(t <= plan.f_s_dyn);
    }
  }
}

TEST_CASE("macro pattern layout") {
  const auto p = macro_pattern(kPlan523);
  std::string s;
  for (auto r : p) s += role_char(r);
  CHECK(s == "DDDDDAAUUU");
}

TEST_CASE("small-cell frame schedule") {
  const auto macro = macro_pattern(kPlan523);
  const auto s = build_frame_schedule(3, macro);
  CHECK(s.count(SlotRole::MacroAlignedDl) == 5);
  CHECK(s.count(SlotRole::DynDl) == 2);
  CHECK(s.count(SlotRole::DynUl) == 3);
  CHECK(s.trace() == "MMMMMDDUUU");
  for (std::size_t i = 0; i < macro.size(); ++i)
    if (s.roles[i] == SlotRole::DynUl) CHECK(macro[i] != MacroRole::Dl);

  const auto all_ul = build_frame_schedule(5, macro);
  CHECK(all_ul.count(SlotRole::DynDl) == 0);
  CHECK(all_ul.trace() == "MMMMMUUUUU");
  CHECK_THROWS(build_frame_schedule(6, macro));
  CHECK_THROWS(build_frame_schedule(0, macro));

  for (int A = 0; A <= 8; ++A) {
    const auto plan = MacroFramePlan::from_abs(A);
    for (int t = 1; t <= plan.f_s_dyn; ++t) {
      const auto f = build_frame_schedule(t, macro_pattern(plan));
      CHECK(f.count(SlotRole::MacroAlignedDl) == plan.f_m_dl);
      CHECK(f.count(SlotRole::DynDl) + f.count(SlotRole::DynUl) == plan.f_s_dyn);
      CHECK(f.count(SlotRole::DynUl) == t);
    }
  }
}

TEST_CASE("DL eligibility per slot") {
  // ER UEs never use macro-aligned DL.
  CHECK_FALSE(dl_eligible(SlotRole::MacroAlignedDl, true, true));
  CHECK_FALSE(dl_eligible(SlotRole::MacroAlignedDl, true, false));
  CHECK(dl_eligible(SlotRole::MacroAlignedDl, false, true));
  // Dynamic DL goes to ER UEs first.
  CHECK(dl_eligible(SlotRole::DynDl, true, true));
  CHECK_FALSE(dl_eligible(SlotRole::DynDl, false, true));
  CHECK(dl_eligible(SlotRole::DynDl, false, false));
  CHECK_FALSE(dl_eligible(SlotRole::DynUl, true, true));
  CHECK(ul_eligible(SlotRole::DynUl));
  CHECK_FALSE(ul_eligible(SlotRole::DynDl));
  CHECK_FALSE(ul_eligible(SlotRole::MacroAlignedDl));
}

TEST_CASE("heterogeneous selectors agree with the exact oracle") {
  for (const auto& r : oracles::check_argmin(300, 99)) {
    INFO(r.name);
    CHECK(r.ok());
  }
}
