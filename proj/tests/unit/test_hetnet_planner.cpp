#include <doctest.h>

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "dyntdd/hetnet_planner.hpp"
#include "oracles/bridge.hpp"

using namespace dyntdd;

namespace {

const MacroFramePlan kPlan523 = MacroFramePlan::from_abs(2);

// One macrocell (cell 0) and two small cells (cells 1 and 2).
struct Fixture {
  Association assoc{1, 2, 6};
  TrafficState traffic{6};

  Fixture() {
    for (UeId q = 0; q < 3; ++q) assoc.assign(q, 0);
    assoc.assign(3, 1);
    assoc.assign(4, 1);
    assoc.assign(5, 2);
  }
};

}  // namespace

TEST_CASE("frame plan from the ABS count") {
  CHECK(kPlan523.f_m_dl == 5);
  CHECK(kPlan523.A == 2);
  CHECK(kPlan523.f_m_ul == 3);
  CHECK(kPlan523.f_s_dyn == 5);
  for (int A = 0; A < 10; ++A) {
    const auto p = MacroFramePlan::from_abs(A);
    CHECK(p.f_m_dl + p.f_m_ul + p.A == 10);
    CHECK(p.f_s_dyn == p.f_m_ul + A);
    CHECK(p.feasible() == (A <= 8));
  }
  const auto f = MacroFramePlan::fixed(5, 2, 3);
  CHECK(f.f_s_dyn == 5);
  CHECK(f.frame_len == 10);
  CHECK(f.dyn_set().ul_counts() == std::vector<int>{1, 2, 3, 4, 5});
}

TEST_CASE("macrocell densities") {
  Association a(1, 0, 10);
  TrafficState s = TrafficState::uniform(10, 0.3);
  for (UeId q = 0; q < 10; ++q) a.assign(q, 0);
  const auto [dl, ul] = macro_densities(0, a, s, kPlan523);
  CHECK(dl == doctest::Approx(0.6));
  CHECK(ul == doctest::Approx(1.5 / 3.0));

  TrafficState k = TrafficState::uniform(10, 0.9);
  CHECK(macro_densities(0, a, k, kPlan523).first == doctest::Approx(3 * dl));

  Association empty(1, 0, 0);
  CHECK(macro_densities(0, empty, TrafficState(0), kPlan523) == DensityPair{0.0, 0.0});
}

TEST_CASE("removing a candidate from the macrocell") {
  Association one(1, 0, 1);
  one.assign(0, 0);
  TrafficState s = TrafficState::uniform(1, 0.7);
  CHECK(macro_densities_minus_candidate(0, 0, one, s, kPlan523) == DensityPair{0.0, 0.0});

  Fixture fx;
  fx.traffic.lambda_dl = {0.1, 0.2, 0.4, 0, 0, 0};
  fx.traffic.lambda_ul = {0.3, 0.05, 0.1, 0, 0, 0};
  const auto minus = macro_densities_minus_candidate(0, 1, fx.assoc, fx.traffic, kPlan523);

  Association without(1, 2, 6);
  without.assign(0, 0);
  without.assign(2, 0);
  without.assign(1, 1);
  const auto scratch = macro_densities(0, without, fx.traffic, kPlan523);
  CHECK(minus.first == doctest::Approx(scratch.first));
  CHECK(minus.second == doctest::Approx(scratch.second));
  // Adding the candidate back restores the original densities.
  const auto full = macro_densities(0, fx.assoc, fx.traffic, kPlan523);
  CHECK(minus.first + 0.2 / 5 == doctest::Approx(full.first));
  CHECK(minus.second + 0.05 / 3 == doctest::Approx(full.second));
}

TEST_CASE("small-cell DL density in macro DL subframes excludes ER UEs") {
  Fixture fx;
  fx.traffic.lambda_dl = {0.0, 0.0, 0.0, 0.2, 0.3, 0.0};
  CHECK(smallcell_dl_density_macro_sf(0, fx.assoc, fx.traffic, kPlan523) == doctest::Approx(0.1));
  CHECK(smallcell_dl_density_macro_sf(1, fx.assoc, fx.traffic, kPlan523) == 0.0);

  fx.traffic.lambda_dl[0] = 5.0;
  fx.assoc.offload(0, 0);
  CHECK(smallcell_dl_density_macro_sf(0, fx.assoc, fx.traffic, kPlan523) == doctest::Approx(0.1));
}

TEST_CASE("dynamic-portion densities with a candidate") {
  Fixture fx;
  // Small cell 0: non-ER UE 3, ER UE 0 after offload; candidate UE 1.
  fx.assoc.offload(0, 0);
  fx.traffic.lambda_dl = {0.3, 0.1, 0.0, 0.0, 0.0, 0.0};
  fx.traffic.lambda_ul = {0.15, 0.05, 0.0, 0.25, 0.0, 0.0};
  const auto d = dyn_densities_with_candidate(0, UeId{1}, fx.assoc, fx.traffic, kPlan523, 3);
  CHECK(d.dl == doctest::Approx(0.2));
  CHECK(d.ul == doctest::Approx(0.15));

  const auto none = dyn_densities_with_candidate(1, std::nullopt, fx.assoc, fx.traffic, kPlan523, 5);
  CHECK(none.dl == 0.0);
  const auto inf = dyn_densities_with_candidate(0, std::nullopt, fx.assoc, fx.traffic, kPlan523, 5);
  CHECK(inf.dl == std::numeric_limits<double>::infinity());
}

TEST_CASE("statistical dynamic UL count") {
  Fixture fx;
  fx.assoc.offload(0, 0);
  // DL numerator 0.4 (ER only), UL numerator 0.45.
  fx.traffic.lambda_dl = {0.4, 0.0, 0.0, 0.9, 0.0, 0.0};
  fx.traffic.lambda_ul = {0.2, 0.0, 0.0, 0.25, 0.0, 0.0};
  const auto set = kPlan523.dyn_set();
  CHECK(t_stat_het(0, std::nullopt, fx.assoc, fx.traffic, kPlan523, set) == 3);
  CHECK(dyn_densities_with_candidate(0, std::nullopt, fx.assoc, fx.traffic, kPlan523, 2).gap() ==
        doctest::Approx(0.0917).epsilon(1e-3));
  CHECK(dyn_densities_with_candidate(0, std::nullopt, fx.assoc, fx.traffic, kPlan523, 3).gap() ==
        doctest::Approx(0.05));
  CHECK(dyn_densities_with_candidate(0, std::nullopt, fx.assoc, fx.traffic, kPlan523, 4).gap() ==
        doctest::Approx(0.2875));

  // No ER DL traffic: the whole dynamic portion goes UL.
  TrafficState ul_only(6);
  ul_only.lambda_ul = {0.0, 0.0, 0.0, 0.0, 0.0, 0.4};
  CHECK(t_stat_het(1, std::nullopt, fx.assoc, ul_only, kPlan523, set) == 5);
}

TEST_CASE("effective small-cell densities") {
  Fixture fx;
  fx.assoc.offload(0, 0);
  fx.traffic.lambda_dl = {0.4, 0.0, 0.0, 0.5, 0.0, 0.0};
  fx.traffic.lambda_ul = {0.2, 0.0, 0.0, 0.25, 0.0, 0.0};
  // Dynamic DL 0.4/2 = 0.2 beats macro-aligned DL 0.5/5 = 0.1.
  auto [dl, ul] = effective_smallcell_densities(0, 3, std::nullopt, fx.assoc, fx.traffic, kPlan523);
  CHECK(dl == doctest::Approx(0.2));
  CHECK(ul == doctest::Approx(0.15));

  fx.traffic.lambda_dl[3] = 1.5;
  std::tie(dl, ul) = effective_smallcell_densities(0, 3, std::nullopt, fx.assoc, fx.traffic, kPlan523);
  CHECK(dl == doctest::Approx(0.3));
  CHECK(ul == doctest::Approx(0.15));
}

TEST_CASE("offload admissibility is strict") {
  CHECK(offload_admissible(0.08, 0.05, 0.12, 0.09, -78.0, -85.0, 9.0));
  CHECK_FALSE(offload_admissible(0.08, 0.05, 0.12, 0.09, -76.0, -85.0, 9.0));
  CHECK_FALSE(offload_admissible(0.12, 0.05, 0.12, 0.09, -78.0, -85.0, 9.0));
  CHECK_FALSE(offload_admissible(0.08, 0.09, 0.12, 0.09, -78.0, -85.0, 9.0));
}

TEST_CASE("zero traffic gives a zero objective and the smallest A") {
  PlannerInput in;
  in.assoc0 = Association(1, 1, 2);
  in.assoc0.assign(0, 0);
  in.assoc0.assign(1, 1);
  in.traffic = TrafficState(2);
  in.rsrp_dbm = Eigen::MatrixXd::Constant(2, 2, -80.0);
  in.wb_sinr_db = Eigen::VectorXd::Zero(2);
  const PlanOutcome out = plan(in);
  CHECK(out.a_opt == 0);
  const auto obj = out.objective_per_A();
  REQUIRE(obj.size() == 10);
  for (int A = 0; A < 9; ++A) {
    REQUIRE(obj[A].has_value());
    CHECK(*obj[A] == 0.0);
  }
  CHECK_FALSE(obj[9].has_value());
}

TEST_CASE("hand-traced offload on a two-UE macrocell") {
  // UE 0 sits near the small cell with low SINR; UE 1 carries heavy traffic
  // close to the macro site.
  PlannerInput in;
  in.assoc0 = Association(1, 1, 2);
  in.assoc0.assign(0, 0);
  in.assoc0.assign(1, 0);
  in.traffic = TrafficState(2);
  in.traffic.lambda_dl = {1.0, 10.0};
  in.traffic.lambda_ul = {0.5, 5.0};
  in.rsrp_dbm.resize(2, 2);
  in.rsrp_dbm << -70.0, -60.0,
                 -75.0, -90.0;
  in.wb_sinr_db.resize(2);
  in.wb_sinr_db << -5.0, 10.0;

  const PlanOutcome out = plan(in);
  const AbsCandidate& c = out.candidates[2];
  REQUIRE(c.feasible);
  CHECK(c.association.is_er(0));
  CHECK(c.association.serving_cell(0) == 1);
  CHECK_FALSE(c.association.is_er(1));
  REQUIRE(c.admissions.size() == 1);
  const AdmissionRecord& r = c.admissions[0];
  CHECK(r.ue == 0);
  CHECK(r.d_s_dl == doctest::Approx(1.0 / 3.0));
  CHECK(r.d_s_ul == doctest::Approx(0.25));
  CHECK(r.d_m_dl_prime == doctest::Approx(2.0));
  CHECK(r.d_m_ul_prime == doctest::Approx(5.0 / 3.0));
  CHECK(r.admissible());
  REQUIRE(c.t_stat.size() == 1);
  CHECK(c.t_stat[0] == 2);
  CHECK(c.objective == doctest::Approx(((2.0 + 5.0 / 3.0) / 2.0 + (1.0 / 3.0 + 0.25) / 2.0) / 2.0));
  CHECK(c.objective == doctest::Approx(tier_objective(c.association, in.traffic, c.plan)));
}

TEST_CASE("planner agrees with the exact re-implementation") {
  const auto check = oracles::check_planner(40, 2024);
  CHECK(check.agreement.ok());
  CHECK(check.optimality.ok());
  CHECK(check.admissions.ok());
  CHECK(check.check_bound.ok());
  const auto larger = oracles::check_planner(10, 7, 3, 12, 60);
  CHECK(larger.agreement.ok());
  CHECK(larger.optimality.ok());
}

TEST_CASE("planning a generated drop") {
  const NetworkLayout layout = generate_layout(Scenario::HetNet, 1);
  const LinkGainTable gains = compute_link_gains(layout, 1);
  const PlannerInput in = make_planner_input(layout, gains, TrafficState::uniform(layout.num_ues(), 0.5));
  const PlanOutcome a = plan(in);
  const PlanOutcome b = plan(in);
  CHECK(a.a_opt == b.a_opt);
  CHECK(a.association == b.association);
  CHECK(a.association.check_partition());
  CHECK(a.admissibility_checks <= a.check_bound);

  const auto obj = a.objective_per_A();
  REQUIRE(obj[a.a_opt].has_value());
  for (const auto& o : obj)
    if (o) CHECK(*obj[a.a_opt] <= *o);
  for (const auto& c : a.candidates) {
    if (!c.feasible) continue;
    CHECK(c.objective == doctest::Approx(tier_objective(c.association, in.traffic, c.plan)));
    for (const auto& r : c.admissions) CHECK(r.admissible());
  }
}

TEST_CASE("plan report layout") {
  PlannerInput in;
  in.assoc0 = Association(1, 1, 1);
  in.assoc0.assign(0, 0);
  in.traffic = TrafficState::uniform(1, 0.1);
  in.rsrp_dbm = Eigen::MatrixXd::Constant(2, 1, -80.0);
  in.wb_sinr_db = Eigen::VectorXd::Zero(1);
  std::ostringstream sweep, assoc;
  write_plan_report(sweep, assoc, plan(in));
  CHECK(sweep.str().rfind("A,objective,feasible\n0,", 0) == 0);
  CHECK(sweep.str().find("\n9,,0\n") != std::string::npos);
  CHECK(assoc.str() == "ue,serving_cell,is_er\n0,0,0\n");
}
