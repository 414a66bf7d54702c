#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "dyntdd/engine.hpp"

using namespace dyntdd;

namespace {

DropConfig homscn(std::int64_t horizon = 4000, double load = 0.45) {
  DropConfig c;
  c.scenario = Scenario::HomSCN;
  c.horizon = horizon;
  c.lambda_dl = load;
  return c;
}

DropConfig hetnet_planned(std::int64_t horizon = 4000) {
  DropConfig c;
  c.scenario = Scenario::HetNet;
  c.macro_mode = MacroMode::Planned;
  c.small_mode = SmallTddMode::Het;
  c.tdd_set = TddSetKind::Het;
  c.fixed_abs = 2;
  c.horizon = horizon;
  c.lambda_dl = 0.5;
  return c;
}

void check_conserved(const DropResult& r) {
  const auto& k = r.counters;
  CHECK(k.generated_bits == k.delivered_bits + k.buffered_bits);
  CHECK(k.conservation_failures == 0);
  std::int64_t completed = 0;
  for (const auto& rec : r.records) {
    completed += rec.bits;
    CHECK(rec.completion >= rec.arrival);
    CHECK(rec.upt_bps() > 0.0);
  }
  CHECK(completed <= k.delivered_bits);
}

}  // namespace

TEST_CASE("configuration conflicts are rejected") {
  DropConfig cc = homscn();
  cc.cc = true;
  CHECK_THROWS_AS(cc.validate(), ConfigError);
  cc.small_mode = SmallTddMode::Homo;
  CHECK_NOTHROW(cc.validate());

  DropConfig planned = homscn();
  planned.macro_mode = MacroMode::Planned;
  CHECK_THROWS_AS(planned.validate(), ConfigError);

  DropConfig het = homscn();
  het.small_mode = SmallTddMode::Het;
  CHECK_THROWS_AS(het.validate(), ConfigError);

  DropConfig bad = homscn();
  bad.horizon = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = homscn();
  bad.static_ul = 10;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = homscn();
  bad.harq_p_fail = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("no traffic means no transmissions") {
  const DropResult r = run_drop(homscn(2000, 0.0), 1);
  CHECK(r.records.empty());
  CHECK(r.counters.generated_bits == 0);
  CHECK(r.counters.delivered_bits == 0);
  CHECK(r.counters.transmissions[0] == 0);
  CHECK(r.counters.transmissions[1] == 0);
}

TEST_CASE("drops are deterministic per seed") {
  DropConfig c = homscn(3000);
  c.small_mode = SmallTddMode::Homo;
  const DropResult a = run_drop(c, 5);
  const DropResult b = run_drop(c, 5);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].ue == b.records[i].ue);
    CHECK(a.records[i].completion == b.records[i].completion);
  }
  CHECK(a.counters.delivered_bits == b.counters.delivered_bits);
  CHECK(a.counters.harq_failures == b.counters.harq_failures);
  CHECK(a.t_histogram == b.t_histogram);

  const DropResult other = run_drop(c, 6);
  CHECK(other.counters.generated_bits != a.counters.generated_bits);
}

TEST_CASE("static split keeps one pattern all drop") {
  DropConfig c = homscn(3000);
  c.trace_frames = 300;
  const DropResult r = run_drop(c, 2);
  REQUIRE(r.traces.size() == 300);
  for (const auto& frame : r.traces)
    for (const auto& p : frame) CHECK(p == "DDDDDDDUUU");
  CHECK(r.t_histogram[3] == 84 * 300);
  check_conserved(r);
}

TEST_CASE("reconfiguration period holds patterns between updates") {
  DropConfig c = homscn(2000);
  c.small_mode = SmallTddMode::Homo;
  c.period_frames = 20;
  c.trace_frames = 200;
  const DropResult r = run_drop(c, 3);
  REQUIRE(r.traces.size() == 200);
  for (std::size_t f = 1; f < r.traces.size(); ++f)
    if (f % 20 != 0) CHECK(r.traces[f] == r.traces[f - 1]);
  for (const auto& frame : r.traces)
    for (const auto& p : frame) {
      const auto ul = std::count(p.begin(), p.end(), 'U');
      CHECK(ul >= 1);
      CHECK(ul <= 6);
    }
}

TEST_CASE("bits are conserved for every scheme family") {
  DropConfig dyn = homscn(3000);
  dyn.small_mode = SmallTddMode::Homo;
  dyn.tdd_set = TddSetKind::FutureHomo;
  DropConfig ic = dyn;
  ic.intra_ic = IcMode::Boic;
  ic.ulpb = true;
  DropConfig cc = dyn;
  cc.cc = true;
  for (const auto& c : {homscn(3000), dyn, ic, cc, hetnet_planned(3000)}) check_conserved(run_drop(c, 4));
}

TEST_CASE("clustered cells never see intra-cluster DL-to-UL interference") {
  DropConfig c = homscn(4000);
  c.small_mode = SmallTddMode::Homo;
  c.cc = true;
  const DropResult r = run_drop(c, 1);
  CHECK(r.clusters >= 1);
  CHECK(r.clusters <= 84);
  CHECK(r.counters.intra_cluster_dl_to_ul_events == 0);
  CHECK(r.counters.dl_to_ul_events > 0);
}

TEST_CASE("cancellation never lowers a UL SINR") {
  DropConfig c = homscn(3000);
  c.small_mode = SmallTddMode::Homo;
  c.intra_ic = IcMode::Boic;
  c.monitor_ic = true;
  const DropResult r = run_drop(c, 1);
  CHECK(r.counters.ic_checks > 0);
  CHECK(r.counters.ic_violations == 0);
  CHECK(r.mean_boic_cells >= 0.0);
}

TEST_CASE("planned HetNet drop respects the slot rules") {
  const DropResult r = run_drop(hetnet_planned(4000), 1);
  REQUIRE(r.plan.has_value());
  CHECK(r.plan->A == 2);
  CHECK(r.plan->f_m_dl == 5);
  CHECK(r.plan->f_m_ul == 3);
  CHECK(r.plan->admissibility_checks <= r.plan->check_bound);
  CHECK(r.counters.er_dl_in_macro_aligned == 0);
  check_conserved(r);
  bool macro_records = false;
  for (const auto& rec : r.records) macro_records = macro_records || rec.tier == Tier::Macro;
  CHECK(macro_records);
  for (int t = 6; t < kFrameLength; ++t) CHECK(r.t_histogram[t] == 0);
}

TEST_CASE("HetNet frame patterns follow the macro frame") {
  DropConfig c = hetnet_planned(500);
  c.trace_frames = 50;
  const DropResult r = run_drop(c, 2);
  REQUIRE(r.traces.size() == 50);
  for (const auto& frame : r.traces) {
    for (int m = 0; m < 21; ++m) CHECK(frame[m] == "DDDDDAAUUU");
    for (int n = 21; n < 105; ++n) {
      CHECK(frame[n].substr(0, 5) == "MMMMM");
      CHECK(frame[n].find('U') != std::string::npos);
      CHECK(frame[n].find("UD") == std::string::npos);
    }
  }
}

TEST_CASE("stepping by hand matches a full run") {
  DropConfig c = homscn(1500);
  c.small_mode = SmallTddMode::Homo;
  Simulation sim(c, make_drop_inputs(c, 9), 9);
  for (int i = 0; i < 1500; ++i) {
    sim.step();
    if (i % 250 == 0) {
      const DropCounters k = sim.counters();
      CHECK(k.generated_bits == k.delivered_bits + k.buffered_bits);
      CHECK(sim.association().check_partition());
    }
  }
  CHECK(sim.now() == 1500);
  const DropResult a = sim.finish();
  const DropResult b = run_drop(c, 9);
  CHECK(a.records.size() == b.records.size());
  CHECK(a.counters.delivered_bits == b.counters.delivered_bits);
}
