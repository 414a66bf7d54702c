#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dyntdd/hetnet_planner.hpp"
#include "dyntdd/ilim.hpp"
#include "dyntdd/phy.hpp"
#include "dyntdd/scheduler_het.hpp"
#include "dyntdd/scheduler_homo.hpp"
#include "dyntdd/tdd_config.hpp"
#include "dyntdd/topology.hpp"
#include "dyntdd/traffic.hpp"

namespace dyntdd {

enum class MacroMode { Static, Planned };

// Static: fixed split. Homo: per-cell (or per-cluster) splitting over the
// whole frame. Het: per-frame splitting of the dynamic portion.
enum class SmallTddMode { Static, Homo, Het };

struct DropConfig {
  Scenario scenario = Scenario::HomSCN;
  MacroMode macro_mode = MacroMode::Static;
  int macro_static_ul = 3;
  SmallTddMode small_mode = SmallTddMode::Static;
  int static_ul = 3;  // with a planned macro frame the static split follows f_m_ul
  TddSetKind tdd_set = TddSetKind::Rel12Homo;
  int period_frames = 1;
  bool cc = false;
  bool ulpb = false;
  IcMode intra_ic = IcMode::None;
  bool inter_tier_ic = false;
  std::optional<int> fixed_abs;  // use the planner's association for this A

  double lambda_dl = 0.45;
  std::int64_t horizon = 60'000;
  int frame_len = kFrameLength;

  double x1_db = kDefaultUoicX1Db;
  double x2_db = kDefaultBoicX2Db;
  double ul_boost_db = kDefaultUlBoostDb;
  double pl_cc_db = kDefaultClusterThresholdDb;
  double alpha_dl = kDefaultAlphaDl;
  double reb_db = kDefaultRebDb;

  double harq_p_fail = kDefaultHarqFailure;
  int max_retx = kDefaultMaxRetx;
  double pf_beta = 0.01;
  double pf_floor = 1.0;

  bool monitor_ic = false;
  int trace_frames = 0;

  UlPowerParams power;
  RadioConfig radio;

  // Throws ConfigError on contradictory settings.
  void validate() const;
};

struct DropInputs {
  NetworkLayout layout;
  LinkGainTable gains;
  std::vector<ArrivalEvent> arrivals;
};

DropInputs make_drop_inputs(const DropConfig& config, std::uint64_t seed);

enum class Tier { Macro, Small };

const char* to_string(Tier t);

struct UptRecord {
  Direction dir = Direction::Dl;
  Tier tier = Tier::Small;
  bool er = false;
  UeId ue = 0;
  std::int64_t bits = 0;
  std::int64_t arrival = 0;
  std::int64_t completion = 0;

  double upt_bps() const {
    return static_cast<double>(bits) / (static_cast<double>(completion - arrival + 1) * kSubframeSeconds);
  }
};

struct DropCounters {
  std::int64_t generated_bits = 0;
  std::int64_t delivered_bits = 0;
  std::int64_t buffered_bits = 0;
  std::int64_t transmissions[kDirections] = {0, 0};
  std::int64_t harq_failures = 0;
  std::int64_t dl_to_ul_events = 0;
  std::int64_t intra_cluster_dl_to_ul_events = 0;
  std::int64_t ic_checks = 0;
  std::int64_t ic_violations = 0;
  std::int64_t er_dl_in_macro_aligned = 0;
  std::int64_t conservation_failures = 0;  // subframes where the balance did not hold
};

struct PlanSummary {
  int a_opt = 0;
  int A = 0;  // the A actually used
  int f_m_dl = 0, f_m_ul = 0, f_s_dyn = 0;
  int er_ues = 0;
  int macro_ues_before = 0;
  std::int64_t admissibility_checks = 0;
  std::int64_t check_bound = 0;
};

struct DropResult {
  std::uint64_t seed = 0;
  std::vector<UptRecord> records;
  DropCounters counters;
  std::array<std::int64_t, kFrameLength> t_histogram{};  // small-cell frames per UL count
  std::optional<PlanSummary> plan;
  int clusters = 0;
  double edge_ue_fraction = 0.0;
  double mean_boic_cells = 0.0;
  std::vector<std::vector<std::string>> traces;  // [frame][cell]
};

class World;

/// One drop as a sequential state machine; step() advances one subframe.
class Simulation {
 public:
  Simulation(const DropConfig& config, DropInputs inputs, std::uint64_t seed);
  ~Simulation();
  Simulation(Simulation&&) noexcept;
  Simulation& operator=(Simulation&&) noexcept;

  void step();
  std::int64_t now() const;
  const Association& association() const;
  const std::vector<std::string>& frame_patterns() const;
  // Counters so far, with buffered_bits filled in.
  DropCounters counters() const;
  DropResult finish();

 private:
  std::unique_ptr<World> world_;
};

DropResult run_drop(const DropConfig& config, DropInputs inputs, std::uint64_t seed);
DropResult run_drop(const DropConfig& config, std::uint64_t seed);

}  // namespace dyntdd
