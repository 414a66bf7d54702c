#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "dyntdd/association.hpp"
#include "dyntdd/scheduler_homo.hpp"
#include "dyntdd/tdd_config.hpp"
#include "dyntdd/topology.hpp"
#include "dyntdd/traffic.hpp"

namespace dyntdd {

inline constexpr double kDefaultAlphaDl = 0.625;
inline constexpr double kDefaultRebDb = 9.0;

/// Network-wide macro frame: f_m_dl DL subframes, A almost blank subframes
/// and f_m_ul UL subframes. Small cells run dynamic TDD over the
/// f_s_dyn = f_m_ul + A subframes not aligned with macro DL.
struct MacroFramePlan {
  int A = 0;
  int f_m_dl = 0;
  int f_m_ul = 0;
  int f_s_dyn = 0;
  double alpha_dl = kDefaultAlphaDl;
  int frame_len = kFrameLength;

  static MacroFramePlan from_abs(int A, double alpha_dl = kDefaultAlphaDl,
                                 int frame_len = kFrameLength);
  static MacroFramePlan fixed(int f_m_dl, int A, int f_m_ul);
  bool feasible() const { return f_m_dl >= 1 && f_m_ul >= 1 && A >= 0; }
  TddConfigSet dyn_set() const { return TddConfigSet::build(TddSetKind::Het, f_s_dyn); }
};

using DensityPair = std::pair<double, double>;  // (dl, ul)

DensityPair macro_densities(int m, const Association& assoc, const TrafficState& traffic,
                            const MacroFramePlan& plan);
DensityPair macro_densities_minus_candidate(int m, UeId candidate, const Association& assoc,
                                            const TrafficState& traffic,
                                            const MacroFramePlan& plan);
double smallcell_dl_density_macro_sf(int n, const Association& assoc, const TrafficState& traffic,
                                     const MacroFramePlan& plan);
DensityReport dyn_densities_with_candidate(int n, std::optional<UeId> candidate,
                                           const Association& assoc, const TrafficState& traffic,
                                           const MacroFramePlan& plan, int t);
int t_stat_het(int n, std::optional<UeId> candidate, const Association& assoc,
               const TrafficState& traffic, const MacroFramePlan& plan, const TddConfigSet& set);
DensityPair effective_smallcell_densities(int n, int t_stat, std::optional<UeId> candidate,
                                          const Association& assoc, const TrafficState& traffic,
                                          const MacroFramePlan& plan);

/// Everything the offload test looks at, kept so admissions can be
/// re-verified after planning.
struct AdmissionRecord {
  int A = 0;
  UeId ue = 0;
  int macro = 0;
  int small = 0;
  double d_s_dl = 0.0, d_s_ul = 0.0;
  double d_m_dl_prime = 0.0, d_m_ul_prime = 0.0;
  double rsrp_macro_dbm = 0.0, rsrp_small_dbm = 0.0;
  double reb_db = kDefaultRebDb;

  bool admissible() const;
};

bool offload_admissible(double d_s_dl, double d_s_ul, double d_m_dl_prime, double d_m_ul_prime,
                        double rsrp_macro_dbm, double rsrp_small_dbm, double reb_db);

struct PlannerInput {
  Association assoc0;          // best-RSRP association, no ER UEs
  TrafficState traffic;        // only the lambdas are used
  Eigen::MatrixXd rsrp_dbm;    // cells x UEs
  Eigen::VectorXd wb_sinr_db;  // per UE, towards its serving macrocell
  double alpha_dl = kDefaultAlphaDl;
  double reb_db = kDefaultRebDb;
  int frame_len = kFrameLength;
};

PlannerInput make_planner_input(const NetworkLayout& layout, const LinkGainTable& gains,
                                const TrafficState& traffic, double alpha_dl = kDefaultAlphaDl,
                                double reb_db = kDefaultRebDb, const RadioConfig& radio = {});

struct AbsCandidate {
  MacroFramePlan plan;
  bool feasible = false;
  double objective = 0.0;
  Association association;
  std::vector<int> t_stat;  // per small cell
  std::vector<AdmissionRecord> admissions;
};

struct PlanOutcome {
  int a_opt = 0;
  MacroFramePlan plan;
  Association association;
  std::vector<int> per_cell_t_stat;
  std::vector<AbsCandidate> candidates;  // indexed by A
  std::int64_t admissibility_checks = 0;
  std::int64_t check_bound = 0;  // T * N * sum_m K1*(m)

  std::vector<std::optional<double>> objective_per_A() const;
};

/// Average traffic demand density over both tiers for an association,
/// with every density computed from scratch.
double tier_objective(const Association& assoc, const TrafficState& traffic,
                      const MacroFramePlan& plan);

PlanOutcome plan(const PlannerInput& input);

void write_plan_report(std::ostream& sweep, std::ostream& association, const PlanOutcome& outcome);

}  // namespace dyntdd
