#pragma once

// Reference implementations written independently of the library, using
// exact integer arithmetic where the library uses floating point.

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace oracles {

using i64 = std::int64_t;
using i128 = __int128;

// Non-negative rational with den == 0 meaning +infinity (num > 0) and 0/0
// normalised to 0/1.
struct Rational {
  i64 num = 0;
  i64 den = 1;

  static Rational of(i64 num, i64 den);
  bool infinite() const { return den == 0; }
  double value() const;
};

bool operator<(const Rational& a, const Rational& b);
bool operator==(const Rational& a, const Rational& b);

/// |ul/t - dl/(budget - t)| as an exact rational.
Rational exact_gap(i64 dl, i64 ul, int t, int budget);

/// Argmin of the exact gap over `ul_counts`; ties to the smallest t.
int exact_balance(const std::vector<int>& ul_counts, i64 dl, i64 ul, int budget);

// Plain description of a UE-to-cell association: serving cell per UE and
// whether the UE was offloaded from a macrocell.
struct PlainAssociation {
  int num_macro = 0;
  int num_small = 0;
  std::vector<int> serving;
  std::vector<bool> er;
};

// Integer-valued traffic: lambdas and buffer levels per UE.
struct IntTraffic {
  std::vector<i64> lambda_dl, lambda_ul, omega_dl, omega_ul;
};

/// UL count of a homogeneous small cell from the per-UE serving cell.
int homo_t_stat(int cell, const PlainAssociation& a, const IntTraffic& tr, const std::vector<int>& set,
                int budget);
int homo_t_inst(const std::vector<int>& cells, const PlainAssociation& a, const IntTraffic& tr,
                const std::vector<int>& set, int budget);

struct FramePlan {
  int A = 0, f_m_dl = 0, f_m_ul = 0, f_dyn = 0;
  bool feasible() const { return f_m_dl >= 1 && f_m_ul >= 1; }
};

FramePlan frame_plan(int A, double alpha_dl, int frame_len);

/// Heterogeneous statistical UL count, optionally with an extra ER candidate.
int het_t_stat(int cell, std::optional<int> candidate, const PlainAssociation& a, const IntTraffic& tr,
               const FramePlan& p);
int het_t_inst(int cell, const PlainAssociation& a, const IntTraffic& tr, const FramePlan& p);

struct PlannerCase {
  PlainAssociation assoc0;
  IntTraffic traffic;
  Eigen::MatrixXd rsrp_dbm;  // cells x UEs
  std::vector<double> wb_sinr_db;
  double alpha_dl = 0.625;
  double reb_db = 9.0;
  int frame_len = 10;
};

struct PlannerSweep {
  FramePlan plan;
  PlainAssociation assoc;
  // Objective times 2 * (M + N) * lcm(1..frame_len); empty when infinite.
  std::optional<i128> scaled_objective;
  std::vector<int> t_stat;
  int admissions = 0;
};

struct PlannerResult {
  int a_opt = -1;
  i128 scale = 1;
  std::vector<std::optional<PlannerSweep>> per_A;  // empty for infeasible A
};

/// Exact objective of an association under a frame plan, recomputed from
/// the per-UE serving cells alone.
std::optional<i128> scaled_objective(const PlainAssociation& a, const IntTraffic& tr, const FramePlan& p,
                                     int frame_len);
i128 objective_scale(int num_cells, int frame_len);

PlannerResult run_planner(const PlannerCase& c);

/// Random planner instance with integer traffic and best-RSRP association.
PlannerCase random_planner_case(std::mt19937_64& rng, int num_macro, int num_small, int num_ues,
                                int max_lambda);

/// Nearest-rank percentile for an integer percentage.
std::optional<double> nearest_rank(std::vector<double> values, int percent);

/// Linear-domain SINR: signal / (sum of interferers + noise), every term
/// converted from dB separately.
double linear_sinr(double signal_dbm, const std::vector<double>& interferers_dbm, double noise_dbm);

/// Wrap-around distance as the minimum over a 5x5 patch of cluster
/// translates of a seven-site hexagonal layout.
double wrap_distance(double ax, double ay, double bx, double by, double isd);

/// Index of the largest entry of column `ue`; ties to the lowest index.
int best_rsrp_cell(const Eigen::MatrixXd& rsrp_dbm, int ue);

}  // namespace oracles
