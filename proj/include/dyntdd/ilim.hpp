#pragma once

#include <Eigen/Core>

#include <span>
#include <string_view>
#include <vector>

#include "dyntdd/association.hpp"
#include "dyntdd/topology.hpp"

namespace dyntdd {

inline constexpr double kDefaultClusterThresholdDb = 90.0;
inline constexpr double kDefaultUoicX1Db = 9.0;
inline constexpr double kDefaultBoicX2Db = 120.0;
inline constexpr double kDefaultUlBoostDb = 10.0;

// Partition of small cells (by small-cell index) into clusters that share
// one TDD pattern.
struct ClusterSet {
  std::vector<std::vector<int>> clusters;  // each sorted, ordered by first member
  std::vector<int> cluster_of;             // per small cell
  double threshold_db = kDefaultClusterThresholdDb;

  int size() const { return static_cast<int>(clusters.size()); }
  bool check_partition() const;
};

/// Union-find over small-cell pairs whose coupling loss is below the
/// threshold, so membership is transitive.
ClusterSet cluster_cells(const Eigen::MatrixXd& small_coupling_loss_db, double threshold_db);
ClusterSet cluster_cells(const LinkGainTable& gains, int num_macro, double threshold_db);

struct UlPowerParams {
  double p0_dbm = -66.0;
  double alpha = 0.8;
  double pmax_dbm = 23.0;
  double boost_db = 0.0;
};

// Fractional path-loss compensation plus a fixed offset, capped at pmax.
double ul_tx_power(double pl_to_serving_db, const UlPowerParams& params);

/// UEs among `ues` (served by small cell n) that see another small cell
/// within x1 dB of their serving RSRP.
std::vector<UeId> edge_ue_set(int n, std::span<const UeId> ues, const Eigen::MatrixXd& rsrp_dbm,
                              int num_macro, double x1_db);

/// Small cells (global ids) whose coupling loss to small cell n is below x2.
std::vector<CellId> boic_set(int n, const LinkGainTable& gains, int num_macro, double x2_db);

enum class IcMode { None, Full, Uoic, Boic };

std::string_view to_string(IcMode mode);

/// Which DL interferers a UL receiver removes. Only BS-to-BS (DL-to-UL)
/// interference is ever cancelled.
class IcPolicy {
 public:
  IcPolicy() = default;
  IcPolicy(IcMode intra, bool inter_tier, int num_macro, int num_small);

  static IcPolicy build(IcMode intra, bool inter_tier, const LinkGainTable& gains,
                        const Association& assoc, const Eigen::MatrixXd& rsrp_dbm,
                        double x1_db = kDefaultUoicX1Db, double x2_db = kDefaultBoicX2Db);

  IcMode intra() const { return intra_; }
  bool inter_tier() const { return inter_tier_; }

  /// True when the DL transmission of `interferer` is removed from the UL
  /// reception at `receiver` of UE `ue`.
  bool cancels(CellId receiver, UeId ue, CellId interferer) const;

  const std::vector<CellId>& boic_cells(int n) const { return boic_[n]; }
  bool is_edge(UeId ue) const { return ue < static_cast<int>(edge_.size()) && edge_[ue]; }
  int edge_count() const;

  void set_boic(int n, std::vector<CellId> cells);
  void set_edge(std::vector<bool> edge) { edge_ = std::move(edge); }

 private:
  IcMode intra_ = IcMode::None;
  bool inter_tier_ = false;
  int num_macro_ = 0;
  std::vector<std::vector<CellId>> boic_;  // per small cell, sorted
  std::vector<bool> edge_;                 // per UE
};

}  // namespace dyntdd
