#pragma once

#include <span>
#include <vector>

#include "dyntdd/association.hpp"
#include "dyntdd/tdd_config.hpp"
#include "dyntdd/traffic.hpp"

namespace dyntdd {

enum class DensityBasis { Average, Instantaneous };

// Traffic per DL subframe and per UL subframe for a candidate UL count t.
struct DensityReport {
  double dl = 0.0;
  double ul = 0.0;
  DensityBasis basis = DensityBasis::Average;

  double gap() const;
};

/// numerator / denominator with 0/0 taken as 0 and x/0 as +inf.
double safe_density(double numerator, int denominator);

/// Picks the t in `ul_counts` minimising |ul/t - dl/(budget - t)|. Gaps equal
/// up to rounding noise count as ties, which go to the smallest t.
int balance_ul_count(std::span<const int> ul_counts, double dl_numerator, double ul_numerator,
                     int budget);

// Small cell n, sums over every UE it serves.
DensityReport avg_densities(int n, const Association& assoc, const TrafficState& traffic, int t,
                            int frame_len = kFrameLength);
DensityReport inst_densities(int n, const Association& assoc, const TrafficState& traffic, int t,
                             int frame_len = kFrameLength);

int t_stat_homo(int n, const Association& assoc, const TrafficState& traffic,
                const TddConfigSet& set);

/// Per-frame UL count from the instantaneous buffers; falls back to the
/// statistical choice when every DL and UL buffer of the cell is empty.
int t_inst_homo(int n, const Association& assoc, const TrafficState& traffic,
                const TddConfigSet& set);

// The same rule applied to the union of the UEs of a cell cluster.
int t_inst_cluster(std::span<const int> cluster, const Association& assoc,
                   const TrafficState& traffic, const TddConfigSet& set);

}  // namespace dyntdd
