#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dyntdd/engine.hpp"

namespace dyntdd {

enum class TierFilter { All, Macro, Small };

const char* to_string(TierFilter f);

/// UPTs in Mbps of the records matching a direction and tier.
std::vector<double> upt_mbps(std::span<const UptRecord> records, Direction dir, TierFilter tier);

/// Nearest-rank percentiles (rank = ceil(p/100 * n), at least 1). An empty
/// sample yields no value rather than zero.
std::vector<std::optional<double>> upt_percentiles(std::vector<double> values,
                                                   std::span<const double> percentiles);
std::optional<double> percentile(std::vector<double> values, double p);

// P(X >= wins) for X ~ Binomial(wins + losses, 1/2).
double sign_test_p(int wins, int losses);

// (value - baseline) / baseline.
double relative_gain(double value, double baseline);

}  // namespace dyntdd
