#include "dyntdd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dyntdd {

const char* to_string(TierFilter f) {
  switch (f) {
    case TierFilter::All: return "all";
    case TierFilter::Macro: return "macro";
    case TierFilter::Small: return "small";
  }
  return "?";
}

std::vector<double> upt_mbps(std::span<const UptRecord> records, Direction dir, TierFilter tier) {
  std::vector<double> out;
  for (const auto& r : records) {
    if (r.dir != dir) continue;
    if (tier == TierFilter::Macro && r.tier != Tier::Macro) continue;
    if (tier == TierFilter::Small && r.tier != Tier::Small) continue;
    out.push_back(r.upt_bps() / 1e6);
  }
  return out;
}

std::vector<std::optional<double>> upt_percentiles(std::vector<double> values,
                                                   std::span<const double> percentiles) {
  std::sort(values.begin(), values.end());
  std::vector<std::optional<double>> out;
  for (double p : percentiles) {
    if (p < 0.0 || p > 100.0) throw std::invalid_argument("percentile outside [0,100]");
    if (values.empty()) {
      out.push_back(std::nullopt);
      continue;
    }
    const auto n = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    out.push_back(values[rank - 1]);
  }
  return out;
}

std::optional<double> percentile(std::vector<double> values, double p) {
  const double ps[] = {p};
  return upt_percentiles(std::move(values), ps).front();
}

double sign_test_p(int wins, int losses) {
  const int n = wins + losses;
  if (n == 0) return 1.0;
  // Sum of binomial terms in log space.
  double p = 0.0;
  for (int k = wins; k <= n; ++k)
    p += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0));
  return std::min(p, 1.0);
}

double relative_gain(double value, double baseline) { return (value - baseline) / baseline; }

}  // namespace dyntdd
