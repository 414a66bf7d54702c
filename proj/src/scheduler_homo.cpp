#include "dyntdd/scheduler_homo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dyntdd {

namespace {

constexpr double kTieTolerance = 4e-15;

struct Sums {
  double lambda_dl = 0.0, lambda_ul = 0.0;
  std::int64_t omega_dl = 0, omega_ul = 0;
};

Sums cell_sums(std::span<const int> cells, const Association& assoc, const TrafficState& traffic) {
  Sums s;
  for (int n : cells) {
    for (const auto* set : {&assoc.small_set(n), &assoc.er_set(n)}) {
      s.lambda_dl += traffic.lambda_sum(Direction::Dl, *set);
      s.lambda_ul += traffic.lambda_sum(Direction::Ul, *set);
      s.omega_dl += traffic.omega_sum(Direction::Dl, *set);
      s.omega_ul += traffic.omega_sum(Direction::Ul, *set);
    }
  }
  return s;
}

int t_inst_from_sums(const Sums& s, const TddConfigSet& set) {
  if (s.omega_dl == 0 && s.omega_ul == 0)
    return balance_ul_count(set.ul_counts(), s.lambda_dl, s.lambda_ul, set.budget());
  return balance_ul_count(set.ul_counts(), static_cast<double>(s.omega_dl),
                          static_cast<double>(s.omega_ul), set.budget());
}

}  // namespace

double DensityReport::gap() const {
  if (std::isinf(dl) || std::isinf(ul)) return (std::isinf(dl) && std::isinf(ul)) ? 0.0 : INFINITY;
  return std::abs(ul - dl);
}

double safe_density(double numerator, int denominator) {
  if (denominator > 0) return numerator / denominator;
  return numerator == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

int balance_ul_count(std::span<const int> ul_counts, double dl_numerator, double ul_numerator,
                     int budget) {
  if (ul_counts.empty()) throw std::invalid_argument("empty TDD configuration set");
  int best_t = ul_counts.front();
  double best_gap = std::numeric_limits<double>::infinity();
  double best_scale = 0.0;
  bool first = true;
  for (int t : ul_counts) {
    const double dl = safe_density(dl_numerator, budget - t);
    const double ul = safe_density(ul_numerator, t);
    const double gap = DensityReport{dl, ul}.gap();
    const double scale = std::isinf(dl) ? 0.0 : dl + ul;
    bool better = false;
    if (first) {
      better = true;
    } else if (std::isinf(best_gap)) {
      better = !std::isinf(gap);
    } else if (!std::isinf(gap)) {
      better = gap < best_gap - kTieTolerance * std::max(scale, best_scale);
    }
    if (better) {
      best_t = t;
      best_gap = gap;
      best_scale = scale;
    }
    first = false;
  }
  return best_t;
}

DensityReport avg_densities(int n, const Association& assoc, const TrafficState& traffic, int t,
                            int frame_len) {
  const int cell[] = {n};
  const Sums s = cell_sums(cell, assoc, traffic);
  return {safe_density(s.lambda_dl, frame_len - t), safe_density(s.lambda_ul, t),
          DensityBasis::Average};
}

DensityReport inst_densities(int n, const Association& assoc, const TrafficState& traffic, int t,
                             int frame_len) {
  const int cell[] = {n};
  const Sums s = cell_sums(cell, assoc, traffic);
  return {safe_density(static_cast<double>(s.omega_dl), frame_len - t),
          safe_density(static_cast<double>(s.omega_ul), t), DensityBasis::Instantaneous};
}

int t_stat_homo(int n, const Association& assoc, const TrafficState& traffic,
                const TddConfigSet& set) {
  const int cell[] = {n};
  const Sums s = cell_sums(cell, assoc, traffic);
  return balance_ul_count(set.ul_counts(), s.lambda_dl, s.lambda_ul, set.budget());
}

int t_inst_homo(int n, const Association& assoc, const TrafficState& traffic,
                const TddConfigSet& set) {
  const int cell[] = {n};
  return t_inst_from_sums(cell_sums(cell, assoc, traffic), set);
}

int t_inst_cluster(std::span<const int> cluster, const Association& assoc,
                   const TrafficState& traffic, const TddConfigSet& set) {
  if (cluster.empty()) throw std::invalid_argument("empty cell cluster");
  return t_inst_from_sums(cell_sums(cluster, assoc, traffic), set);
}

}  // namespace dyntdd
