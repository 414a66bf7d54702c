#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dyntdd/association.hpp"
#include "dyntdd/ilim.hpp"
#include "dyntdd/rng.hpp"
#include "dyntdd/topology.hpp"
#include "dyntdd/traffic.hpp"

namespace dyntdd {

inline constexpr double kSpectralEfficiencyCap = 7.8;  // b/s/Hz
inline constexpr double kDataSymbolFraction = 11.0 / 14.0;
inline constexpr double kDefaultHarqFailure = 0.1;
inline constexpr int kDefaultMaxRetx = 4;

/// Linear received powers (mW) for every transmitter/receiver pair, given
/// BS transmit powers and per-UE UL transmit powers.
template <typename Scalar>
struct BasicLinkBudget {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix bs_to_ue;  // cells x ues
  Matrix ue_to_bs;  // ues x cells
  Matrix bs_to_bs;  // tx cell x rx cell
  Matrix ue_to_ue;  // tx ue x rx ue
  Scalar ue_noise_mw = 0;
  Scalar bs_noise_mw = 0;
};

using LinkBudget = BasicLinkBudget<double>;

LinkBudget make_link_budget(const LinkGainTable& gains, const Eigen::VectorXd& bs_tx_dbm,
                            const Eigen::VectorXd& ue_tx_dbm, double ue_noise_dbm,
                            double bs_noise_dbm);

struct ActiveLink {
  CellId cell = 0;
  UeId ue = 0;
};

/// Transmitters active in one subframe: DL cells with their scheduled UE and
/// UL UEs with their receiving cell. Cells without a scheduled UE are silent.
struct SubframeState {
  std::int64_t subframe = 0;
  std::vector<ActiveLink> dl;
  std::vector<ActiveLink> ul;

  void clear(std::int64_t sf) {
    subframe = sf;
    dl.clear();
    ul.clear();
  }
};

double dl_sinr(const SubframeState& state, const LinkBudget& lb, CellId cell, UeId ue);
double ul_sinr(const SubframeState& state, const LinkBudget& lb, CellId cell, UeId ue,
               const IcPolicy& ic);
double instantaneous_sinr(const SubframeState& state, const LinkBudget& lb, const ActiveLink& link,
                          Direction dir, const IcPolicy& ic);

/// Bits decodable in one 1 ms subframe: capped Shannon rate times the data
/// symbol fraction, floored to whole bits.
std::int64_t genie_la(double sinr_linear, double bandwidth_hz);

struct HarqProcess {
  int attempts = 0;  // failed attempts of the transport block in flight
  bool pending() const { return attempts > 0; }
};

/// One transmission attempt. Fails with probability p_fail unless the block
/// already used all its retransmissions.
bool harq_transmit(HarqProcess& h, Rng& rng, double p_fail = kDefaultHarqFailure,
                   int max_retx = kDefaultMaxRetx);

class PfState {
 public:
  PfState() = default;
  PfState(int num_ues, double beta, double floor);

  double average(Direction d, UeId ue) const { return avg_[idx(d)][ue]; }
  void update(Direction d, UeId ue, double served);

  /// argmax rate/average over `eligible`; ties to the lowest UE id.
  template <typename RateFn>
  std::optional<UeId> select(Direction d, std::span<const UeId> eligible, RateFn&& rate) const {
    std::optional<UeId> best;
    double best_metric = 0.0;
    for (UeId q : eligible) {
      const double metric = rate(q) / avg_[idx(d)][q];
      if (!best || metric > best_metric || (metric == best_metric && q < *best)) {
        best = q;
        best_metric = metric;
      }
    }
    return best;
  }

 private:
  double beta_ = 0.01;
  double floor_ = 1.0;
  std::vector<double> avg_[kDirections];
};

std::optional<UeId> pf_select(Direction d, std::span<const UeId> eligible,
                              std::span<const double> rate, const PfState& pf);

}  // namespace dyntdd
