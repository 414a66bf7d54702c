#include "dyntdd/phy.hpp"

#include <algorithm>
#include <cmath>

namespace dyntdd {

LinkBudget make_link_budget(const LinkGainTable& gains, const Eigen::VectorXd& bs_tx_dbm,
                            const Eigen::VectorXd& ue_tx_dbm, double ue_noise_dbm,
                            double bs_noise_dbm) {
  LinkBudget lb;
  lb.bs_to_ue = db_to_linear((gains.bs_to_ue.colwise() + bs_tx_dbm).array()).matrix();
  lb.ue_to_bs = db_to_linear((gains.ue_to_bs.colwise() + ue_tx_dbm).array()).matrix();
  lb.bs_to_bs = db_to_linear((gains.bs_to_bs.colwise() + bs_tx_dbm).array()).matrix();
  lb.ue_to_ue = db_to_linear((gains.ue_to_ue.colwise() + ue_tx_dbm).array()).matrix();
  lb.bs_to_bs.diagonal().setZero();
  lb.ue_to_ue.diagonal().setZero();
  lb.ue_noise_mw = db_to_linear(ue_noise_dbm);
  lb.bs_noise_mw = db_to_linear(bs_noise_dbm);
  return lb;
}

double dl_sinr(const SubframeState& state, const LinkBudget& lb, CellId cell, UeId ue) {
  double interference = 0.0;
  for (const auto& l : state.dl)
    if (l.cell != cell) interference += lb.bs_to_ue(l.cell, ue);
  for (const auto& l : state.ul)
    if (l.ue != ue) interference += lb.ue_to_ue(l.ue, ue);
  return lb.bs_to_ue(cell, ue) / (interference + lb.ue_noise_mw);
}

double ul_sinr(const SubframeState& state, const LinkBudget& lb, CellId cell, UeId ue,
               const IcPolicy& ic) {
  double interference = 0.0;
  for (const auto& l : state.dl)
    if (l.cell != cell && !ic.cancels(cell, ue, l.cell)) interference += lb.bs_to_bs(l.cell, cell);
  for (const auto& l : state.ul)
    if (l.ue != ue) interference += lb.ue_to_bs(l.ue, cell);
  return lb.ue_to_bs(ue, cell) / (interference + lb.bs_noise_mw);
}

double instantaneous_sinr(const SubframeState& state, const LinkBudget& lb, const ActiveLink& link,
                          Direction dir, const IcPolicy& ic) {
  return dir == Direction::Dl ? dl_sinr(state, lb, link.cell, link.ue)
                              : ul_sinr(state, lb, link.cell, link.ue, ic);
}

std::int64_t genie_la(double sinr_linear, double bandwidth_hz) {
  if (!(sinr_linear > 0.0)) return 0;
  const double se = std::min(std::log2(1.0 + sinr_linear), kSpectralEfficiencyCap);
  return static_cast<std::int64_t>(std::floor(se * (bandwidth_hz / 1000.0) * kDataSymbolFraction));
}

bool harq_transmit(HarqProcess& h, Rng& rng, double p_fail, int max_retx) {
  const bool forced = h.attempts >= max_retx;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double draw = u(rng);
  if (!forced && draw < p_fail) {
    ++h.attempts;
    return false;
  }
  h.attempts = 0;
  return true;
}

PfState::PfState(int num_ues, double beta, double floor) : beta_(beta), floor_(floor) {
  for (auto& v : avg_) v.assign(num_ues, floor);
}

void PfState::update(Direction d, UeId ue, double served) {
  double& a = avg_[idx(d)][ue];
  a = std::max((1.0 - beta_) * a + beta_ * served, floor_);
}

std::optional<UeId> pf_select(Direction d, std::span<const UeId> eligible,
                              std::span<const double> rate, const PfState& pf) {
  return pf.select(d, eligible, [&](UeId q) { return rate[q]; });
}

}  // namespace dyntdd
