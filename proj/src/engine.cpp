#include "dyntdd/engine.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dyntdd {

const char* to_string(Tier t) { return t == Tier::Macro ? "macro" : "small"; }

void DropConfig::validate() const {
  if (frame_len != kFrameLength) throw ConfigError("only a frame length of 10 is supported");
  if (horizon < 1) throw ConfigError("horizon must be at least one subframe");
  if (lambda_dl < 0.0) throw ConfigError("arrival rate must be non-negative");
  if (period_frames < 1) throw ConfigError("reconfiguration period must be at least one frame");
  if (harq_p_fail < 0.0 || harq_p_fail > 1.0) throw ConfigError("HARQ failure probability outside [0,1]");
  if (max_retx < 0) throw ConfigError("negative retransmission limit");
  if (power.alpha < 0.0 || power.alpha > 1.0) throw ConfigError("power control alpha outside [0,1]");
  if (ul_boost_db < 0.0) throw ConfigError("UL power boost must be non-negative");
  if (macro_mode == MacroMode::Planned && scenario != Scenario::HetNet)
    throw ConfigError("ABS planning needs macrocells");
  if (small_mode == SmallTddMode::Het && macro_mode != MacroMode::Planned)
    throw ConfigError("dynamic portion splitting needs a planned macro frame");
  if (cc && small_mode != SmallTddMode::Homo)
    throw ConfigError("cell clustering applies only to per-cell dynamic splitting");
  if (small_mode == SmallTddMode::Static && macro_mode == MacroMode::Static &&
      (static_ul < 1 || static_ul >= frame_len))
    throw ConfigError("static UL count outside 1..9");
  if (macro_static_ul < 1 || macro_static_ul >= frame_len)
    throw ConfigError("macro static UL count outside 1..9");
  if (fixed_abs && (*fixed_abs < 0 || *fixed_abs >= frame_len))
    throw ConfigError("fixed ABS count outside 0..9");
}

DropInputs make_drop_inputs(const DropConfig& config, std::uint64_t seed) {
  DropInputs in;
  in.layout = generate_layout(config.scenario, seed, config.radio);
  in.gains = compute_link_gains(in.layout, seed, config.radio);
  std::vector<TrafficSource> sources(in.layout.num_ues(), TrafficSource::uniform(config.lambda_dl));
  in.arrivals = generate_arrivals(sources, config.horizon, seed);
  return in;
}

namespace {

std::string homo_pattern(int t, int frame_len) {
  return std::string(frame_len - t, 'D') + std::string(t, 'U');
}

}  // namespace

class World {
 public:
  World(const DropConfig& config, DropInputs inputs, std::uint64_t seed)
      : cfg_(config), in_(std::move(inputs)), seed_(seed) {
    cfg_.validate();
    setup();
  }

  void step();
  std::int64_t now() const { return now_; }
  const Association& association() const { return assoc_; }
  const std::vector<std::string>& patterns() const { return pattern_; }
  DropResult finish();
  DropCounters counters() const;

 private:
  void setup();
  std::int64_t buffered_bits() const;
  void frame_boundary(std::int64_t frame);
  std::optional<UeId> schedule(CellId c, char role);
  void check_conservation();

  DropConfig cfg_;
  DropInputs in_;
  std::uint64_t seed_;

  int M_ = 0, N_ = 0, Q_ = 0;
  Association assoc_;
  std::vector<std::vector<UeId>> members_;
  Eigen::MatrixXd rsrp_;
  LinkBudget lb_;
  IcPolicy ic_;
  IcPolicy ic_full_, ic_boic_, ic_none_;
  ClusterSet clusters_;
  MacroFramePlan mplan_;
  std::optional<TddConfigSet> dyn_set_;
  TddConfigSet homo_set_;

  TrafficState traffic_;
  std::vector<PacketBuffer> buf_[kDirections];
  std::vector<HarqProcess> harq_[kDirections];
  std::vector<double> rate_[kDirections];
  PfState pf_;
  Rng harq_rng_;

  std::vector<std::string> pattern_;  // per cell, one char per subframe
  std::size_t next_arrival_ = 0;
  std::int64_t now_ = 0;
  SubframeState state_;
  std::vector<UeId> scratch_;
  std::vector<UeId> served_ue_;
  std::vector<std::int64_t> served_bits_;

  DropResult result_;
};

void World::setup() {
  const NetworkLayout& L = in_.layout;
  M_ = L.num_macro();
  N_ = L.num_small();
  Q_ = L.num_ues();
  rsrp_ = rsrp_matrix(in_.gains, L);

  traffic_ = TrafficState::uniform(Q_, cfg_.lambda_dl);

  mplan_ = MacroFramePlan::fixed(cfg_.frame_len - cfg_.macro_static_ul, 0, cfg_.macro_static_ul);
  if (cfg_.macro_mode == MacroMode::Planned) {
    PlannerInput pin = make_planner_input(L, in_.gains, traffic_, cfg_.alpha_dl, cfg_.reb_db, cfg_.radio);
    pin.frame_len = cfg_.frame_len;
    PlanOutcome out = plan(pin);
    PlanSummary s;
    s.a_opt = out.a_opt;
    s.admissibility_checks = out.admissibility_checks;
    s.check_bound = out.check_bound;
    for (int m = 0; m < M_; ++m) s.macro_ues_before += pin.assoc0.k1(m);
    const int A = cfg_.fixed_abs.value_or(out.a_opt);
    const AbsCandidate& chosen = out.candidates.at(A);
    if (!chosen.feasible) throw ConfigError("requested ABS count is infeasible");
    assoc_ = chosen.association;
    mplan_ = chosen.plan;
    s.A = A;
    s.f_m_dl = mplan_.f_m_dl;
    s.f_m_ul = mplan_.f_m_ul;
    s.f_s_dyn = mplan_.f_s_dyn;
    for (int n = 0; n < N_; ++n) s.er_ues += assoc_.k3(n);
    result_.plan = s;
    dyn_set_ = mplan_.dyn_set();
  } else {
    assoc_ = associate_best_rsrp(rsrp_, M_);
  }
  homo_set_ = TddConfigSet::build(cfg_.tdd_set == TddSetKind::Het ? TddSetKind::Rel12Homo : cfg_.tdd_set);

  members_.resize(M_ + N_);
  for (CellId c = 0; c < M_ + N_; ++c) members_[c] = assoc_.members(c);

  // UL transmit power from the coupling loss towards the serving cell.
  UlPowerParams pw = cfg_.power;
  pw.boost_db = cfg_.ulpb ? cfg_.ul_boost_db : 0.0;
  Eigen::VectorXd ue_tx(Q_);
  for (UeId q = 0; q < Q_; ++q) {
    const CellId s = assoc_.serving_cell(q);
    const double pl = -in_.gains.ue_to_bs(q, s) + in_.gains.antenna_dbi(s) + cfg_.radio.ue_antenna_dbi;
    ue_tx(q) = ul_tx_power(pl, pw);
  }
  lb_ = make_link_budget(in_.gains, L.tx_power_dbm(), ue_tx, cfg_.radio.ue_noise_dbm(),
                         cfg_.radio.bs_noise_dbm());

  ic_ = IcPolicy::build(cfg_.intra_ic, cfg_.inter_tier_ic, in_.gains, assoc_, rsrp_, cfg_.x1_db, cfg_.x2_db);
  if (cfg_.monitor_ic) {
    ic_full_ = IcPolicy::build(IcMode::Full, cfg_.inter_tier_ic, in_.gains, assoc_, rsrp_);
    ic_boic_ = IcPolicy::build(IcMode::Boic, cfg_.inter_tier_ic, in_.gains, assoc_, rsrp_, cfg_.x1_db,
                               kDefaultBoicX2Db);
    ic_none_ = IcPolicy::build(IcMode::None, cfg_.inter_tier_ic, in_.gains, assoc_, rsrp_);
  }
  {
    const IcPolicy edge = IcPolicy::build(IcMode::Uoic, false, in_.gains, assoc_, rsrp_, cfg_.x1_db);
    int small_ues = 0;
    for (UeId q = 0; q < Q_; ++q) small_ues += assoc_.serves_macro(q) ? 0 : 1;
    result_.edge_ue_fraction = small_ues ? static_cast<double>(edge.edge_count()) / small_ues : 0.0;
    double boic_total = 0.0;
    for (int n = 0; n < N_; ++n) boic_total += static_cast<double>(boic_set(n, in_.gains, M_, cfg_.x2_db).size());
    result_.mean_boic_cells = N_ ? boic_total / N_ : 0.0;
  }
  clusters_ = cluster_cells(in_.gains, M_, cfg_.pl_cc_db);
  result_.clusters = clusters_.size();

  for (int d = 0; d < kDirections; ++d) {
    buf_[d].assign(Q_, PacketBuffer{});
    harq_[d].assign(Q_, HarqProcess{});
    rate_[d].assign(Q_, 0.0);
  }
  for (UeId q = 0; q < Q_; ++q) {
    const CellId s = assoc_.serving_cell(q);
    const double wb = db_to_linear(wideband_dl_sinr(in_.gains, L, s, q, cfg_.radio));
    rate_[idx(Direction::Dl)][q] = static_cast<double>(genie_la(wb, cfg_.radio.bandwidth_hz));
    const double snr = lb_.ue_to_bs(q, s) / lb_.bs_noise_mw;
    rate_[idx(Direction::Ul)][q] = static_cast<double>(genie_la(snr, cfg_.radio.bandwidth_hz));
  }
  pf_ = PfState(Q_, cfg_.pf_beta, cfg_.pf_floor);
  served_ue_.assign(M_ + N_, -1);
  served_bits_.assign(M_ + N_, 0);
  harq_rng_ = make_stream(seed_, Stream::Harq);

  pattern_.assign(M_ + N_, std::string());
  std::string macro;
  for (MacroRole r : macro_pattern(mplan_)) macro += role_char(r);
  for (int m = 0; m < M_; ++m) pattern_[m] = macro;
  if (cfg_.small_mode == SmallTddMode::Static) {
    const std::string small = cfg_.macro_mode == MacroMode::Planned
                                  ? build_frame_schedule(mplan_.f_m_ul, macro_pattern(mplan_)).trace()
                                  : homo_pattern(cfg_.static_ul, cfg_.frame_len);
    for (int n = 0; n < N_; ++n) pattern_[M_ + n] = small;
  }
  result_.seed = seed_;
}

void World::frame_boundary(std::int64_t frame) {
  const bool hetnet_small = cfg_.macro_mode == MacroMode::Planned;
  switch (cfg_.small_mode) {
    case SmallTddMode::Static:
      break;
    case SmallTddMode::Homo:
      if (frame % cfg_.period_frames != 0) break;
      if (cfg_.cc) {
        for (const auto& cl : clusters_.clusters) {
          const int t = t_inst_cluster(cl, assoc_, traffic_, homo_set_);
          for (int n : cl) pattern_[M_ + n] = homo_pattern(t, cfg_.frame_len);
        }
      } else {
        for (int n = 0; n < N_; ++n)
          pattern_[M_ + n] = homo_pattern(t_inst_homo(n, assoc_, traffic_, homo_set_), cfg_.frame_len);
      }
      break;
    case SmallTddMode::Het: {
      const auto macro = macro_pattern(mplan_);
      for (int n = 0; n < N_; ++n) {
        const int t = t_inst_het(n, assoc_, traffic_, mplan_, *dyn_set_);
        pattern_[M_ + n] = build_frame_schedule(t, macro).trace();
      }
      break;
    }
  }
  for (int n = 0; n < N_; ++n) {
    const std::string& p = pattern_[M_ + n];
    int t = static_cast<int>(std::count(p.begin(), p.end(), 'U'));
    if (hetnet_small && cfg_.small_mode == SmallTddMode::Static) t = mplan_.f_m_ul;
    ++result_.t_histogram[std::clamp(t, 0, kFrameLength - 1)];
  }
  if (frame < cfg_.trace_frames) result_.traces.push_back(pattern_);
  check_conservation();
}

std::int64_t World::buffered_bits() const {
  std::int64_t buffered = 0;
  for (const auto& dir : buf_)
    for (const auto& b : dir) buffered += b.total();
  return buffered;
}

void World::check_conservation() {
  if (result_.counters.generated_bits != result_.counters.delivered_bits + buffered_bits())
    ++result_.counters.conservation_failures;
}

DropCounters World::counters() const {
  DropCounters k = result_.counters;
  k.buffered_bits = buffered_bits();
  return k;
}

std::optional<UeId> World::schedule(CellId c, char role) {
  const bool ul = role == 'U';
  const Direction d = ul ? Direction::Ul : Direction::Dl;
  const int di = idx(d);
  const bool small = c >= M_;
  bool er_pending = false;
  if (!ul && small) {
    for (UeId q : assoc_.er_set(c - M_))
      if (!buf_[di][q].empty()) er_pending = true;
  }
  scratch_.clear();
  std::optional<UeId> retx;
  for (UeId q : members_[c]) {
    if (buf_[di][q].empty()) continue;
    if (!ul && small) {
      const SlotRole r = role == 'M' ? SlotRole::MacroAlignedDl : SlotRole::DynDl;
      if (!dl_eligible(r, assoc_.is_er(q), er_pending)) continue;
    }
    scratch_.push_back(q);
    if (harq_[di][q].pending() && (!retx || q < *retx)) retx = q;
  }
  if (retx) return retx;
  return pf_.select(d, scratch_, [&](UeId q) { return rate_[di][q]; });
}

void World::step() {
  const int pos = static_cast<int>(now_ % cfg_.frame_len);
  if (pos == 0) frame_boundary(now_ / cfg_.frame_len);

  auto& arr = in_.arrivals;
  while (next_arrival_ < arr.size() && arr[next_arrival_].subframe <= now_) {
    const ArrivalEvent& e = arr[next_arrival_++];
    if (e.subframe < now_) continue;
    buf_[idx(e.dir)][e.ue].enqueue(e.bits, e.subframe);
    result_.counters.generated_bits += e.bits;
    (e.dir == Direction::Dl ? traffic_.omega_dl : traffic_.omega_ul)[e.ue] = buf_[idx(e.dir)][e.ue].total();
  }

  state_.clear(now_);
  for (CellId c = 0; c < M_ + N_; ++c) {
    const char role = pattern_[c][pos];
    if (role == 'A') continue;
    const auto q = schedule(c, role);
    if (!q) continue;
    if (role == 'U') {
      state_.ul.push_back({c, *q});
    } else {
      if (role == 'M' && assoc_.is_er(*q)) ++result_.counters.er_dl_in_macro_aligned;
      state_.dl.push_back({c, *q});
    }
  }

  DropCounters& k = result_.counters;
  auto transmit = [&](const ActiveLink& l, Direction d, double sinr) {
    const int di = idx(d);
    ++k.transmissions[di];
    const std::int64_t bits = genie_la(sinr, cfg_.radio.bandwidth_hz);
    std::int64_t delivered = 0;
    if (harq_transmit(harq_[di][l.ue], harq_rng_, cfg_.harq_p_fail, cfg_.max_retx)) {
      DrainResult r = buf_[di][l.ue].drain(bits, now_);
      delivered = r.drained_bits;
      const CellId s = assoc_.serving_cell(l.ue);
      for (const auto& p : r.completed)
        result_.records.push_back({d, s < M_ ? Tier::Macro : Tier::Small, assoc_.is_er(l.ue), l.ue,
                                   p.bits, p.arrival_subframe, p.completion_subframe});
    } else {
      ++k.harq_failures;
    }
    return delivered;
  };

  std::vector<double> dl_sinrs(state_.dl.size()), ul_sinrs(state_.ul.size());
  for (std::size_t i = 0; i < state_.dl.size(); ++i)
    dl_sinrs[i] = dl_sinr(state_, lb_, state_.dl[i].cell, state_.dl[i].ue);
  for (std::size_t i = 0; i < state_.ul.size(); ++i) {
    const ActiveLink& l = state_.ul[i];
    ul_sinrs[i] = ul_sinr(state_, lb_, l.cell, l.ue, ic_);
    for (const auto& dl : state_.dl) {
      if (dl.cell == l.cell) continue;
      ++k.dl_to_ul_events;
      if (l.cell >= M_ && dl.cell >= M_ &&
          clusters_.cluster_of[l.cell - M_] == clusters_.cluster_of[dl.cell - M_])
        ++k.intra_cluster_dl_to_ul_events;
    }
    if (cfg_.monitor_ic) {
      const double full = ul_sinr(state_, lb_, l.cell, l.ue, ic_full_);
      const double boic = ul_sinr(state_, lb_, l.cell, l.ue, ic_boic_);
      const double none = ul_sinr(state_, lb_, l.cell, l.ue, ic_none_);
      ++k.ic_checks;
      if (!(full >= boic && boic >= none)) ++k.ic_violations;
    }
  }

  for (std::size_t i = 0; i < state_.dl.size(); ++i) {
    const auto bits = transmit(state_.dl[i], Direction::Dl, dl_sinrs[i]);
    k.delivered_bits += bits;
    traffic_.omega_dl[state_.dl[i].ue] = buf_[0][state_.dl[i].ue].total();
    served_ue_[state_.dl[i].cell] = state_.dl[i].ue;
    served_bits_[state_.dl[i].cell] = bits;
  }
  for (std::size_t i = 0; i < state_.ul.size(); ++i) {
    const auto bits = transmit(state_.ul[i], Direction::Ul, ul_sinrs[i]);
    k.delivered_bits += bits;
    traffic_.omega_ul[state_.ul[i].ue] = buf_[1][state_.ul[i].ue].total();
    served_ue_[state_.ul[i].cell] = state_.ul[i].ue;
    served_bits_[state_.ul[i].cell] = bits;
  }

  // Proportional-fair averages of every UE of a cell active in a direction.
  for (CellId c = 0; c < M_ + N_; ++c) {
    const char role = pattern_[c][pos];
    if (role == 'A') continue;
    const Direction d = role == 'U' ? Direction::Ul : Direction::Dl;
    const UeId who = served_ue_[c];
    for (UeId q : members_[c]) pf_.update(d, q, q == who ? static_cast<double>(served_bits_[c]) : 0.0);
    served_ue_[c] = -1;
    served_bits_[c] = 0;
  }
  ++now_;
}

DropResult World::finish() {
  check_conservation();
  result_.counters.buffered_bits = buffered_bits();
  return std::move(result_);
}

Simulation::Simulation(const DropConfig& config, DropInputs inputs, std::uint64_t seed)
    : world_(std::make_unique<World>(config, std::move(inputs), seed)) {}
Simulation::~Simulation() = default;
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;

void Simulation::step() { world_->step(); }
std::int64_t Simulation::now() const { return world_->now(); }
const Association& Simulation::association() const { return world_->association(); }
const std::vector<std::string>& Simulation::frame_patterns() const { return world_->patterns(); }
DropResult Simulation::finish() { return world_->finish(); }
DropCounters Simulation::counters() const { return world_->counters(); }

DropResult run_drop(const DropConfig& config, DropInputs inputs, std::uint64_t seed) {
  Simulation sim(config, std::move(inputs), seed);
  for (std::int64_t k = 0; k < config.horizon; ++k) sim.step();
  return sim.finish();
}

DropResult run_drop(const DropConfig& config, std::uint64_t seed) {
  config.validate();
  return run_drop(config, make_drop_inputs(config, seed), seed);
}

}  // namespace dyntdd
