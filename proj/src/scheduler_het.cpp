#include "dyntdd/scheduler_het.hpp"

#include <algorithm>
#include <stdexcept>

namespace dyntdd {

DensityReport inst_dyn_densities(int n, const Association& assoc, const TrafficState& traffic,
                                 const MacroFramePlan& plan, int t) {
  const auto dl = static_cast<double>(traffic.omega_sum(Direction::Dl, assoc.er_set(n)));
  const auto ul = static_cast<double>(traffic.omega_sum(Direction::Ul, assoc.small_set(n)) +
                                      traffic.omega_sum(Direction::Ul, assoc.er_set(n)));
  return {safe_density(dl, plan.f_s_dyn - t), safe_density(ul, t), DensityBasis::Instantaneous};
}

int t_inst_het(int n, const Association& assoc, const TrafficState& traffic,
               const MacroFramePlan& plan, const TddConfigSet& set) {
  const std::int64_t er_dl = traffic.omega_sum(Direction::Dl, assoc.er_set(n));
  const std::int64_t ul = traffic.omega_sum(Direction::Ul, assoc.small_set(n)) +
                          traffic.omega_sum(Direction::Ul, assoc.er_set(n));
  if (er_dl == 0 && ul == 0) return t_stat_het(n, std::nullopt, assoc, traffic, plan, set);
  return balance_ul_count(set.ul_counts(), static_cast<double>(er_dl), static_cast<double>(ul),
                          plan.f_s_dyn);
}

std::vector<MacroRole> macro_pattern(const MacroFramePlan& plan) {
  std::vector<MacroRole> p;
  p.insert(p.end(), plan.f_m_dl, MacroRole::Dl);
  p.insert(p.end(), plan.A, MacroRole::Abs);
  p.insert(p.end(), plan.f_m_ul, MacroRole::Ul);
  return p;
}

int SmallCellFrameSchedule::count(SlotRole r) const {
  return static_cast<int>(std::count(roles.begin(), roles.end(), r));
}

std::string SmallCellFrameSchedule::trace() const {
  std::string s;
  for (SlotRole r : roles) s += role_char(r);
  return s;
}

SmallCellFrameSchedule build_frame_schedule(int t_inst, const std::vector<MacroRole>& macro) {
  const auto dyn = static_cast<int>(
      std::count_if(macro.begin(), macro.end(), [](MacroRole r) { return r != MacroRole::Dl; }));
  if (t_inst < 1 || t_inst > dyn)
    throw std::invalid_argument("UL count outside the dynamic TDD portion");
  SmallCellFrameSchedule s;
  s.t_inst = t_inst;
  s.roles.resize(macro.size());
  int dyn_seen = 0;
  for (std::size_t i = 0; i < macro.size(); ++i) {
    if (macro[i] == MacroRole::Dl) {
      s.roles[i] = SlotRole::MacroAlignedDl;
    } else {
      s.roles[i] = dyn_seen < dyn - t_inst ? SlotRole::DynDl : SlotRole::DynUl;
      ++dyn_seen;
    }
  }
  return s;
}

bool dl_eligible(SlotRole role, bool is_er, bool er_dl_pending) {
  switch (role) {
    case SlotRole::MacroAlignedDl: return !is_er;
    case SlotRole::DynDl: return is_er || !er_dl_pending;
    case SlotRole::DynUl: return false;
  }
  return false;
}

char role_char(MacroRole r) {
  switch (r) {
    case MacroRole::Dl: return 'D';
    case MacroRole::Abs: return 'A';
    case MacroRole::Ul: return 'U';
  }
  return '?';
}

char role_char(SlotRole r) {
  switch (r) {
    case SlotRole::MacroAlignedDl: return 'M';
    case SlotRole::DynDl: return 'D';
    case SlotRole::DynUl: return 'U';
  }
  return '?';
}

}  // namespace dyntdd
