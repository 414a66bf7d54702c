#pragma once

#include <string>
#include <vector>

#include "dyntdd/hetnet_planner.hpp"

namespace dyntdd {

DensityReport inst_dyn_densities(int n, const Association& assoc, const TrafficState& traffic,
                                 const MacroFramePlan& plan, int t);

/// Per-frame UL count of small cell n in the dynamic portion. When no UE of
/// the cell has UL data and no ER UE has DL data, the statistical choice is
/// used instead.
int t_inst_het(int n, const Association& assoc, const TrafficState& traffic,
               const MacroFramePlan& plan, const TddConfigSet& set);

enum class MacroRole { Dl, Abs, Ul };

// [DL x f_m_dl | ABS x A | UL x f_m_ul], shared by every macrocell.
std::vector<MacroRole> macro_pattern(const MacroFramePlan& plan);

enum class SlotRole { MacroAlignedDl, DynDl, DynUl };

struct SmallCellFrameSchedule {
  std::vector<SlotRole> roles;
  int t_inst = 0;

  int count(SlotRole r) const;
  // One character per subframe: M, D or U.
  std::string trace() const;
};

/// Macro-DL-aligned subframes carry DL for non-ER UEs; of the remaining
/// dynamic subframes the last t_inst become UL.
SmallCellFrameSchedule build_frame_schedule(int t_inst, const std::vector<MacroRole>& macro);

/// DL eligibility of a UE in a small-cell subframe. ER UEs never use
/// macro-aligned DL; non-ER UEs use dynamic DL only when no ER UE of the
/// cell has DL data.
bool dl_eligible(SlotRole role, bool is_er, bool er_dl_pending);
inline bool ul_eligible(SlotRole role) { return role == SlotRole::DynUl; }

char role_char(MacroRole r);
char role_char(SlotRole r);

}  // namespace dyntdd
