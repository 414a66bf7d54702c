#pragma once

#include <vector>

namespace dyntdd {

using CellId = int;
using UeId = int;

/// UE-to-cell association split into macrocell UEs, original small-cell UEs
/// and range-expanded (ER) UEs offloaded from a macrocell. Macro sets are
/// indexed by macro index m, small and ER sets by small-cell index n; the
/// global cell id of small cell n is num_macro + n.
class Association {
 public:
  Association() = default;
  Association(int num_macro, int num_small, int num_ues);

  int num_macro() const { return static_cast<int>(macro_sets_.size()); }
  int num_small() const { return static_cast<int>(small_sets_.size()); }
  int num_ues() const { return static_cast<int>(serving_.size()); }

  CellId small_cell_id(int n) const { return num_macro() + n; }
  int small_index(CellId cell) const { return cell - num_macro(); }

  void assign(UeId ue, CellId cell);
  // Moves a macrocell UE into the ER set of small cell n.
  void offload(UeId ue, int n);

  CellId serving_cell(UeId ue) const { return serving_[ue]; }
  bool is_er(UeId ue) const { return er_[ue]; }
  bool serves_macro(UeId ue) const { return serving_[ue] >= 0 && serving_[ue] < num_macro(); }

  const std::vector<UeId>& macro_set(int m) const { return macro_sets_[m]; }
  const std::vector<UeId>& small_set(int n) const { return small_sets_[n]; }
  const std::vector<UeId>& er_set(int n) const { return er_sets_[n]; }

  int k1(int m) const { return static_cast<int>(macro_sets_[m].size()); }
  int k2(int n) const { return static_cast<int>(small_sets_[n].size()); }
  int k3(int n) const { return static_cast<int>(er_sets_[n].size()); }

  // Every UE served by a cell (small cells: non-ER then ER).
  std::vector<UeId> members(CellId cell) const;

  /// True when every UE is in exactly one set and the sets agree with the
  /// per-UE serving cell.
  bool check_partition() const;

  bool operator==(const Association&) const = default;

 private:
  std::vector<CellId> serving_;
  std::vector<bool> er_;
  std::vector<std::vector<UeId>> macro_sets_;
  std::vector<std::vector<UeId>> small_sets_;
  std::vector<std::vector<UeId>> er_sets_;
};

}  // namespace dyntdd
