#include "dyntdd/association.hpp"

#include <algorithm>
#include <stdexcept>

namespace dyntdd {

namespace {

void insert_sorted(std::vector<UeId>& v, UeId ue) {
  v.insert(std::lower_bound(v.begin(), v.end(), ue), ue);
}

void erase_sorted(std::vector<UeId>& v, UeId ue) {
  auto it = std::lower_bound(v.begin(), v.end(), ue);
  if (it == v.end() || *it != ue) throw std::logic_error("association: UE not in set");
  v.erase(it);
}

}  // namespace

Association::Association(int num_macro, int num_small, int num_ues)
    : serving_(num_ues, -1),
      er_(num_ues, false),
      macro_sets_(num_macro),
      small_sets_(num_small),
      er_sets_(num_small) {}

void Association::assign(UeId ue, CellId cell) {
  if (cell < 0 || cell >= num_macro() + num_small())
    throw std::out_of_range("association: cell id out of range");
  if (serving_[ue] >= 0) {
    CellId old = serving_[ue];
    if (old < num_macro())
      erase_sorted(macro_sets_[old], ue);
    else if (er_[ue])
      erase_sorted(er_sets_[small_index(old)], ue);
    else
      erase_sorted(small_sets_[small_index(old)], ue);
  }
  serving_[ue] = cell;
  er_[ue] = false;
  if (cell < num_macro())
    insert_sorted(macro_sets_[cell], ue);
  else
    insert_sorted(small_sets_[small_index(cell)], ue);
}

void Association::offload(UeId ue, int n) {
  if (!serves_macro(ue)) throw std::logic_error("association: offload of a non-macro UE");
  erase_sorted(macro_sets_[serving_[ue]], ue);
  insert_sorted(er_sets_[n], ue);
  serving_[ue] = small_cell_id(n);
  er_[ue] = true;
}

std::vector<UeId> Association::members(CellId cell) const {
  if (cell < num_macro()) return macro_sets_[cell];
  int n = small_index(cell);
  std::vector<UeId> out = small_sets_[n];
  out.insert(out.end(), er_sets_[n].begin(), er_sets_[n].end());
  return out;
}

bool Association::check_partition() const {
  std::vector<int> seen(serving_.size(), 0);
  auto visit = [&](const std::vector<UeId>& set, CellId cell, bool er) {
    for (UeId ue : set) {
      if (ue < 0 || ue >= num_ues()) return false;
      if (++seen[ue] > 1) return false;
      if (serving_[ue] != cell || er_[ue] != er) return false;
    }
    return true;
  };
  for (int m = 0; m < num_macro(); ++m)
    if (!visit(macro_sets_[m], m, false)) return false;
  for (int n = 0; n < num_small(); ++n) {
    if (!visit(small_sets_[n], small_cell_id(n), false)) return false;
    if (!visit(er_sets_[n], small_cell_id(n), true)) return false;
  }
  return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

}  // namespace dyntdd
