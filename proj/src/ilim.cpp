#include "dyntdd/ilim.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dyntdd {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

bool ClusterSet::check_partition() const {
  std::vector<int> seen(cluster_of.size(), 0);
  for (int c = 0; c < size(); ++c) {
    for (int n : clusters[c]) {
      if (n < 0 || n >= static_cast<int>(seen.size()) || seen[n]++ || cluster_of[n] != c)
        return false;
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

ClusterSet cluster_cells(const Eigen::MatrixXd& loss, double threshold_db) {
  const int N = static_cast<int>(loss.rows());
  UnionFind uf(N);
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      if (loss(i, j) < threshold_db || loss(j, i) < threshold_db) uf.unite(i, j);

  ClusterSet cs;
  cs.threshold_db = threshold_db;
  cs.cluster_of.assign(N, -1);
  std::vector<int> root_to_cluster(N, -1);
  for (int n = 0; n < N; ++n) {
    const int r = uf.find(n);
    if (root_to_cluster[r] < 0) {
      root_to_cluster[r] = cs.size();
      cs.clusters.emplace_back();
    }
    cs.cluster_of[n] = root_to_cluster[r];
    cs.clusters[cs.cluster_of[n]].push_back(n);
  }
  return cs;
}

ClusterSet cluster_cells(const LinkGainTable& gains, int num_macro, double threshold_db) {
  const Eigen::MatrixXd pl = gains.bs_path_loss_matrix();
  const int N = static_cast<int>(pl.rows()) - num_macro;
  return cluster_cells(pl.bottomRightCorner(N, N), threshold_db);
}

double ul_tx_power(double pl_to_serving_db, const UlPowerParams& params) {
  return std::min(params.pmax_dbm, params.p0_dbm + params.alpha * pl_to_serving_db + params.boost_db);
}

std::vector<UeId> edge_ue_set(int n, std::span<const UeId> ues, const Eigen::MatrixXd& rsrp_dbm,
                              int num_macro, double x1_db) {
  const int B = static_cast<int>(rsrp_dbm.rows());
  std::vector<UeId> out;
  for (UeId q : ues) {
    const double serving = rsrp_dbm(num_macro + n, q);
    for (CellId c = num_macro; c < B; ++c) {
      if (c != num_macro + n && rsrp_dbm(c, q) > serving - x1_db) {
        out.push_back(q);
        break;
      }
    }
  }
  return out;
}

std::vector<CellId> boic_set(int n, const LinkGainTable& gains, int num_macro, double x2_db) {
  const int B = static_cast<int>(gains.bs_to_bs.rows());
  const CellId self = num_macro + n;
  std::vector<CellId> out;
  for (CellId c = num_macro; c < B; ++c)
    if (c != self && gains.bs_path_loss(c, self) < x2_db) out.push_back(c);
  return out;
}

std::string_view to_string(IcMode mode) {
  switch (mode) {
    case IcMode::None: return "none";
    case IcMode::Full: return "full";
    case IcMode::Uoic: return "uoic";
    case IcMode::Boic: return "boic";
  }
  return "?";
}

IcPolicy::IcPolicy(IcMode intra, bool inter_tier, int num_macro, int num_small)
    : intra_(intra), inter_tier_(inter_tier), num_macro_(num_macro), boic_(num_small) {}

IcPolicy IcPolicy::build(IcMode intra, bool inter_tier, const LinkGainTable& gains,
                         const Association& assoc, const Eigen::MatrixXd& rsrp_dbm, double x1_db,
                         double x2_db) {
  IcPolicy p(intra, inter_tier, assoc.num_macro(), assoc.num_small());
  if (intra == IcMode::Boic)
    for (int n = 0; n < assoc.num_small(); ++n)
      p.boic_[n] = boic_set(n, gains, assoc.num_macro(), x2_db);
  if (intra == IcMode::Uoic) {
    p.edge_.assign(assoc.num_ues(), false);
    for (int n = 0; n < assoc.num_small(); ++n) {
      const auto members = assoc.members(assoc.small_cell_id(n));
      for (UeId q : edge_ue_set(n, members, rsrp_dbm, assoc.num_macro(), x1_db)) p.edge_[q] = true;
    }
  }
  return p;
}

bool IcPolicy::cancels(CellId receiver, UeId ue, CellId interferer) const {
  if (receiver == interferer) return false;
  const bool rx_macro = receiver < num_macro_;
  const bool tx_macro = interferer < num_macro_;
  if (rx_macro != tx_macro) return inter_tier_;
  if (rx_macro) return false;
  switch (intra_) {
    case IcMode::None: return false;
    case IcMode::Full: return true;
    case IcMode::Uoic: return is_edge(ue);
    case IcMode::Boic: {
      const auto& cells = boic_[receiver - num_macro_];
      return std::binary_search(cells.begin(), cells.end(), interferer);
    }
  }
  return false;
}

int IcPolicy::edge_count() const {
  return static_cast<int>(std::count(edge_.begin(), edge_.end(), true));
}

void IcPolicy::set_boic(int n, std::vector<CellId> cells) {
  std::sort(cells.begin(), cells.end());
  boic_[n] = std::move(cells);
}

}  // namespace dyntdd
