#include "dyntdd/hetnet_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace dyntdd {

MacroFramePlan MacroFramePlan::from_abs(int A, double alpha_dl, int frame_len) {
  MacroFramePlan p;
  p.A = A;
  p.alpha_dl = alpha_dl;
  p.frame_len = frame_len;
  p.f_m_dl = static_cast<int>(std::lround((frame_len - A) * alpha_dl));
  p.f_m_ul = frame_len - A - p.f_m_dl;
  p.f_s_dyn = p.f_m_ul + A;
  return p;
}

MacroFramePlan MacroFramePlan::fixed(int f_m_dl, int A, int f_m_ul) {
  MacroFramePlan p;
  p.A = A;
  p.f_m_dl = f_m_dl;
  p.f_m_ul = f_m_ul;
  p.f_s_dyn = f_m_ul + A;
  p.frame_len = f_m_dl + A + f_m_ul;
  p.alpha_dl = static_cast<double>(f_m_dl) / (f_m_dl + f_m_ul);
  return p;
}

DensityPair macro_densities(int m, const Association& assoc, const TrafficState& traffic,
                            const MacroFramePlan& plan) {
  const auto& ues = assoc.macro_set(m);
  return {safe_density(traffic.lambda_sum(Direction::Dl, ues), plan.f_m_dl),
          safe_density(traffic.lambda_sum(Direction::Ul, ues), plan.f_m_ul)};
}

DensityPair macro_densities_minus_candidate(int m, UeId candidate, const Association& assoc,
                                            const TrafficState& traffic,
                                            const MacroFramePlan& plan) {
  const auto& ues = assoc.macro_set(m);
  if (!std::binary_search(ues.begin(), ues.end(), candidate))
    throw std::logic_error("candidate is not served by this macrocell");
  return {safe_density(traffic.lambda_sum(Direction::Dl, ues) - traffic.lambda_dl[candidate], plan.f_m_dl),
          safe_density(traffic.lambda_sum(Direction::Ul, ues) - traffic.lambda_ul[candidate], plan.f_m_ul)};
}

double smallcell_dl_density_macro_sf(int n, const Association& assoc, const TrafficState& traffic,
                                     const MacroFramePlan& plan) {
  return safe_density(traffic.lambda_sum(Direction::Dl, assoc.small_set(n)), plan.f_m_dl);
}

DensityReport dyn_densities_with_candidate(int n, std::optional<UeId> candidate,
                                           const Association& assoc, const TrafficState& traffic,
                                           const MacroFramePlan& plan, int t) {
  double dl = traffic.lambda_sum(Direction::Dl, assoc.er_set(n));
  double ul = traffic.lambda_sum(Direction::Ul, assoc.small_set(n)) +
              traffic.lambda_sum(Direction::Ul, assoc.er_set(n));
  if (candidate) {
    dl += traffic.lambda_dl[*candidate];
    ul += traffic.lambda_ul[*candidate];
  }
  return {safe_density(dl, plan.f_s_dyn - t), safe_density(ul, t), DensityBasis::Average};
}

int t_stat_het(int n, std::optional<UeId> candidate, const Association& assoc,
               const TrafficState& traffic, const MacroFramePlan& plan, const TddConfigSet& set) {
  double dl = traffic.lambda_sum(Direction::Dl, assoc.er_set(n));
  double ul = traffic.lambda_sum(Direction::Ul, assoc.small_set(n)) +
              traffic.lambda_sum(Direction::Ul, assoc.er_set(n));
  if (candidate) {
    dl += traffic.lambda_dl[*candidate];
    ul += traffic.lambda_ul[*candidate];
  }
  return balance_ul_count(set.ul_counts(), dl, ul, plan.f_s_dyn);
}

DensityPair effective_smallcell_densities(int n, int t_stat, std::optional<UeId> candidate,
                                          const Association& assoc, const TrafficState& traffic,
                                          const MacroFramePlan& plan) {
  const DensityReport dyn = dyn_densities_with_candidate(n, candidate, assoc, traffic, plan, t_stat);
  return {std::max(dyn.dl, smallcell_dl_density_macro_sf(n, assoc, traffic, plan)), dyn.ul};
}

bool offload_admissible(double d_s_dl, double d_s_ul, double d_m_dl_prime, double d_m_ul_prime,
                        double rsrp_macro_dbm, double rsrp_small_dbm, double reb_db) {
  return d_s_dl < d_m_dl_prime && d_s_ul < d_m_ul_prime && rsrp_macro_dbm - rsrp_small_dbm < reb_db;
}

bool AdmissionRecord::admissible() const {
  return offload_admissible(d_s_dl, d_s_ul, d_m_dl_prime, d_m_ul_prime, rsrp_macro_dbm,
                            rsrp_small_dbm, reb_db);
}

PlannerInput make_planner_input(const NetworkLayout& layout, const LinkGainTable& gains,
                                const TrafficState& traffic, double alpha_dl, double reb_db,
                                const RadioConfig& radio) {
  PlannerInput in;
  in.rsrp_dbm = rsrp_matrix(gains, layout);
  in.assoc0 = associate_best_rsrp(in.rsrp_dbm, layout.num_macro());
  in.traffic = traffic;
  in.alpha_dl = alpha_dl;
  in.reb_db = reb_db;
  in.wb_sinr_db.resize(layout.num_ues());
  for (UeId q = 0; q < layout.num_ues(); ++q)
    in.wb_sinr_db(q) = wideband_dl_sinr(gains, layout, in.assoc0.serving_cell(q), q, radio);
  return in;
}

double tier_objective(const Association& assoc, const TrafficState& traffic,
                      const MacroFramePlan& plan) {
  const TddConfigSet set = plan.dyn_set();
  double sum = 0.0;
  for (int m = 0; m < assoc.num_macro(); ++m) {
    auto [dl, ul] = macro_densities(m, assoc, traffic, plan);
    sum += (dl + ul) / 2.0;
  }
  for (int n = 0; n < assoc.num_small(); ++n) {
    const int t = t_stat_het(n, std::nullopt, assoc, traffic, plan, set);
    auto [dl, ul] = effective_smallcell_densities(n, t, std::nullopt, assoc, traffic, plan);
    sum += (dl + ul) / 2.0;
  }
  return sum / (assoc.num_macro() + assoc.num_small());
}

std::vector<std::optional<double>> PlanOutcome::objective_per_A() const {
  std::vector<std::optional<double>> out;
  for (const auto& c : candidates)
    out.push_back(c.feasible ? std::optional<double>(c.objective) : std::nullopt);
  return out;
}

namespace {

constexpr double kObjectiveTieTolerance = 1e-12;

AbsCandidate sweep_one(const PlannerInput& in, int A, std::int64_t& checks) {
  AbsCandidate cand;
  cand.plan = MacroFramePlan::from_abs(A, in.alpha_dl, in.frame_len);
  cand.feasible = cand.plan.feasible();
  if (!cand.feasible) return cand;

  const TddConfigSet set = cand.plan.dyn_set();
  const TrafficState& tr = in.traffic;
  Association assoc = in.assoc0;
  const int M = assoc.num_macro();
  const int N = assoc.num_small();

  for (int m = 0; m < M; ++m) {
    std::vector<UeId> order = assoc.macro_set(m);
    std::stable_sort(order.begin(), order.end(),
                     [&](UeId a, UeId b) { return in.wb_sinr_db(a) < in.wb_sinr_db(b); });
    for (UeId q : order) {
      const auto [dm_dl, dm_ul] = macro_densities_minus_candidate(m, q, assoc, tr, cand.plan);
      std::vector<int> cells(N);
      std::iota(cells.begin(), cells.end(), 0);
      std::stable_sort(cells.begin(), cells.end(), [&](int a, int b) {
        return in.rsrp_dbm(assoc.small_cell_id(a), q) > in.rsrp_dbm(assoc.small_cell_id(b), q);
      });
      for (int n : cells) {
        ++checks;
        const int t = t_stat_het(n, q, assoc, tr, cand.plan, set);
        const auto [ds_dl, ds_ul] = effective_smallcell_densities(n, t, q, assoc, tr, cand.plan);
        AdmissionRecord rec{A,     q,     m,     n,
                            ds_dl, ds_ul, dm_dl, dm_ul,
                            in.rsrp_dbm(m, q), in.rsrp_dbm(assoc.small_cell_id(n), q), in.reb_db};
        if (rec.admissible()) {
          assoc.offload(q, n);
          cand.admissions.push_back(rec);
          break;
        }
      }
    }
  }

  // Equal to the densities recorded at admission; untouched cells get theirs here.
  cand.objective = tier_objective(assoc, tr, cand.plan);
  cand.t_stat.resize(N);
  for (int n = 0; n < N; ++n) cand.t_stat[n] = t_stat_het(n, std::nullopt, assoc, tr, cand.plan, set);
  cand.association = std::move(assoc);
  return cand;
}

}  // namespace

PlanOutcome plan(const PlannerInput& input) {
  if (input.frame_len < 2) throw ConfigError("frame length must be at least 2");
  PlanOutcome out;
  std::int64_t k1_total = 0;
  for (int m = 0; m < input.assoc0.num_macro(); ++m) k1_total += input.assoc0.k1(m);
  out.check_bound = static_cast<std::int64_t>(input.frame_len) * input.assoc0.num_small() * k1_total;

  int best = -1;
  for (int A = 0; A < input.frame_len; ++A) {
    out.candidates.push_back(sweep_one(input, A, out.admissibility_checks));
    const AbsCandidate& c = out.candidates.back();
    if (!c.feasible) continue;
    if (best < 0) {
      best = A;
      continue;
    }
    const double incumbent = out.candidates[best].objective;
    if (c.objective < incumbent - kObjectiveTieTolerance * std::abs(incumbent)) best = A;
  }
  if (best < 0) throw ConfigError("no feasible ABS duty cycle for the given DL ratio");

  const AbsCandidate& chosen = out.candidates[best];
  out.a_opt = best;
  out.plan = chosen.plan;
  out.association = chosen.association;
  out.per_cell_t_stat = chosen.t_stat;
  return out;
}

void write_plan_report(std::ostream& sweep, std::ostream& association, const PlanOutcome& outcome) {
  sweep << "A,objective,feasible\n";
  sweep.precision(17);
  for (const auto& c : outcome.candidates) {
    sweep << c.plan.A << ',';
    if (c.feasible) sweep << c.objective;
    sweep << ',' << (c.feasible ? 1 : 0) << '\n';
  }
  association << "ue,serving_cell,is_er\n";
  const Association& a = outcome.association;
  for (UeId q = 0; q < a.num_ues(); ++q)
    association << q << ',' << a.serving_cell(q) << ',' << (a.is_er(q) ? 1 : 0) << '\n';
}

}  // namespace dyntdd
