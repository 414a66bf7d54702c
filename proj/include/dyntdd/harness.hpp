#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dyntdd/engine.hpp"
#include "dyntdd/stats.hpp"

namespace dyntdd {

inline constexpr std::string_view kToolVersion = "1.0.0";

// ABS subframes of the macro frame used by the planned HetNet schemes.
inline constexpr int kSchemeAbs = 2;

struct SchemeSpec {
  std::string id;
  Scenario scenario = Scenario::HomSCN;
  std::string description;
  MacroMode macro_mode = MacroMode::Static;
  SmallTddMode small_mode = SmallTddMode::Static;
  TddSetKind tdd_set = TddSetKind::Rel12Homo;
  int period_frames = 1;
  bool cc = false;
  bool ulpb = false;
  IcMode intra_ic = IcMode::None;
  bool inter_tier_ic = false;
};

const std::vector<SchemeSpec>& scheme_registry();

// Accepts "3", "S3", "6(b)", "S6b", "F(b)", "fb" and similar spellings.
std::string canonical_scheme_id(std::string_view text);
const SchemeSpec& find_scheme(std::string_view id);
std::string_view baseline_scheme(Scenario s);

// Builds a scheme from config-file style keys: tdd = static|dynamic,
// tdd_set = rel12|future|het, ilim = comma list of cc, ulpb, ic_full,
// ic_uoic, ic_boic, ic_inter.
SchemeSpec custom_scheme(std::string id, Scenario scenario, std::string_view tdd,
                         std::string_view tdd_set, int period_ms, std::string_view ilim);

struct ExperimentConfig {
  Scenario scenario = Scenario::HomSCN;
  std::vector<double> loads;
  std::vector<std::uint64_t> seeds;
  std::int64_t horizon = 60'000;
  std::map<std::string, double> overrides;  // x1, x2, delta_p, pl_cc, alpha, y, T, harq_p, abs
  bool monitor_ic = false;
  int workers = 0;  // 0: DYNTDD_WORKERS or hardware concurrency
  std::vector<SchemeSpec> custom_schemes;

  static std::vector<double> default_loads(Scenario s);
  void set_override(std::string_view key_value);
  void validate() const;
  const SchemeSpec& scheme(std::string_view id) const;
  DropConfig drop_config(const SchemeSpec& scheme, double load) const;
  std::uint64_t hash(std::span<const std::string> schemes) const;
};

ExperimentConfig load_experiment_config(std::istream& in, std::vector<std::string>* schemes);

struct DropSummary {
  std::string scheme;
  double load = 0.0;
  std::uint64_t seed = 0;
  // [direction][macro, small] UPTs in Mbps.
  std::array<std::array<std::vector<float>, 2>, kDirections> upt;
  DropCounters counters;
  std::array<std::int64_t, kFrameLength> t_histogram{};
  std::optional<PlanSummary> plan;
  int clusters = 0;
  double edge_ue_fraction = 0.0;
  double mean_boic_cells = 0.0;

  std::vector<double> values(Direction d, TierFilter tier) const;
};

DropSummary summarize(const std::string& scheme, double load, const DropResult& r);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::string> schemes;
  std::vector<DropSummary> drops;  // sorted by scheme order, load, seed

  std::vector<double> pooled(std::string_view scheme, double load, Direction d, TierFilter tier) const;
  std::vector<const DropSummary*> select(std::string_view scheme, double load) const;
};

ExperimentResult run_experiment(const ExperimentConfig& config, const std::vector<std::string>& schemes);

struct ReportRow {
  std::string scheme;
  std::string scenario;
  double load = 0.0;
  std::string seed;  // a seed or "pooled"
  std::string metric;
  std::string direction;
  std::string tier;
  int percentile = 0;
  std::optional<double> value;

  bool operator==(const ReportRow&) const = default;
};

struct Report {
  std::map<std::string, std::string> provenance;
  std::vector<ReportRow> rows;

  bool operator==(const Report&) const = default;
};

Report build_report(const ExperimentResult& result);
void write_csv(std::ostream& out, const Report& report);
void write_json(std::ostream& out, const Report& report);
Report load_json_report(std::istream& in);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace dyntdd
