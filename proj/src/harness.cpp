#include "dyntdd/harness.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dyntdd {

using json = nlohmann::json;

namespace {

SchemeSpec homo(std::string id, std::string desc) {
  SchemeSpec s;
  s.id = std::move(id);
  s.description = std::move(desc);
  s.small_mode = SmallTddMode::Homo;
  return s;
}

SchemeSpec het(std::string id, std::string desc) {
  SchemeSpec s;
  s.id = std::move(id);
  s.description = std::move(desc);
  s.scenario = Scenario::HetNet;
  return s;
}

std::vector<SchemeSpec> make_registry() {
  std::vector<SchemeSpec> r;
  SchemeSpec s1 = homo("1", "static TDD 7:3");
  s1.small_mode = SmallTddMode::Static;
  r.push_back(s1);
  SchemeSpec s2 = homo("2", "Rel-12 dynamic TDD, 200 ms reconfiguration");
  s2.period_frames = 20;
  r.push_back(s2);
  r.push_back(homo("3", "Rel-12 dynamic TDD, 10 ms reconfiguration"));
  auto base3 = [&](std::string id, std::string desc) { return homo(std::move(id), std::move(desc)); };
  SchemeSpec s4 = base3("4", "scheme 3 with cell clustering");
  s4.cc = true;
  r.push_back(s4);
  SchemeSpec s5 = base3("5", "scheme 3 with UL power boosting");
  s5.ulpb = true;
  r.push_back(s5);
  SchemeSpec s6 = base3("6", "scheme 3 with full IC");
  s6.intra_ic = IcMode::Full;
  r.push_back(s6);
  SchemeSpec s6a = base3("6a", "scheme 3 with UE-oriented IC");
  s6a.intra_ic = IcMode::Uoic;
  r.push_back(s6a);
  SchemeSpec s6b = base3("6b", "scheme 3 with BS-oriented IC");
  s6b.intra_ic = IcMode::Boic;
  r.push_back(s6b);
  SchemeSpec s7 = homo("7", "unrestricted dynamic TDD, 10 ms, full IC");
  s7.tdd_set = TddSetKind::FutureHomo;
  s7.intra_ic = IcMode::Full;
  r.push_back(s7);
  SchemeSpec s8 = base3("8", "schemes 4 and 5");
  s8.cc = s8.ulpb = true;
  r.push_back(s8);
  SchemeSpec s9 = base3("9", "schemes 4 and 6");
  s9.cc = true;
  s9.intra_ic = IcMode::Full;
  r.push_back(s9);
  SchemeSpec s10 = base3("10", "schemes 5 and 6");
  s10.ulpb = true;
  s10.intra_ic = IcMode::Full;
  r.push_back(s10);
  SchemeSpec s10b = base3("10b", "schemes 5 and 6(b)");
  s10b.ulpb = true;
  s10b.intra_ic = IcMode::Boic;
  r.push_back(s10b);
  SchemeSpec s11 = base3("11", "schemes 4, 5 and 6");
  s11.cc = s11.ulpb = true;
  s11.intra_ic = IcMode::Full;
  r.push_back(s11);
  SchemeSpec s12 = s7;
  s12.id = "12";
  s12.description = "schemes 5 and 7";
  s12.ulpb = true;
  r.push_back(s12);

  r.push_back(het("A", "static TDD 7:3 in both tiers, no CRE or ABS"));
  SchemeSpec b = het("B", "static 7:3 macrocells, per-cell dynamic TDD small cells, no CRE or ABS");
  b.small_mode = SmallTddMode::Homo;
  r.push_back(b);
  SchemeSpec c = het("C", "CRE and ABS, static small cells");
  c.macro_mode = MacroMode::Planned;
  r.push_back(c);
  SchemeSpec d = het("D", "CRE and ABS, dynamic TDD in the small-cell dynamic portion");
  d.macro_mode = MacroMode::Planned;
  d.small_mode = SmallTddMode::Het;
  r.push_back(d);
  SchemeSpec e = d;
  e.id = "E";
  e.description = "scheme D with small-cell DL to macrocell UL IC";
  e.inter_tier_ic = true;
  r.push_back(e);
  SchemeSpec f = e;
  f.id = "F";
  f.description = "scheme E with full small-cell IC";
  f.intra_ic = IcMode::Full;
  r.push_back(f);
  SchemeSpec fb = e;
  fb.id = "Fb";
  fb.description = "scheme E with BS-oriented small-cell IC";
  fb.intra_ic = IcMode::Boic;
  r.push_back(fb);
  return r;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DYNTDD_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

const std::vector<SchemeSpec>& scheme_registry() {
  static const std::vector<SchemeSpec> registry = make_registry();
  return registry;
}

std::string canonical_scheme_id(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (ch != '(' && ch != ')' && !std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.size() > 1 && (s[0] == 'S' || s[0] == 's') && std::isdigit(static_cast<unsigned char>(s[1])))
    s.erase(0, 1);
  for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (!s.empty() && std::isalpha(static_cast<unsigned char>(s[0])))
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

const SchemeSpec& find_scheme(std::string_view id) {
  const std::string key = canonical_scheme_id(id);
  for (const auto& s : scheme_registry())
    if (s.id == key) return s;
  throw ConfigError("unknown scheme '" + std::string(id) + "'");
}

std::string_view baseline_scheme(Scenario s) { return s == Scenario::HomSCN ? "1" : "A"; }

SchemeSpec custom_scheme(std::string id, Scenario scenario, std::string_view tdd,
                         std::string_view tdd_set, int period_ms, std::string_view ilim) {
  SchemeSpec s;
  s.id = std::move(id);
  s.scenario = scenario;
  s.description = "custom";
  s.tdd_set = parse_tdd_set(tdd_set);
  if (period_ms % 10 != 0 || period_ms < 10) throw ConfigError("period_ms must be a positive multiple of 10");
  s.period_frames = period_ms / 10;
  if (s.tdd_set == TddSetKind::Het) {
    s.macro_mode = MacroMode::Planned;
    s.small_mode = tdd == "static" ? SmallTddMode::Static : SmallTddMode::Het;
  } else if (tdd == "dynamic") {
    s.small_mode = SmallTddMode::Homo;
  } else if (tdd != "static") {
    throw ConfigError("tdd must be static or dynamic");
  }
  std::stringstream flags{std::string(ilim)};
  std::string flag;
  while (std::getline(flags, flag, ',')) {
    if (flag.empty() || flag == "none") continue;
    if (flag == "cc") s.cc = true;
    else if (flag == "ulpb") s.ulpb = true;
    else if (flag == "ic_full") s.intra_ic = IcMode::Full;
    else if (flag == "ic_uoic") s.intra_ic = IcMode::Uoic;
    else if (flag == "ic_boic") s.intra_ic = IcMode::Boic;
    else if (flag == "ic_inter") s.inter_tier_ic = true;
    else throw ConfigError("unknown ilim flag '" + flag + "'");
  }
  return s;
}

std::vector<double> ExperimentConfig::default_loads(Scenario s) {
  if (s == Scenario::HomSCN) return {0.05, 0.25, 0.45};
  return {0.1, 0.3, 0.5};
}

void ExperimentConfig::set_override(std::string_view kv) {
  const auto eq = kv.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override must look like key=value");
  const std::string key(kv.substr(0, eq));
  static const char* known[] = {"x1", "x2", "delta_p", "pl_cc", "alpha", "y", "T", "harq_p", "abs"};
  if (std::find(std::begin(known), std::end(known), key) == std::end(known))
    throw ConfigError("unknown override '" + key + "'");
  const std::string value(kv.substr(eq + 1));
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError("override '" + key + "' needs a number");
  overrides[key] = v;
}

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (loads.empty()) throw ConfigError("at least one load is required");
  if (horizon < 1) throw ConfigError("horizon must be positive");
  if (auto it = overrides.find("T"); it != overrides.end() && it->second != kFrameLength)
    throw ConfigError("only T=10 is supported");
}

const SchemeSpec& ExperimentConfig::scheme(std::string_view id) const {
  for (const auto& s : custom_schemes)
    if (s.id == id) return s;
  return find_scheme(id);
}

DropConfig ExperimentConfig::drop_config(const SchemeSpec& s, double load) const {
  if (s.scenario != scenario)
    throw ConfigError("scheme " + s.id + " does not belong to scenario " + std::string(to_string(scenario)));
  DropConfig c;
  c.scenario = s.scenario;
  c.macro_mode = s.macro_mode;
  c.small_mode = s.small_mode;
  c.tdd_set = s.tdd_set;
  c.period_frames = s.period_frames;
  c.cc = s.cc;
  c.ulpb = s.ulpb;
  c.intra_ic = s.intra_ic;
  c.inter_tier_ic = s.inter_tier_ic;
  c.lambda_dl = load;
  c.horizon = horizon;
  c.monitor_ic = monitor_ic;
  auto get = [&](const char* key, double fallback) {
    auto it = overrides.find(key);
    return it == overrides.end() ? fallback : it->second;
  };
  c.x1_db = get("x1", c.x1_db);
  c.x2_db = get("x2", c.x2_db);
  c.ul_boost_db = get("delta_p", c.ul_boost_db);
  c.pl_cc_db = get("pl_cc", c.pl_cc_db);
  c.alpha_dl = get("alpha", c.alpha_dl);
  c.reb_db = get("y", c.reb_db);
  c.frame_len = static_cast<int>(get("T", c.frame_len));
  c.harq_p_fail = get("harq_p", c.harq_p_fail);
  // Planned HetNet schemes run the 5:2:3 macro frame unless overridden; a
  // negative value selects the planner's A_opt.
  if (c.macro_mode == MacroMode::Planned) c.fixed_abs = kSchemeAbs;
  if (auto it = overrides.find("abs"); it != overrides.end())
    c.fixed_abs = it->second >= 0 ? std::optional<int>(static_cast<int>(it->second)) : std::nullopt;
  c.validate();
  return c;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t ExperimentConfig::hash(std::span<const std::string> schemes) const {
  json j;
  j["scenario"] = std::string(to_string(scenario));
  j["loads"] = loads;
  j["seeds"] = seeds;
  j["horizon"] = horizon;
  j["overrides"] = overrides;
  j["monitor_ic"] = monitor_ic;
  j["schemes"] = std::vector<std::string>(schemes.begin(), schemes.end());
  json custom = json::array();
  for (const auto& s : custom_schemes)
    custom.push_back({{"id", s.id},
                      {"macro", static_cast<int>(s.macro_mode)},
                      {"small", static_cast<int>(s.small_mode)},
                      {"tdd_set", std::string(to_string(s.tdd_set))},
                      {"period_frames", s.period_frames},
                      {"cc", s.cc},
                      {"ulpb", s.ulpb},
                      {"ic", std::string(to_string(s.intra_ic))},
                      {"inter", s.inter_tier_ic}});
  j["custom"] = custom;
  return fnv1a64(j.dump());
}

ExperimentConfig load_experiment_config(std::istream& in, std::vector<std::string>* schemes) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  ExperimentConfig c;
  try {
    c.scenario = parse_scenario(j.value("scenario", std::string("homscn")));
    c.loads = j.contains("loads") ? j["loads"].get<std::vector<double>>() : ExperimentConfig::default_loads(c.scenario);
    if (j.contains("seeds")) {
      if (j["seeds"].is_number_integer()) {
        for (std::uint64_t s = 1; s <= j["seeds"].get<std::uint64_t>(); ++s) c.seeds.push_back(s);
      } else {
        c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
      }
    }
    c.horizon = j.value("horizon", c.horizon);
    c.monitor_ic = j.value("monitor_ic", false);
    if (j.contains("overrides"))
      for (auto& [k, v] : j["overrides"].items()) c.set_override(k + "=" + format_double(v.get<double>()));
    if (j.contains("custom_schemes")) {
      for (const auto& s : j["custom_schemes"])
        c.custom_schemes.push_back(custom_scheme(s.at("id").get<std::string>(), c.scenario,
                                                 s.value("tdd", std::string("dynamic")),
                                                 s.value("tdd_set", std::string("rel12")),
                                                 s.value("period_ms", 10), s.value("ilim", std::string())));
    }
    if (schemes && j.contains("schemes")) *schemes = j["schemes"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  return c;
}

std::vector<double> DropSummary::values(Direction d, TierFilter tier) const {
  std::vector<double> out;
  for (int t = 0; t < 2; ++t) {
    if (tier == TierFilter::Macro && t != 0) continue;
    if (tier == TierFilter::Small && t != 1) continue;
    for (float v : upt[idx(d)][t]) out.push_back(v);
  }
  return out;
}

DropSummary summarize(const std::string& scheme, double load, const DropResult& r) {
  DropSummary s;
  s.scheme = scheme;
  s.load = load;
  s.seed = r.seed;
  for (const auto& rec : r.records)
    s.upt[idx(rec.dir)][rec.tier == Tier::Macro ? 0 : 1].push_back(static_cast<float>(rec.upt_bps() / 1e6));
  s.counters = r.counters;
  s.t_histogram = r.t_histogram;
  s.plan = r.plan;
  s.clusters = r.clusters;
  s.edge_ue_fraction = r.edge_ue_fraction;
  s.mean_boic_cells = r.mean_boic_cells;
  return s;
}

std::vector<const DropSummary*> ExperimentResult::select(std::string_view scheme, double load) const {
  std::vector<const DropSummary*> out;
  for (const auto& d : drops)
    if (d.scheme == scheme && d.load == load) out.push_back(&d);
  return out;
}

std::vector<double> ExperimentResult::pooled(std::string_view scheme, double load, Direction d,
                                             TierFilter tier) const {
  std::vector<double> out;
  for (const DropSummary* s : select(scheme, load)) {
    auto v = s->values(d, tier);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::vector<std::string>& schemes) {
  config.validate();
  if (schemes.empty()) throw ConfigError("no schemes requested");
  ExperimentResult result;
  result.config = config;
  struct Task {
    std::string scheme;
    double load;
    std::uint64_t seed;
    DropConfig drop;
  };
  std::vector<Task> tasks;
  for (const auto& id : schemes) {
    const SchemeSpec& s = config.scheme(canonical_scheme_id(id));
    result.schemes.push_back(s.id);
    for (double load : config.loads)
      for (std::uint64_t seed : config.seeds) tasks.push_back({s.id, load, seed, config.drop_config(s, load)});
  }

  result.drops.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        const Task& t = tasks[i];
        result.drops[i] = summarize(t.scheme, t.load, run_drop(t.drop, t.seed));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n = std::min<int>(resolve_workers(config.workers), static_cast<int>(tasks.size()));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

Report build_report(const ExperimentResult& result) {
  const ExperimentConfig& c = result.config;
  Report rep;
  rep.provenance["tool"] = "dyntdd";
  rep.provenance["version"] = std::string(kToolVersion);
  {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(c.hash(result.schemes)));
    rep.provenance["config_hash"] = hex;
  }
  rep.provenance["scenario"] = std::string(to_string(c.scenario));
  std::vector<std::string> seeds, loads;
  for (auto s : c.seeds) seeds.push_back(std::to_string(s));
  for (auto l : c.loads) loads.push_back(format_double(l));
  rep.provenance["seeds"] = join(seeds, ' ');
  rep.provenance["loads"] = join(loads, ' ');
  rep.provenance["horizon"] = std::to_string(c.horizon);
  rep.provenance["schemes"] = join(result.schemes, ' ');
  std::vector<std::string> ov;
  for (const auto& [k, v] : c.overrides) ov.push_back(k + "=" + format_double(v));
  rep.provenance["overrides"] = join(ov, ' ');

  const std::vector<TierFilter> tiers = c.scenario == Scenario::HomSCN
                                            ? std::vector<TierFilter>{TierFilter::All}
                                            : std::vector<TierFilter>{TierFilter::All, TierFilter::Macro, TierFilter::Small};
  const double ps[] = {5.0, 50.0, 95.0};
  const std::string scenario(to_string(c.scenario));
  const std::string baseline(baseline_scheme(c.scenario));
  const bool have_baseline = std::find(result.schemes.begin(), result.schemes.end(), baseline) != result.schemes.end();

  for (const auto& scheme : result.schemes) {
    for (double load : c.loads) {
      for (Direction d : {Direction::Dl, Direction::Ul}) {
        for (TierFilter tier : tiers) {
          const auto pooled = upt_percentiles(result.pooled(scheme, load, d, tier), ps);
          std::optional<std::vector<std::optional<double>>> base;
          if (have_baseline) base = upt_percentiles(result.pooled(baseline, load, d, tier), ps);
          for (int i = 0; i < 3; ++i) {
            const int p = static_cast<int>(ps[i]);
            rep.rows.push_back({scheme, scenario, load, "pooled", "upt", to_string(d), to_string(tier), p, pooled[i]});
            if (base) {
              std::optional<double> g;
              if (pooled[i] && (*base)[i] && *(*base)[i] > 0.0) g = relative_gain(*pooled[i], *(*base)[i]);
              rep.rows.push_back({scheme, scenario, load, "pooled", "rel_gain", to_string(d), to_string(tier), p, g});
            }
          }
          for (const DropSummary* s : result.select(scheme, load)) {
            const auto per = upt_percentiles(s->values(d, tier), ps);
            for (int i = 0; i < 3; ++i)
              rep.rows.push_back({scheme, scenario, load, std::to_string(s->seed), "upt", to_string(d),
                                  to_string(tier), static_cast<int>(ps[i]), per[i]});
          }
        }
      }
    }
  }
  return rep;
}

void write_csv(std::ostream& out, const Report& report) {
  for (const auto& [k, v] : report.provenance) out << "# " << k << ": " << v << '\n';
  out << "scheme,scenario,load,seed,metric,direction,tier,percentile,value_mbps\n";
  for (const auto& r : report.rows) {
    out << r.scheme << ',' << r.scenario << ',' << format_double(r.load) << ',' << r.seed << ',' << r.metric
        << ',' << r.direction << ',' << r.tier << ',' << r.percentile << ','
        << (r.value ? format_double(*r.value) : std::string("NA")) << '\n';
  }
}

void write_json(std::ostream& out, const Report& report) {
  json j;
  j["provenance"] = report.provenance;
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"scheme", r.scheme},
                    {"scenario", r.scenario},
                    {"load", r.load},
                    {"seed", r.seed},
                    {"metric", r.metric},
                    {"direction", r.direction},
                    {"tier", r.tier},
                    {"percentile", r.percentile},
                    {"value_mbps", r.value ? json(*r.value) : json(nullptr)}});
  }
  j["rows"] = rows;
  out << j.dump(1) << '\n';
}

Report load_json_report(std::istream& in) {
  Report rep;
  try {
    json j;
    in >> j;
    rep.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
    for (const auto& r : j.at("rows")) {
      ReportRow row;
      row.scheme = r.at("scheme").get<std::string>();
      row.scenario = r.at("scenario").get<std::string>();
      row.load = r.at("load").get<double>();
      row.seed = r.at("seed").get<std::string>();
      row.metric = r.at("metric").get<std::string>();
      row.direction = r.at("direction").get<std::string>();
      row.tier = r.at("tier").get<std::string>();
      row.percentile = r.at("percentile").get<int>();
      if (!r.at("value_mbps").is_null()) row.value = r.at("value_mbps").get<double>();
      rep.rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("report: ") + e.what());
  }
  return rep;
}

}  // namespace dyntdd
