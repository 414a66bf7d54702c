#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dyntdd/harness.hpp"
#include "dyntdd/hetnet_planner.hpp"
#include "dyntdd/topology.hpp"
#include "oracles/selftest.hpp"

namespace fs = std::filesystem;
using namespace dyntdd;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  if (text.find(',') == std::string::npos && text.find('-') == std::string::npos) {
    const auto n = std::stoull(text);
    for (std::uint64_t s = 1; s <= n; ++s) seeds.push_back(s);
    return seeds;
  }
  for (const auto& part : split(text, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(std::stoull(part));
    } else {
      for (auto s = std::stoull(part.substr(0, dash)); s <= std::stoull(part.substr(dash + 1)); ++s)
        seeds.push_back(s);
    }
  }
  return seeds;
}

void print_summary(const ExperimentResult& r) {
  const double ps[] = {5.0, 50.0, 95.0};
  const bool het = r.config.scenario == Scenario::HetNet;
  std::printf("%-6s %-6s %-4s %-6s %10s %10s %10s\n", "scheme", "load", "dir", "tier", "p5", "p50", "p95");
  for (const auto& s : r.schemes) {
    for (double load : r.config.loads) {
      for (Direction d : {Direction::Dl, Direction::Ul}) {
        for (TierFilter t : het ? std::vector<TierFilter>{TierFilter::Macro, TierFilter::Small}
                                : std::vector<TierFilter>{TierFilter::All}) {
          const auto v = upt_percentiles(r.pooled(s, load, d, t), ps);
          std::printf("%-6s %-6g %-4s %-6s", s.c_str(), load, to_string(d), to_string(t));
          for (const auto& x : v) {
            if (x)
              std::printf(" %10.3f", *x);
            else
              std::printf(" %10s", "NA");
          }
          std::printf("\n");
        }
      }
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic TDD system-level simulator"};
  app.require_subcommand(1);

  std::string scenario = "homscn";
  std::string schemes_arg;
  std::string loads_arg;
  std::string seeds_arg = "20";
  std::int64_t horizon = 60'000;
  std::string out_dir = "results";
  std::string config_path;
  std::vector<std::string> overrides;
  bool monitor_ic = false;
  int workers = 0;

  auto* sim = app.add_subcommand("simulate", "run schemes over loads and seeds");
  sim->add_option("--scenario", scenario, "homscn or hetnet");
  sim->add_option("--schemes", schemes_arg, "comma-separated scheme ids");
  sim->add_option("--loads", loads_arg, "comma-separated DL packet rates per UE");
  sim->add_option("--seeds", seeds_arg, "count, list or range (e.g. 20, 1,4,9 or 3-7)");
  sim->add_option("--horizon", horizon, "subframes per drop");
  sim->add_option("--out", out_dir, "output directory");
  sim->add_option("--override", overrides, "parameter override key=value");
  sim->add_option("--config", config_path, "JSON experiment configuration");
  sim->add_flag("--monitor-ic", monitor_ic, "check UL SINR ordering across IC modes");
  sim->add_option("--workers", workers, "worker threads (default: DYNTDD_WORKERS or all cores)");

  std::uint64_t seed = 1;
  double load = 0.5;
  auto* plan_cmd = app.add_subcommand("plan", "run the association and ABS planner alone");
  plan_cmd->add_option("--scenario", scenario, "must be hetnet");
  plan_cmd->add_option("--seed", seed, "layout seed");
  plan_cmd->add_option("--load", load, "DL packet rate per UE");
  plan_cmd->add_option("--override", overrides, "alpha=..., y=...");
  plan_cmd->add_option("--out", out_dir, "directory for plan CSV files");

  std::string layout_out;
  auto* layout_cmd = app.add_subcommand("layout", "dump a network layout");
  layout_cmd->add_option("--scenario", scenario, "homscn or hetnet");
  layout_cmd->add_option("--seed", seed, "layout seed");
  layout_cmd->add_option("--out", layout_out, "output file (default stdout)");

  int trials = 1000;
  std::uint64_t selftest_seed = 12345;
  auto* self = app.add_subcommand("selftest", "compare algorithms against independent oracles");
  self->add_option("--trials", trials, "random instances per check");
  self->add_option("--seed", selftest_seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      ExperimentConfig cfg;
      std::vector<std::string> schemes;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::runtime_error("cannot open " + config_path);
        cfg = load_experiment_config(in, &schemes);
      } else {
        cfg.scenario = parse_scenario(scenario);
        cfg.loads = ExperimentConfig::default_loads(cfg.scenario);
        cfg.seeds = parse_seeds(seeds_arg);
        cfg.horizon = horizon;
      }
      if (sim->count("--scenario")) cfg.scenario = parse_scenario(scenario);
      if (!schemes_arg.empty()) schemes = split(schemes_arg, ',');
      if (!loads_arg.empty()) {
        cfg.loads.clear();
        for (const auto& l : split(loads_arg, ',')) cfg.loads.push_back(std::stod(l));
      }
      if (sim->count("--seeds")) cfg.seeds = parse_seeds(seeds_arg);
      if (sim->count("--horizon")) cfg.horizon = horizon;
      for (const auto& o : overrides) cfg.set_override(o);
      cfg.monitor_ic = cfg.monitor_ic || monitor_ic;
      cfg.workers = workers;
      if (schemes.empty()) {
        for (const auto& s : scheme_registry())
          if (s.scenario == cfg.scenario) schemes.push_back(s.id);
      }

      const ExperimentResult result = run_experiment(cfg, schemes);
      const Report report = build_report(result);
      fs::create_directories(out_dir);
      std::ofstream csv(fs::path(out_dir) / "stats.csv");
      write_csv(csv, report);
      std::ofstream js(fs::path(out_dir) / "report.json");
      write_json(js, report);
      if (!csv || !js) throw std::runtime_error("cannot write to " + out_dir);
      print_summary(result);
      return 0;
    }
    if (*plan_cmd) {
      if (parse_scenario(scenario) != Scenario::HetNet) throw ConfigError("planning needs --scenario hetnet");
      ExperimentConfig cfg;
      cfg.scenario = Scenario::HetNet;
      for (const auto& o : overrides) cfg.set_override(o);
      const DropConfig dc = cfg.drop_config(find_scheme("D"), load);
      const NetworkLayout layout = generate_layout(Scenario::HetNet, seed, dc.radio);
      const LinkGainTable gains = compute_link_gains(layout, seed, dc.radio);
      const PlannerInput in = make_planner_input(layout, gains, TrafficState::uniform(layout.num_ues(), load),
                                                 dc.alpha_dl, dc.reb_db, dc.radio);
      const PlanOutcome out = plan(in);
      std::printf("%3s %6s %6s %6s %14s %9s\n", "A", "f_m_dl", "f_m_ul", "f_dyn", "objective", "offloaded");
      for (const auto& c : out.candidates) {
        if (c.feasible)
          std::printf("%3d %6d %6d %6d %14.6g %9zu\n", c.plan.A, c.plan.f_m_dl, c.plan.f_m_ul, c.plan.f_s_dyn,
                      c.objective, c.admissions.size());
        else
          std::printf("%3d %6d %6d %6d %14s %9s\n", c.plan.A, c.plan.f_m_dl, c.plan.f_m_ul, c.plan.f_s_dyn,
                      "infeasible", "-");
      }
      std::printf("A_opt = %d, admissibility checks %lld (bound %lld)\n", out.a_opt,
                  static_cast<long long>(out.admissibility_checks), static_cast<long long>(out.check_bound));
      fs::create_directories(out_dir);
      std::ofstream sweep(fs::path(out_dir) / "plan_sweep.csv");
      std::ofstream assoc(fs::path(out_dir) / "plan_association.csv");
      write_plan_report(sweep, assoc, out);
      return 0;
    }
    if (*layout_cmd) {
      const NetworkLayout layout = generate_layout(parse_scenario(scenario), seed);
      if (layout_out.empty()) {
        write_layout(std::cout, layout);
      } else {
        std::ofstream out(layout_out);
        write_layout(out, layout);
      }
      return 0;
    }
    if (*self) return oracles::run_selftest(std::cout, trials, selftest_seed) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
