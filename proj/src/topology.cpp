#include "dyntdd/topology.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dyntdd/rng.hpp"

namespace dyntdd {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr std::array<double, 3> kSectorAzimuthDeg{30.0, 150.0, 270.0};

Eigen::Vector2d rotate(const Eigen::Vector2d& v, double deg) {
  const double c = std::cos(deg * kDeg), s = std::sin(deg * kDeg);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

double wrap_angle_deg(double a) {
  a = std::fmod(a + 180.0, 360.0);
  if (a < 0) a += 360.0;
  return a - 180.0;
}

class Dropper {
 public:
  Dropper(const HexWrap& hex, std::uint64_t seed)
      : hex_(hex), rng_(make_stream(seed, Stream::Layout)) {}

  Eigen::Vector2d uniform_in_sector(int site, double azimuth_deg) {
    const double r = hex_.isd() / std::sqrt(3.0);
    std::uniform_real_distribution<double> u(-r, r);
    const Eigen::Vector2d& s = hex_.sites()[site];
    for (;;) {
      Eigen::Vector2d d{u(rng_), u(rng_)};
      if (!hex_.in_site_hex(s + d, site)) continue;
      double ang = std::atan2(d.y(), d.x()) / kDeg;
      if (std::abs(wrap_angle_deg(ang - azimuth_deg)) <= 60.0) return s + d;
    }
  }

  // Uniform in the annulus [rmin, rmax] around centre.
  Eigen::Vector2d uniform_in_annulus(const Eigen::Vector2d& centre, double rmin, double rmax) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double r = std::sqrt(rmin * rmin + (rmax * rmax - rmin * rmin) * u01(rng_));
    const double th = 2.0 * std::numbers::pi * u01(rng_);
    return centre + Eigen::Vector2d{r * std::cos(th), r * std::sin(th)};
  }

  double min_distance(const Eigen::Vector2d& p, const std::vector<Eigen::Vector2d>& others) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& o : others) best = std::min(best, hex_.distance(p, o));
    return best;
  }

 private:
  const HexWrap& hex_;
  Rng rng_;
};

constexpr int kMaxDropAttempts = 20000;

}  // namespace

std::string_view to_string(Scenario s) { return s == Scenario::HomSCN ? "homscn" : "hetnet"; }

Scenario parse_scenario(std::string_view text) {
  if (text == "homscn" || text == "scenario3" || text == "3") return Scenario::HomSCN;
  if (text == "hetnet" || text == "scenario6" || text == "6") return Scenario::HetNet;
  throw std::invalid_argument("unknown scenario: " + std::string(text));
}

double RadioConfig::bs_noise_dbm() const {
  return noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz) + bs_noise_figure_db;
}

double RadioConfig::ue_noise_dbm() const {
  return noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz) + ue_noise_figure_db;
}

HexWrap::HexWrap(double isd_m) : isd_(isd_m) {
  sites_[0] = Eigen::Vector2d::Zero();
  for (int k = 0; k < 6; ++k) sites_[k + 1] = rotate({isd_m, 0.0}, 60.0 * k);
  const Eigen::Vector2d t{2.5 * isd_m, std::sqrt(3.0) / 2.0 * isd_m};
  offsets_[0] = Eigen::Vector2d::Zero();
  for (int k = 0; k < 6; ++k) offsets_[k + 1] = rotate(t, 60.0 * k);
}

double HexWrap::distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& o : offsets_) best = std::min(best, (a - b - o).norm());
  return best;
}

bool HexWrap::in_site_hex(const Eigen::Vector2d& p, int site) const {
  const Eigen::Vector2d d = p - sites_[site];
  const double half = isd_ / 2.0 + 1e-9;
  for (double th : {0.0, 60.0, 120.0}) {
    if (std::abs(d.x() * std::cos(th * kDeg) + d.y() * std::sin(th * kDeg)) > half) return false;
  }
  return true;
}

bool HexWrap::in_region(const Eigen::Vector2d& p) const {
  for (int s = 0; s < 7; ++s)
    if (in_site_hex(p, s)) return true;
  return false;
}

Eigen::Vector2d NetworkLayout::cell_position(CellId c) const {
  return is_macro(c) ? sites[macrocells[c].site] : smallcells[c - num_macro()].pos;
}

double NetworkLayout::cell_tx_power_dbm(CellId c) const {
  return is_macro(c) ? macrocells[c].tx_power_dbm : smallcells[c - num_macro()].tx_power_dbm;
}

Eigen::VectorXd NetworkLayout::tx_power_dbm() const {
  Eigen::VectorXd p(num_cells());
  for (CellId c = 0; c < num_cells(); ++c) p(c) = cell_tx_power_dbm(c);
  return p;
}

NetworkLayout generate_layout(Scenario scenario, std::uint64_t seed, const RadioConfig& radio) {
  HexWrap hex(radio.isd_m);
  Dropper drop(hex, seed);

  NetworkLayout layout;
  layout.scenario = scenario;
  layout.seed = seed;
  layout.isd_m = radio.isd_m;
  layout.sites.assign(hex.sites().begin(), hex.sites().end());

  const int macro_areas = 7 * 3;
  if (scenario == Scenario::HetNet) {
    for (int a = 0; a < macro_areas; ++a)
      layout.macrocells.push_back({a / 3, kSectorAzimuthDeg[a % 3], radio.macro_tx_dbm});
  }

  std::vector<Eigen::Vector2d> sbs;
  for (int a = 0; a < macro_areas; ++a) {
    for (int k = 0; k < radio.smallcells_per_macro; ++k) {
      const char* violated = nullptr;
      bool placed = false;
      for (int attempt = 0; attempt < kMaxDropAttempts && !placed; ++attempt) {
        Eigen::Vector2d p = drop.uniform_in_sector(a / 3, kSectorAzimuthDeg[a % 3]);
        if (drop.min_distance(p, layout.sites) < radio.min_sbs_mbs_m) {
          violated = "minimum SBS-to-MBS distance";
          continue;
        }
        if (drop.min_distance(p, sbs) < radio.min_sbs_sbs_m) {
          violated = "minimum inter-SBS distance";
          continue;
        }
        sbs.push_back(p);
        layout.smallcells.push_back({p, radio.pico_tx_dbm, a});
        placed = true;
      }
      if (!placed)
        throw LayoutError(std::string("small cell placement failed: ") +
                          (violated ? violated : "no candidate position") + " in macro area " +
                          std::to_string(a));
    }
  }

  auto ue_ok = [&](const Eigen::Vector2d& p) {
    return hex.in_region(p) && drop.min_distance(p, sbs) >= radio.min_ue_pico_m &&
           drop.min_distance(p, layout.sites) >= radio.min_ue_macro_m;
  };
  auto place_ue = [&](auto&& sampler, const char* what) {
    for (int attempt = 0; attempt < kMaxDropAttempts; ++attempt) {
      Eigen::Vector2d p = sampler();
      if (ue_ok(p)) {
        layout.ues.push_back({p, radio.ue_max_tx_dbm});
        return;
      }
    }
    throw LayoutError(std::string("UE placement failed: ") + what);
  };

  if (scenario == Scenario::HetNet) {
    for (int a = 0; a < macro_areas; ++a)
      for (int k = 0; k < radio.ues_per_macro_hetnet; ++k)
        place_ue([&] { return drop.uniform_in_sector(a / 3, kSectorAzimuthDeg[a % 3]); },
                 "minimum UE-to-BS distance in macro area");
  }
  const int per_small = scenario == Scenario::HetNet ? radio.ues_per_smallcell_hetnet
                                                     : radio.ues_per_smallcell_homscn;
  for (const auto& sc : layout.smallcells)
    for (int k = 0; k < per_small; ++k)
      place_ue([&] { return drop.uniform_in_annulus(sc.pos, radio.min_ue_pico_m, radio.pico_coverage_m); },
               "no position inside small-cell coverage");
  return layout;
}

void write_layout(std::ostream& out, const NetworkLayout& layout) {
  std::ostringstream os;
  os.precision(17);
  os << "# dyntdd-layout 1\n";
  os << "# scenario " << to_string(layout.scenario) << " seed " << layout.seed << " isd "
     << layout.isd_m << "\n";
  os << "# records: kind id x y [extra]\n";
  for (std::size_t i = 0; i < layout.sites.size(); ++i)
    os << "site " << i << ' ' << layout.sites[i].x() << ' ' << layout.sites[i].y() << '\n';
  for (int m = 0; m < layout.num_macro(); ++m) {
    const auto& mc = layout.macrocells[m];
    const auto& p = layout.sites[mc.site];
    os << "macro " << m << ' ' << p.x() << ' ' << p.y() << ' ' << mc.site << ' ' << mc.azimuth_deg
       << ' ' << mc.tx_power_dbm << '\n';
  }
  for (int n = 0; n < layout.num_small(); ++n) {
    const auto& sc = layout.smallcells[n];
    os << "small " << n << ' ' << sc.pos.x() << ' ' << sc.pos.y() << ' ' << sc.tx_power_dbm << ' '
       << sc.macro_area << '\n';
  }
  for (int q = 0; q < layout.num_ues(); ++q) {
    const auto& ue = layout.ues[q];
    os << "ue " << q << ' ' << ue.pos.x() << ' ' << ue.pos.y() << ' ' << ue.max_tx_power_dbm << '\n';
  }
  out << os.str();
}

NetworkLayout read_layout(std::istream& in) {
  NetworkLayout layout;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw LayoutError("layout line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "#") {
      std::string key;
      ls >> key;
      if (key == "scenario") {
        std::string sc, k1, k2;
        double isd = 0;
        ls >> sc >> k1 >> layout.seed >> k2 >> isd;
        if (!ls || k1 != "seed" || k2 != "isd") fail("malformed header");
        layout.scenario = parse_scenario(sc);
        layout.isd_m = isd;
      }
      continue;
    }
    std::size_t id = 0;
    double x = 0, y = 0;
    ls >> id >> x >> y;
    if (!ls) fail("malformed record");
    if (kind == "site") {
      if (id != layout.sites.size()) fail("non-sequential id");
      layout.sites.emplace_back(x, y);
    } else if (kind == "macro") {
      MacroCell mc;
      ls >> mc.site >> mc.azimuth_deg >> mc.tx_power_dbm;
      if (!ls || id != layout.macrocells.size()) fail("malformed macro record");
      layout.macrocells.push_back(mc);
    } else if (kind == "small") {
      SmallCell sc;
      sc.pos = {x, y};
      ls >> sc.tx_power_dbm >> sc.macro_area;
      if (!ls || id != layout.smallcells.size()) fail("malformed small record");
      layout.smallcells.push_back(sc);
    } else if (kind == "ue") {
      Terminal ue;
      ue.pos = {x, y};
      ls >> ue.max_tx_power_dbm;
      if (!ls || id != layout.ues.size()) fail("malformed ue record");
      layout.ues.push_back(ue);
    } else {
      fail("unknown record kind '" + kind + "'");
    }
  }
  return layout;
}

double path_loss(PathLossKind kind, double distance_m, const RadioConfig& radio) {
  const double d_km = std::max(distance_m, 1.0) / 1000.0;
  switch (kind) {
    case PathLossKind::MacroToUe:
      return 128.1 + 37.6 * std::log10(d_km);
    case PathLossKind::PicoToUe:
    case PathLossKind::UeToUe:
      return 140.7 + 36.7 * std::log10(d_km);
    case PathLossKind::BsToBs: {
      double pl = 140.7 + 36.7 * std::log10(d_km);
      if (std::max(distance_m, 1.0) < radio.sbs_sbs_los_range_m) pl -= radio.sbs_sbs_los_bonus_db;
      return pl;
    }
  }
  return 0.0;
}

LinkGainTable compute_link_gains(const NetworkLayout& layout, std::uint64_t seed,
                                 const RadioConfig& radio) {
  const int B = layout.num_cells();
  const int Q = layout.num_ues();
  HexWrap hex(layout.isd_m);
  Rng rng = make_stream(seed, Stream::Shadowing);
  std::normal_distribution<double> z(0.0, 1.0);

  LinkGainTable g;
  g.antenna_dbi.resize(B);
  for (CellId c = 0; c < B; ++c)
    g.antenna_dbi(c) = layout.is_macro(c) ? radio.macro_antenna_dbi : radio.pico_antenna_dbi;

  g.bs_to_ue.resize(B, Q);
  for (CellId b = 0; b < B; ++b) {
    const bool macro = layout.is_macro(b);
    const Eigen::Vector2d pb = layout.cell_position(b);
    const double sigma = macro ? radio.macro_shadowing_db : radio.pico_shadowing_db;
    const auto kind = macro ? PathLossKind::MacroToUe : PathLossKind::PicoToUe;
    for (UeId q = 0; q < Q; ++q) {
      const double d = hex.distance(pb, layout.ues[q].pos);
      g.bs_to_ue(b, q) =
          -path_loss(kind, d, radio) - sigma * z(rng) + g.antenna_dbi(b) + radio.ue_antenna_dbi;
    }
  }
  g.ue_to_bs = g.bs_to_ue.transpose();

  g.bs_to_bs.setConstant(B, B, kNoLinkDb);
  for (CellId i = 0; i < B; ++i) {
    for (CellId j = i + 1; j < B; ++j) {
      const bool mi = layout.is_macro(i), mj = layout.is_macro(j);
      const double d = hex.distance(layout.cell_position(i), layout.cell_position(j));
      PathLossKind kind = PathLossKind::BsToBs;
      if (mi && mj)
        kind = PathLossKind::MacroToUe;
      else if (mi || mj)
        kind = PathLossKind::PicoToUe;
      const double sigma = (mi || mj) ? radio.macro_shadowing_db : radio.pico_shadowing_db;
      const double gain =
          -path_loss(kind, d, radio) - sigma * z(rng) + g.antenna_dbi(i) + g.antenna_dbi(j);
      g.bs_to_bs(i, j) = gain;
      g.bs_to_bs(j, i) = gain;
    }
  }

  g.ue_to_ue.setConstant(Q, Q, kNoLinkDb);
  for (UeId i = 0; i < Q; ++i) {
    for (UeId j = i + 1; j < Q; ++j) {
      const double d = hex.distance(layout.ues[i].pos, layout.ues[j].pos);
      const double gain = -path_loss(PathLossKind::UeToUe, d, radio) -
                          radio.pico_shadowing_db * z(rng) + 2.0 * radio.ue_antenna_dbi;
      g.ue_to_ue(i, j) = gain;
      g.ue_to_ue(j, i) = gain;
    }
  }
  return g;
}

Eigen::MatrixXd rsrp_matrix(const LinkGainTable& gains, const NetworkLayout& layout) {
  return gains.bs_to_ue.colwise() + layout.tx_power_dbm();
}

double wideband_dl_sinr(const LinkGainTable& gains, const NetworkLayout& layout, CellId cell,
                        UeId ue, const RadioConfig& radio) {
  const Eigen::ArrayXd rx_dbm = (gains.bs_to_ue.col(ue) + layout.tx_power_dbm()).array();
  const Eigen::ArrayXd rx_mw = db_to_linear(rx_dbm);
  const double signal = rx_mw(cell);
  const double interference = rx_mw.sum() - signal;
  return linear_to_db(signal / (interference + db_to_linear(radio.ue_noise_dbm())));
}

Association associate_best_rsrp(const Eigen::MatrixXd& rsrp_dbm, int num_macro) {
  const int B = static_cast<int>(rsrp_dbm.rows());
  const int Q = static_cast<int>(rsrp_dbm.cols());
  Association assoc(num_macro, B - num_macro, Q);
  for (UeId q = 0; q < Q; ++q) {
    CellId best = 0;
    for (CellId c = 1; c < B; ++c)
      if (rsrp_dbm(c, q) > rsrp_dbm(best, q)) best = c;
    assoc.assign(q, best);
  }
  return assoc;
}

Association associate_best_rsrp(const LinkGainTable& gains, const NetworkLayout& layout) {
  return associate_best_rsrp(rsrp_matrix(gains, layout), layout.num_macro());
}

}  // namespace dyntdd
