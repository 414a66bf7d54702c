#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dyntdd/association.hpp"

namespace dyntdd {

enum class Scenario { HomSCN, HetNet };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view text);

class LayoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Radio and dropping parameters. Defaults follow common 3GPP small-cell
// evaluation assumptions.
struct RadioConfig {
  double isd_m = 500.0;
  double macro_tx_dbm = 46.0;
  double pico_tx_dbm = 30.0;
  double ue_max_tx_dbm = 23.0;
  double macro_antenna_dbi = 14.0;
  double pico_antenna_dbi = 5.0;
  double ue_antenna_dbi = 0.0;
  double bs_noise_figure_db = 5.0;
  double ue_noise_figure_db = 9.0;
  double noise_psd_dbm_hz = -174.0;
  double bandwidth_hz = 10e6;
  double macro_shadowing_db = 10.0;
  double pico_shadowing_db = 6.0;
  double sbs_sbs_los_bonus_db = 5.0;
  double sbs_sbs_los_range_m = 100.0;
  double min_sbs_mbs_m = 75.0;
  double min_sbs_sbs_m = 40.0;
  double min_ue_pico_m = 10.0;
  double min_ue_macro_m = 35.0;
  double pico_coverage_m = 40.0;
  int smallcells_per_macro = 4;
  int ues_per_smallcell_homscn = 10;
  int ues_per_macro_hetnet = 10;
  int ues_per_smallcell_hetnet = 5;

  double bs_noise_dbm() const;
  double ue_noise_dbm() const;
};

/// Seven-site hexagonal cluster with wrap-around. Sites sit on a triangular
/// lattice with spacing `isd`; the cluster tiles the plane via six translation
/// vectors of length sqrt(7)*isd.
class HexWrap {
 public:
  explicit HexWrap(double isd_m);

  double isd() const { return isd_; }
  const std::array<Eigen::Vector2d, 7>& sites() const { return sites_; }
  // offsets()[0] is the zero vector.
  const std::array<Eigen::Vector2d, 7>& offsets() const { return offsets_; }

  double distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b) const;
  bool in_site_hex(const Eigen::Vector2d& p, int site) const;
  bool in_region(const Eigen::Vector2d& p) const;

 private:
  double isd_;
  std::array<Eigen::Vector2d, 7> sites_;
  std::array<Eigen::Vector2d, 7> offsets_;
};

struct MacroCell {
  int site = 0;
  double azimuth_deg = 0.0;
  double tx_power_dbm = 46.0;
};

struct SmallCell {
  Eigen::Vector2d pos = Eigen::Vector2d::Zero();
  double tx_power_dbm = 30.0;
  int macro_area = -1;
};

struct Terminal {
  Eigen::Vector2d pos = Eigen::Vector2d::Zero();
  double max_tx_power_dbm = 23.0;
};

// Cell ids are global: [0, M) macrocells then [M, M+N) small cells.
struct NetworkLayout {
  Scenario scenario = Scenario::HomSCN;
  std::uint64_t seed = 0;
  double isd_m = 500.0;
  std::vector<Eigen::Vector2d> sites;
  std::vector<MacroCell> macrocells;
  std::vector<SmallCell> smallcells;
  std::vector<Terminal> ues;

  int num_macro() const { return static_cast<int>(macrocells.size()); }
  int num_small() const { return static_cast<int>(smallcells.size()); }
  int num_cells() const { return num_macro() + num_small(); }
  int num_ues() const { return static_cast<int>(ues.size()); }
  bool is_macro(CellId c) const { return c < num_macro(); }

  Eigen::Vector2d cell_position(CellId c) const;
  double cell_tx_power_dbm(CellId c) const;
  Eigen::VectorXd tx_power_dbm() const;
};

NetworkLayout generate_layout(Scenario scenario, std::uint64_t seed,
                              const RadioConfig& radio = {});

void write_layout(std::ostream& out, const NetworkLayout& layout);
NetworkLayout read_layout(std::istream& in);

enum class PathLossKind { MacroToUe, PicoToUe, BsToBs, UeToUe };

/// Distance-dependent path loss in dB. Distances below 1 m are clamped.
/// BsToBs is the small-cell to small-cell law, including the short-range
/// line-of-sight bonus.
double path_loss(PathLossKind kind, double distance_m, const RadioConfig& radio = {});

// Pairwise gains in dB: -(path loss) - shadowing + antenna gains.
template <typename Scalar>
struct BasicLinkGainTable {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix bs_to_ue;  // cells x ues
  Matrix ue_to_bs;  // ues x cells
  Matrix bs_to_bs;  // tx cell x rx cell
  Matrix ue_to_ue;  // tx ue x rx ue
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> antenna_dbi;  // per cell

  /// Path loss plus shadowing between two base stations, antenna gains
  /// removed. This is the coupling-loss metric used for clustering and
  /// BS-oriented interference cancellation.
  Scalar bs_path_loss(CellId from, CellId to) const {
    return -bs_to_bs(from, to) + antenna_dbi(from) + antenna_dbi(to);
  }

  Matrix bs_path_loss_matrix() const {
    Matrix pl = (-bs_to_bs).colwise() + antenna_dbi;
    pl.rowwise() += antenna_dbi.transpose();
    return pl;
  }
};

using LinkGainTable = BasicLinkGainTable<double>;

// Self-links carry this gain so every entry stays finite.
inline constexpr double kNoLinkDb = -300.0;

LinkGainTable compute_link_gains(const NetworkLayout& layout, std::uint64_t seed,
                                 const RadioConfig& radio = {});

template <typename Derived>
auto db_to_linear(const Eigen::ArrayBase<Derived>& db) {
  using S = typename Derived::Scalar;
  return (db * (S(0.1) * std::log(S(10)))).exp();
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

inline double rsrp(const LinkGainTable& gains, const NetworkLayout& layout, CellId cell, UeId ue) {
  return layout.cell_tx_power_dbm(cell) + gains.bs_to_ue(cell, ue);
}

/// RSRP of every (cell, UE) pair in dBm.
Eigen::MatrixXd rsrp_matrix(const LinkGainTable& gains, const NetworkLayout& layout);

/// Wideband DL SINR in dB with every cell transmitting.
double wideband_dl_sinr(const LinkGainTable& gains, const NetworkLayout& layout, CellId cell,
                        UeId ue, const RadioConfig& radio = {});

/// Best-RSRP association; ties go to the lower cell id.
Association associate_best_rsrp(const Eigen::MatrixXd& rsrp_dbm, int num_macro);
Association associate_best_rsrp(const LinkGainTable& gains, const NetworkLayout& layout);

}  // namespace dyntdd
