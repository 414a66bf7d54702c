#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dyntdd {

inline constexpr int kFrameLength = 10;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A DL/UL split identified by its subframe counts, e.g. "7:3".
struct TddConfig {
  int dl = 0;
  int ul = 0;

  static TddConfig parse(std::string_view text);
  std::string format() const;
  bool operator==(const TddConfig&) const = default;
};

inline int ul_count(const TddConfig& c) { return c.ul; }

enum class TddSetKind { Rel12Homo, FutureHomo, Het };

/// The admissible UL subframe counts t. Homogeneous sets cover the whole
/// frame; the Het set covers the dynamic portion of a small-cell frame.
class TddConfigSet {
 public:
  static TddConfigSet build(TddSetKind kind, int f_dyn = 0);

  TddSetKind kind() const { return kind_; }
  int frame_len() const { return frame_len_; }
  // Subframe budget shared by DL and UL: T for homogeneous sets, f_dyn for Het.
  int budget() const { return budget_; }
  const std::vector<int>& ul_counts() const { return ul_counts_; }
  std::vector<TddConfig> configs() const;
  bool contains(int t) const;

 private:
  TddSetKind kind_ = TddSetKind::Rel12Homo;
  int frame_len_ = kFrameLength;
  int budget_ = kFrameLength;
  std::vector<int> ul_counts_;
};

// Accepts "rel12", "future" and "het".
TddSetKind parse_tdd_set(std::string_view text);
std::string_view to_string(TddSetKind kind);

}  // namespace dyntdd
