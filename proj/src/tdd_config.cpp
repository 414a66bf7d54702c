#include "dyntdd/tdd_config.hpp"

#include <algorithm>
#include <charconv>

namespace dyntdd {

namespace {

int parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("bad TDD configuration count: '" + std::string(s) + "'");
  return v;
}

}  // namespace

TddConfig TddConfig::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ConfigError("TDD configuration must look like DL:UL, got '" + std::string(text) + "'");
  TddConfig c{parse_int(text.substr(0, colon)), parse_int(text.substr(colon + 1))};
  if (c.dl < 0 || c.ul < 0) throw ConfigError("negative TDD subframe count");
  return c;
}

std::string TddConfig::format() const { return std::to_string(dl) + ":" + std::to_string(ul); }

TddConfigSet TddConfigSet::build(TddSetKind kind, int f_dyn) {
  TddConfigSet s;
  s.kind_ = kind;
  int max_t = 0;
  switch (kind) {
    case TddSetKind::Rel12Homo:
      // LTE configurations 0-6 with special subframes counted as DL give
      // 6, 4, 2, 3, 2, 1, 5 UL subframes.
      max_t = 6;
      break;
    case TddSetKind::FutureHomo:
      max_t = kFrameLength - 1;
      break;
    case TddSetKind::Het:
      if (f_dyn < 1 || f_dyn > kFrameLength - 1)
        throw ConfigError("dynamic TDD portion must hold 1.." + std::to_string(kFrameLength - 1) +
                          " subframes, got " + std::to_string(f_dyn));
      s.budget_ = f_dyn;
      max_t = f_dyn;
      break;
  }
  for (int t = 1; t <= max_t; ++t) s.ul_counts_.push_back(t);
  return s;
}

std::vector<TddConfig> TddConfigSet::configs() const {
  std::vector<TddConfig> out;
  for (int t : ul_counts_) out.push_back({budget_ - t, t});
  return out;
}

bool TddConfigSet::contains(int t) const {
  return std::binary_search(ul_counts_.begin(), ul_counts_.end(), t);
}

TddSetKind parse_tdd_set(std::string_view text) {
  if (text == "rel12") return TddSetKind::Rel12Homo;
  if (text == "future") return TddSetKind::FutureHomo;
  if (text == "het") return TddSetKind::Het;
  throw ConfigError("unknown tdd_set '" + std::string(text) + "' (expected rel12, future or het)");
}

std::string_view to_string(TddSetKind kind) {
  switch (kind) {
    case TddSetKind::Rel12Homo: return "rel12";
    case TddSetKind::FutureHomo: return "future";
    case TddSetKind::Het: return "het";
  }
  return "?";
}

}  // namespace dyntdd
