#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <span>
#include <vector>

#include "dyntdd/association.hpp"

namespace dyntdd {

enum class Direction : int { Dl = 0, Ul = 1 };

inline constexpr int kDirections = 2;
inline constexpr int idx(Direction d) { return static_cast<int>(d); }
const char* to_string(Direction d);

inline constexpr std::int64_t kDefaultPacketBits = 4'000'000;  // 0.5 Mbyte
inline constexpr double kSubframeSeconds = 1e-3;

struct TrafficSource {
  double lambda_dl = 0.0;  // packets per second
  double lambda_ul = 0.0;
  std::int64_t packet_bits = kDefaultPacketBits;

  // Uplink rate is half the downlink rate.
  static TrafficSource uniform(double lambda_dl) { return {lambda_dl, lambda_dl / 2.0}; }
};

struct ArrivalEvent {
  std::int64_t subframe = 0;
  UeId ue = 0;
  Direction dir = Direction::Dl;
  std::int64_t bits = 0;

  bool operator==(const ArrivalEvent&) const = default;
};

/// Independent homogeneous Poisson processes per UE and direction, timestamped
/// to the subframe in which each arrival falls. Events are sorted by
/// (subframe, ue, direction).
std::vector<ArrivalEvent> generate_arrivals(std::span<const TrafficSource> sources,
                                            std::int64_t horizon_subframes, std::uint64_t seed);

void write_arrival_trace(std::ostream& out, std::span<const ArrivalEvent> events);
std::vector<ArrivalEvent> read_arrival_trace(std::istream& in);

struct Packet {
  std::int64_t bits = 0;
  std::int64_t remaining_bits = 0;
  std::int64_t arrival_subframe = 0;
};

struct CompletedPacket {
  std::int64_t bits = 0;
  std::int64_t arrival_subframe = 0;
  std::int64_t completion_subframe = 0;
};

struct DrainResult {
  std::int64_t drained_bits = 0;
  std::vector<CompletedPacket> completed;
};

// FIFO packet queue of one UE in one direction.
class PacketBuffer {
 public:
  void enqueue(std::int64_t bits, std::int64_t subframe);
  // Serves head-of-line packets; bits beyond the queued total are discarded.
  DrainResult drain(std::int64_t bits, std::int64_t subframe);

  std::int64_t total() const { return total_; }
  bool empty() const { return queue_.empty(); }
  const std::deque<Packet>& packets() const { return queue_; }
  bool check_invariants() const;

 private:
  std::deque<Packet> queue_;
  std::int64_t total_ = 0;
};

/// Per-UE average arrival rates (lambda) and instantaneous buffer levels
/// (omega, bits) in both directions.
struct TrafficState {
  std::vector<double> lambda_dl, lambda_ul;
  std::vector<std::int64_t> omega_dl, omega_ul;

  TrafficState() = default;
  explicit TrafficState(int num_ues)
      : lambda_dl(num_ues, 0.0), lambda_ul(num_ues, 0.0), omega_dl(num_ues, 0), omega_ul(num_ues, 0) {}

  static TrafficState uniform(int num_ues, double lambda_dl);

  int num_ues() const { return static_cast<int>(lambda_dl.size()); }
  double lambda(Direction d, UeId ue) const { return d == Direction::Dl ? lambda_dl[ue] : lambda_ul[ue]; }
  std::int64_t omega(Direction d, UeId ue) const { return d == Direction::Dl ? omega_dl[ue] : omega_ul[ue]; }

  double lambda_sum(Direction d, std::span<const UeId> ues) const {
    double s = 0.0;
    for (UeId q : ues) s += lambda(d, q);
    return s;
  }
  std::int64_t omega_sum(Direction d, std::span<const UeId> ues) const {
    std::int64_t s = 0;
    for (UeId q : ues) s += omega(d, q);
    return s;
  }
};

}  // namespace dyntdd
