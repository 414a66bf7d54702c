#include "dyntdd/traffic.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dyntdd/rng.hpp"

namespace dyntdd {

const char* to_string(Direction d) { return d == Direction::Dl ? "dl" : "ul"; }

std::vector<ArrivalEvent> generate_arrivals(std::span<const TrafficSource> sources,
                                            std::int64_t horizon_subframes, std::uint64_t seed) {
  std::vector<ArrivalEvent> events;
  const double horizon_s = static_cast<double>(horizon_subframes) * kSubframeSeconds;
  for (std::size_t ue = 0; ue < sources.size(); ++ue) {
    for (Direction dir : {Direction::Dl, Direction::Ul}) {
      const double lambda = dir == Direction::Dl ? sources[ue].lambda_dl : sources[ue].lambda_ul;
      if (lambda <= 0.0) continue;
      Rng rng = make_stream(seed, Stream::Traffic, 2 * ue + idx(dir));
      std::exponential_distribution<double> gap(lambda);
      for (double t = gap(rng); t < horizon_s; t += gap(rng)) {
        const auto sf = static_cast<std::int64_t>(t / kSubframeSeconds);
        events.push_back({std::min(sf, horizon_subframes - 1), static_cast<UeId>(ue), dir,
                          sources[ue].packet_bits});
      }
    }
  }
  std::sort(events.begin(), events.end(), [](const ArrivalEvent& a, const ArrivalEvent& b) {
    if (a.subframe != b.subframe) return a.subframe < b.subframe;
    if (a.ue != b.ue) return a.ue < b.ue;
    return idx(a.dir) < idx(b.dir);
  });
  return events;
}

void write_arrival_trace(std::ostream& out, std::span<const ArrivalEvent> events) {
  out << "subframe,ue,direction,bits\n";
  for (const auto& e : events)
    out << e.subframe << ',' << e.ue << ',' << to_string(e.dir) << ',' << e.bits << '\n';
}

std::vector<ArrivalEvent> read_arrival_trace(std::istream& in) {
  std::vector<ArrivalEvent> events;
  std::string line;
  if (!std::getline(in, line) || line != "subframe,ue,direction,bits")
    throw std::runtime_error("arrival trace: missing header");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string sf, ue, dir, bits;
    if (!std::getline(ls, sf, ',') || !std::getline(ls, ue, ',') || !std::getline(ls, dir, ',') ||
        !std::getline(ls, bits))
      throw std::runtime_error("arrival trace: malformed line " + std::to_string(lineno));
    ArrivalEvent e;
    e.subframe = std::stoll(sf);
    e.ue = std::stoi(ue);
    if (dir == "dl")
      e.dir = Direction::Dl;
    else if (dir == "ul")
      e.dir = Direction::Ul;
    else
      throw std::runtime_error("arrival trace: bad direction on line " + std::to_string(lineno));
    e.bits = std::stoll(bits);
    events.push_back(e);
  }
  return events;
}

void PacketBuffer::enqueue(std::int64_t bits, std::int64_t subframe) {
  if (bits <= 0) throw std::invalid_argument("packet size must be positive");
  queue_.push_back({bits, bits, subframe});
  total_ += bits;
}

DrainResult PacketBuffer::drain(std::int64_t bits, std::int64_t subframe) {
  DrainResult out;
  while (bits > 0 && !queue_.empty()) {
    Packet& head = queue_.front();
    const std::int64_t take = std::min(bits, head.remaining_bits);
    head.remaining_bits -= take;
    bits -= take;
    total_ -= take;
    out.drained_bits += take;
    if (head.remaining_bits == 0) {
      out.completed.push_back({head.bits, head.arrival_subframe, subframe});
      queue_.pop_front();
    }
  }
  return out;
}

bool PacketBuffer::check_invariants() const {
  std::int64_t sum = 0;
  for (const auto& p : queue_) {
    if (p.remaining_bits <= 0 || p.remaining_bits > p.bits) return false;
    sum += p.remaining_bits;
  }
  return sum == total_;
}

TrafficState TrafficState::uniform(int num_ues, double lambda_dl) {
  TrafficState s(num_ues);
  std::fill(s.lambda_dl.begin(), s.lambda_dl.end(), lambda_dl);
  std::fill(s.lambda_ul.begin(), s.lambda_ul.end(), lambda_dl / 2.0);
  return s;
}

}  // namespace dyntdd
