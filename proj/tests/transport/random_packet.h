#ifndef TESTS_TRANSPORT_RANDOM_PACKET_H_
#define TESTS_TRANSPORT_RANDOM_PACKET_H_

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "mprtc/transport/wire.h"

namespace mprtc {
namespace test {

// Valid packets with every field drawn over its full wire range.
class RandomPacketGenerator {
 public:
  explicit RandomPacketGenerator(uint64_t seed) : rng_(seed) {}

  Packet Next() {
    Packet p;
    p.packet_number = U64();
    const int frames = Uniform(0, 4);
    for (int i = 0; i < frames; ++i) {
      switch (Uniform(0, 2)) {
        case 0:
          p.frames.emplace_back(Stream());
          break;
        case 1:
          p.frames.emplace_back(Ack());
          break;
        default:
          p.frames.emplace_back(StopWaitingFrame{U64()});
          break;
      }
    }
    if (Uniform(0, 3) == 0) p.padding = static_cast<size_t>(Uniform(1, 300));
    return p;
  }

  StreamFrame Stream() {
    StreamFrame s;
    s.stream_offset = U64();
    s.frame_index = static_cast<uint32_t>(U64());
    s.capture_ts = Timestamp::Micros(static_cast<int64_t>(
        U64() & static_cast<uint64_t>(std::numeric_limits<int64_t>::max())));
    s.total_segments = static_cast<uint16_t>(Uniform(1, 0xFFFF));
    s.segment_index = static_cast<uint16_t>(Uniform(0, s.total_segments - 1));
    s.key_frame = Uniform(0, 1) == 1;
    const int len = Uniform(0, 3) == 0 ? Uniform(0, 4000) : Uniform(0, 64);
    s.payload.resize(static_cast<size_t>(len));
    for (auto& b : s.payload) b = static_cast<uint8_t>(Uniform(0, 255));
    return s;
  }

  AckFrame Ack() {
    AckFrame a;
    a.largest_acked = U64();
    a.ack_delay = TimeDelta::Micros(static_cast<int64_t>(static_cast<uint32_t>(U64())));
    const int ranges = Uniform(0, 3) == 0 ? Uniform(0, 255) : Uniform(0, 6);
    // Descending disjoint ranges below largest_acked.
    uint64_t ceiling = a.largest_acked;
    for (int i = 0; i < ranges; ++i) {
      const uint64_t end = ceiling - std::min<uint64_t>(ceiling, Small());
      const uint64_t start = end - std::min<uint64_t>(end, Small());
      a.ranges.push_back({start, end});
      if (start < 2) break;
      ceiling = start - 2;
    }
    return a;
  }

  int Uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  uint64_t U64() {
    // Favour the boundaries.
    switch (Uniform(0, 7)) {
      case 0:
        return 0;
      case 1:
        return std::numeric_limits<uint64_t>::max();
      default:
        return rng_();
    }
  }

 private:
  uint64_t Small() { return rng_() % (Uniform(0, 1) ? 5 : 1000000); }

  std::mt19937_64 rng_;
};

}  // namespace test
}  // namespace mprtc

#endif  // TESTS_TRANSPORT_RANDOM_PACKET_H_
