#ifndef MPRTC_TRANSPORT_PACER_H_
#define MPRTC_TRANSPORT_PACER_H_

#include <cstdint>
#include <optional>

#include "mprtc/simnet/units.h"

namespace mprtc {

// Earliest time the packet after one of `prev_len` bytes sent at `prev_sent`
// may leave: prev_sent + prev_len * 8 / rate, rounded up to the microsecond.
// nullopt while the rate is zero (sending suspended).
std::optional<Timestamp> PacerNextSendTime(Timestamp prev_sent, int64_t prev_len,
                                           DataRate rate);

// Remembers the last departure; the gap to the next one uses whatever rate is
// current when asked, so a rate change takes effect immediately.
class Pacer {
 public:
  void OnPacketSent(Timestamp at, int64_t bytes) {
    last_sent_ = at;
    last_len_ = bytes;
    has_sent_ = true;
  }
  // Returns `now` before the first packet.
  std::optional<Timestamp> NextSendTime(Timestamp now, DataRate rate) const;

 private:
  bool has_sent_ = false;
  Timestamp last_sent_;
  int64_t last_len_ = 0;
};

}  // namespace mprtc

#endif  // MPRTC_TRANSPORT_PACER_H_
