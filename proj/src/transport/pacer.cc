#include "mprtc/transport/pacer.h"

#include <algorithm>

namespace mprtc {

std::optional<Timestamp> PacerNextSendTime(Timestamp prev_sent, int64_t prev_len,
                                           DataRate rate) {
  if (rate.bps() <= 0) return std::nullopt;
  if (prev_len <= 0) return prev_sent;
  return prev_sent + rate.TransferTime(prev_len);
}

std::optional<Timestamp> Pacer::NextSendTime(Timestamp now, DataRate rate) const {
  if (rate.bps() <= 0) return std::nullopt;
  if (!has_sent_) return now;
  return std::max(now, *PacerNextSendTime(last_sent_, last_len_, rate));
}

}  // namespace mprtc
