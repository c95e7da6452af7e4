#include "mprtc/transport/wire.h"

#include <limits>
#include <string>

namespace mprtc {

bool AckFrame::Acks(PacketNumber pn) const {
  for (const AckRange& r : ranges) {
    if (pn >= r.start && pn <= r.end) return true;
  }
  return false;
}

namespace {

class Writer {
 public:
  explicit Writer(size_t reserve) { out_.reserve(reserve); }
  void U8(uint8_t v) { out_.push_back(v); }
  void U16(uint16_t v) { BigEndian(v, 2); }
  void U32(uint32_t v) { BigEndian(v, 4); }
  void U64(uint64_t v) { BigEndian(v, 8); }
  void Bytes(const std::vector<uint8_t>& b) {
    out_.insert(out_.end(), b.begin(), b.end());
  }
  void Zeros(size_t n) { out_.resize(out_.size() + n, 0); }
  std::vector<uint8_t> Take() { return std::move(out_); }

 private:
  void BigEndian(uint64_t v, int bytes) {
    for (int i = bytes - 1; i >= 0; --i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  std::vector<uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> data) : data_(data) {}
  uint8_t U8() { return static_cast<uint8_t>(Read(1)); }
  uint16_t U16() { return static_cast<uint16_t>(Read(2)); }
  uint32_t U32() { return static_cast<uint32_t>(Read(4)); }
  uint64_t U64() { return Read(8); }
  std::vector<uint8_t> Bytes(size_t n) {
    Need(n);
    std::vector<uint8_t> b(data_.begin() + pos_, data_.begin() + pos_ + n);
    pos_ += n;
    return b;
  }
  bool AtEnd() const { return pos_ == data_.size(); }
  uint8_t Peek() const { return data_[pos_]; }
  size_t remaining() const { return data_.size() - pos_; }
  std::span<const uint8_t> Rest() const { return data_.subspan(pos_); }

 private:
  void Need(size_t n) const {
    if (data_.size() - pos_ < n) throw CodecError("truncated packet");
  }
  uint64_t Read(int n) {
    Need(static_cast<size_t>(n));
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) v = (v << 8) | data_[pos_++];
    return v;
  }
  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

void CheckAckRanges(const AckFrame& ack) {
  if (ack.ranges.size() > kMaxAckRanges) throw CodecError("too many ack ranges");
  for (size_t i = 0; i < ack.ranges.size(); ++i) {
    const AckRange& r = ack.ranges[i];
    if (r.start > r.end) throw CodecError("ack range start after end");
    if (r.end > ack.largest_acked) throw CodecError("ack range above largest_acked");
    if (i > 0 && r.end >= ack.ranges[i - 1].start)
      throw CodecError("ack ranges overlap or are not descending");
  }
}

void CheckStream(const StreamFrame& s) {
  if (s.total_segments == 0 || s.segment_index >= s.total_segments)
    throw CodecError("segment index out of range");
  if (s.capture_ts < Timestamp::Zero()) throw CodecError("negative capture timestamp");
}

struct SizeVisitor {
  size_t operator()(const StreamFrame& s) const {
    return kStreamFrameHeaderSize + s.payload.size();
  }
  size_t operator()(const AckFrame& a) const {
    return kAckFrameHeaderSize + kAckRangeSize * a.ranges.size();
  }
  size_t operator()(const StopWaitingFrame&) const { return kStopWaitingFrameSize; }
};

struct EncodeVisitor {
  Writer& w;
  void operator()(const StreamFrame& s) const {
    CheckStream(s);
    if (s.payload.size() > std::numeric_limits<uint16_t>::max())
      throw CodecError("stream payload exceeds u16 length");
    w.U8(static_cast<uint8_t>(FrameType::kStream));
    w.U64(s.stream_offset);
    w.U16(static_cast<uint16_t>(s.payload.size()));
    w.U32(s.frame_index);
    w.U64(static_cast<uint64_t>(s.capture_ts.us()));
    w.U16(s.total_segments);
    w.U16(s.segment_index);
    w.U8(s.key_frame ? 1 : 0);
    w.Bytes(s.payload);
  }
  void operator()(const AckFrame& a) const {
    CheckAckRanges(a);
    if (a.ack_delay.us() < 0 ||
        a.ack_delay.us() > std::numeric_limits<uint32_t>::max())
      throw CodecError("ack delay out of u32 range");
    w.U8(static_cast<uint8_t>(FrameType::kAck));
    w.U64(a.largest_acked);
    w.U32(static_cast<uint32_t>(a.ack_delay.us()));
    w.U8(static_cast<uint8_t>(a.ranges.size()));
    for (const AckRange& r : a.ranges) {
      w.U64(r.start);
      w.U64(r.end);
    }
  }
  void operator()(const StopWaitingFrame& s) const {
    w.U8(static_cast<uint8_t>(FrameType::kStopWaiting));
    w.U64(s.least_unacked);
  }
};

StreamFrame DecodeStream(Reader& r) {
  StreamFrame s;
  s.stream_offset = r.U64();
  const uint16_t length = r.U16();
  s.frame_index = r.U32();
  const uint64_t ts = r.U64();
  if (ts > static_cast<uint64_t>(std::numeric_limits<int64_t>::max()))
    throw CodecError("capture timestamp out of range");
  s.capture_ts = Timestamp::Micros(static_cast<int64_t>(ts));
  s.total_segments = r.U16();
  s.segment_index = r.U16();
  const uint8_t key = r.U8();
  if (key > 1) throw CodecError("invalid key flag");
  s.key_frame = key == 1;
  CheckStream(s);
  s.payload = r.Bytes(length);
  return s;
}

AckFrame DecodeAck(Reader& r) {
  AckFrame a;
  a.largest_acked = r.U64();
  a.ack_delay = TimeDelta::Micros(r.U32());
  const uint8_t count = r.U8();
  a.ranges.reserve(count);
  for (int i = 0; i < count; ++i) {
    AckRange range;
    range.start = r.U64();
    range.end = r.U64();
    a.ranges.push_back(range);
  }
  CheckAckRanges(a);
  return a;
}

}  // namespace

size_t EncodedSize(const Packet& packet) {
  size_t size = kPacketHeaderSize + packet.padding;
  for (const Frame& f : packet.frames) size += std::visit(SizeVisitor{}, f);
  return size;
}

std::vector<uint8_t> EncodePacket(const Packet& packet) {
  Writer w(EncodedSize(packet));
  w.U8(packet.padding > 0 ? kFlagPadded : 0);
  w.U64(packet.packet_number);
  for (const Frame& f : packet.frames) std::visit(EncodeVisitor{w}, f);
  w.Zeros(packet.padding);
  return w.Take();
}

Packet DecodePacket(std::span<const uint8_t> data) {
  Reader r(data);
  Packet p;
  const uint8_t flags = r.U8();
  if ((flags & ~kFlagPadded) != 0) throw CodecError("unknown packet flags");
  const bool padded = (flags & kFlagPadded) != 0;
  p.packet_number = r.U64();
  while (!r.AtEnd()) {
    const uint8_t type = r.Peek();
    if (type == 0 && padded) {
      for (uint8_t b : r.Rest()) {
        if (b != 0) throw CodecError("non-zero byte in padding");
      }
      p.padding = r.remaining();
      break;
    }
    r.U8();
    switch (static_cast<FrameType>(type)) {
      case FrameType::kStream:
        p.frames.emplace_back(DecodeStream(r));
        break;
      case FrameType::kAck:
        p.frames.emplace_back(DecodeAck(r));
        break;
      case FrameType::kStopWaiting:
        p.frames.emplace_back(StopWaitingFrame{r.U64()});
        break;
      default:
        throw CodecError("unknown frame type " + std::to_string(type));
    }
  }
  if (padded && p.padding == 0) throw CodecError("padded flag without padding");
  return p;
}

}  // namespace mprtc
