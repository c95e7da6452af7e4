#include "mprtc/simnet/trace.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace mprtc {

TraceParseError::TraceParseError(const std::string& source, int line,
                                 const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
      line_(line) {}

namespace {

TimeDelta DefaultPeriod(const std::vector<TraceSchedule::Entry>& e) {
  if (e.size() < 2) return TimeDelta::PlusInfinity();
  const TimeDelta last_gap = e.back().at - e[e.size() - 2].at;
  return (e.back().at - Timestamp::Zero()) + last_gap;
}

void Validate(const std::vector<TraceSchedule::Entry>& entries) {
  if (entries.empty()) throw std::invalid_argument("empty trace");
  if (entries.front().at != Timestamp::Zero())
    throw std::invalid_argument("trace must start at t=0");
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].capacity.bps() <= 0)
      throw std::invalid_argument("non-positive capacity at entry " +
                                  std::to_string(i));
    if (i > 0 && entries[i].at <= entries[i - 1].at)
      throw std::invalid_argument("non-increasing timestamp at entry " +
                                  std::to_string(i));
  }
}

}  // namespace

TraceSchedule::TraceSchedule(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  Validate(entries_);
  period_ = DefaultPeriod(entries_);
}

TraceSchedule::TraceSchedule(std::vector<Entry> entries, TimeDelta period)
    : entries_(std::move(entries)), period_(period) {
  Validate(entries_);
  if (period_ <= entries_.back().at - Timestamp::Zero())
    throw std::invalid_argument("trace period must exceed last timestamp");
}

TraceSchedule TraceSchedule::Constant(DataRate capacity) {
  return TraceSchedule({Entry{Timestamp::Zero(), capacity}});
}

size_t TraceSchedule::IndexAt(int64_t offset_us) const {
  auto it = std::upper_bound(
      entries_.begin(), entries_.end(), offset_us,
      [](int64_t t, const Entry& e) { return t < e.at.us(); });
  return static_cast<size_t>(it - entries_.begin()) - 1;
}

DataRate TraceSchedule::CapacityAt(Timestamp t) const {
  if (is_constant()) return entries_.front().capacity;
  const int64_t offset = t.us() % period_.us();
  return entries_[IndexAt(offset)].capacity;
}

Timestamp TraceSchedule::NextChangeAfter(Timestamp t) const {
  if (is_constant()) return Timestamp::PlusInfinity();
  const int64_t base = t.us() - t.us() % period_.us();
  const int64_t offset = t.us() - base;
  const size_t idx = IndexAt(offset);
  if (idx + 1 < entries_.size())
    return Timestamp::Micros(base + entries_[idx + 1].at.us());
  return Timestamp::Micros(base + period_.us());
}

Timestamp TraceSchedule::TransmitEnd(Timestamp start, int64_t bytes) const {
  if (bytes <= 0) return start;
  // Work in bit-microseconds so partial segments stay exact.
  int64_t remaining = bytes * 8 * 1000000;
  Timestamp t = start;
  while (true) {
    const int64_t rate = CapacityAt(t).bps();
    const Timestamp next = NextChangeAfter(t);
    if (next.IsInfinite()) break;
    const int64_t span = (next - t).us();
    if (rate * span >= remaining) break;
    remaining -= rate * span;
    t = next;
  }
  const int64_t rate = CapacityAt(t).bps();
  return t + TimeDelta::Micros((remaining + rate - 1) / rate);
}

DataRate TraceSchedule::MeanCapacity(Timestamp from, Timestamp to) const {
  if (to <= from) return CapacityAt(from);
  // Bits delivered over the window, accumulated in bit-microseconds / 1e6.
  long double bits_us = 0;
  Timestamp t = from;
  while (t < to) {
    const Timestamp next = std::min(NextChangeAfter(t), to);
    bits_us += static_cast<long double>(CapacityAt(t).bps()) * (next - t).us();
    t = next;
  }
  return DataRate::BitsPerSec(
      static_cast<int64_t>(bits_us / static_cast<long double>((to - from).us())));
}

TraceSchedule ParseTrace(std::istream& in, const std::string& source_name) {
  std::vector<TraceSchedule::Entry> entries;
  std::string line;
  int line_no = 0;
  int64_t first_ms = 0;
  int64_t prev_ms = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw TraceParseError(source_name, line_no, "expected 'ms,kbps'");
    auto parse = [&](std::string_view field, const char* what) {
      while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
      while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
      int64_t value = 0;
      auto [ptr, ec] =
          std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
        throw TraceParseError(source_name, line_no,
                              std::string("malformed ") + what);
      return value;
    };
    const std::string_view view(line);
    const int64_t ms = parse(view.substr(0, comma), "timestamp");
    const int64_t kbps = parse(view.substr(comma + 1), "capacity");
    if (ms < 0)
      throw TraceParseError(source_name, line_no, "negative timestamp");
    if (kbps <= 0)
      throw TraceParseError(source_name, line_no, "non-positive capacity");
    if (entries.empty()) {
      first_ms = ms;
    } else if (ms <= prev_ms) {
      throw TraceParseError(source_name, line_no, "non-increasing timestamp");
    }
    prev_ms = ms;
    entries.push_back({Timestamp::Millis(ms - first_ms),
                       DataRate::KilobitsPerSec(kbps)});
  }
  if (entries.empty())
    throw TraceParseError(source_name, line_no, "trace has no entries");
  return TraceSchedule(std::move(entries));
}

TraceSchedule LoadTrace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceParseError(path, 0, "cannot open file");
  return ParseTrace(in, path);
}

void WriteTrace(std::ostream& out, const TraceSchedule& trace) {
  for (const auto& e : trace.entries()) {
    out << e.at.us() / 1000 << "," << e.capacity.bps() / 1000 << "\n";
  }
}

}  // namespace mprtc
