#ifndef MPRTC_SIMNET_TRACE_H_
#define MPRTC_SIMNET_TRACE_H_

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mprtc/simnet/units.h"

namespace mprtc {

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

// Step-function link capacity. The capacity at time t is the value of the
// latest entry at or before t; the schedule repeats from its first entry once
// it runs past the last one. The period of the repetition is the last
// entry's timestamp plus the spacing between the last two entries (or, for a
// single-entry trace, the schedule is constant).
class TraceSchedule {
 public:
  struct Entry {
    Timestamp at;
    DataRate capacity;
  };

  // Throws std::invalid_argument unless entries are non-empty, start at 0,
  // strictly increasing in time and all capacities are positive.
  explicit TraceSchedule(std::vector<Entry> entries);
  // Explicit wrap period; must exceed the last entry's timestamp.
  TraceSchedule(std::vector<Entry> entries, TimeDelta period);

  static TraceSchedule Constant(DataRate capacity);

  DataRate CapacityAt(Timestamp t) const;
  // First capacity change strictly after t; PlusInfinity for constant traces.
  Timestamp NextChangeAfter(Timestamp t) const;
  // Completion time of `bytes` of serialization starting at `start`,
  // integrating the step function; rounded up to the microsecond.
  Timestamp TransmitEnd(Timestamp start, int64_t bytes) const;
  // Capacity averaged over [from, to).
  DataRate MeanCapacity(Timestamp from, Timestamp to) const;

  const std::vector<Entry>& entries() const { return entries_; }
  TimeDelta period() const { return period_; }
  bool is_constant() const { return entries_.size() == 1; }

 private:
  // Index of the entry governing the in-period offset, and the offset.
  size_t IndexAt(int64_t offset_us) const;

  std::vector<Entry> entries_;
  TimeDelta period_;
};

// Reads "milliseconds,kilobits-per-second" lines. Blank lines are skipped.
// Errors name the source and line number.
TraceSchedule ParseTrace(std::istream& in, const std::string& source_name);
TraceSchedule LoadTrace(const std::string& path);
void WriteTrace(std::ostream& out, const TraceSchedule& trace);

}  // namespace mprtc

#endif  // MPRTC_SIMNET_TRACE_H_
