#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rangebal/events.hpp"

namespace rangebal {

struct TraceParseError : std::runtime_error {
  explicit TraceParseError(const std::string& what) : std::runtime_error(what) {}
};

// One compact JSON object per event, fixed field order, no floats, so equal
// runs produce byte-equal files.
std::string event_json_line(const EventRecord& rec);
EventRecord event_from_json_line(const std::string& line, std::size_t line_no);

void write_trace(std::ostream& out, const std::vector<EventRecord>& trace);
std::vector<EventRecord> read_trace(std::istream& in);

}  // namespace rangebal
