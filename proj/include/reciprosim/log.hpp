#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "reciprosim/event.hpp"

namespace reciprosim {

// Log header, one line: "#reciprosim v1 seed=<u64> config=<16 hex digits>"
struct LogHeader {
  std::uint32_t version = 1;
  std::uint64_t seed = 0;
  std::uint64_t config_digest = 0;

  bool operator==(const LogHeader&) const = default;
};

std::string format_header(const LogHeader& h);
LogHeader parse_header(const std::string& line);

// Append-only event log. append() enforces ordering and the field matrix:
// ticks never decrease, seq is gapless within a tick and resets to 0 on a
// tick advance.
class EventLog {
 public:
  EventLog() = default;
  explicit EventLog(LogHeader h) : header_(h) {}

  const LogHeader& header() const { return header_; }
  LogHeader& header() { return header_; }
  const std::vector<InteractionEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  void append(const InteractionEvent& e);

  bool operator==(const EventLog&) const = default;

 private:
  LogHeader header_;
  std::vector<InteractionEvent> events_;
};

// Text form: header line, then one event per line, each '\n'-terminated,
// no trailing blank line. Parsing is strict and reports 1-based line numbers.
void write_log(std::ostream& os, const EventLog& log);
std::string log_to_string(const EventLog& log);
EventLog log_from_string(const std::string& text);

void save_log(const std::string& path, const EventLog& log);
EventLog load_log(const std::string& path);

}  // namespace reciprosim
