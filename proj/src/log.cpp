#include "reciprosim/log.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace reciprosim {

std::string format_header(const LogHeader& h) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "#reciprosim v%u seed=%llu config=%016llx", h.version,
                static_cast<unsigned long long>(h.seed),
                static_cast<unsigned long long>(h.config_digest));
  return buf;
}

LogHeader parse_header(const std::string& line) {
  auto bad = [&]() -> void { fail(Err::ParseError, "line 1: bad header '" + line + "'"); };
  // "#reciprosim v1 seed=<decimal u64> config=<16 lowercase hex>"
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ' ') {
      parts.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() != 4 || parts[0] != "#reciprosim") bad();
  if (parts[1] != "v1") {
    if (parts[1].size() > 1 && parts[1][0] == 'v')
      fail(Err::ParseError, "unsupported log version " + parts[1].substr(1));
    bad();
  }
  if (parts[2].rfind("seed=", 0) != 0 || parts[3].rfind("config=", 0) != 0) bad();
  std::string seed_s = parts[2].substr(5);
  std::string hex = parts[3].substr(7);
  if (seed_s.empty() || seed_s.size() > 20) bad();
  std::uint64_t seed = 0;
  {
    auto [ptr, ec] = std::from_chars(seed_s.data(), seed_s.data() + seed_s.size(), seed, 10);
    if (ec != std::errc() || ptr != seed_s.data() + seed_s.size()) bad();
  }
  if (hex.size() != 16) fail(Err::ParseError, "digest must be 16 hex digits");
  std::uint64_t digest = 0;
  for (char c : hex) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')))
      fail(Err::ParseError, "digest must be lowercase hex");
    digest = digest * 16 + (c <= '9' ? c - '0' : c - 'a' + 10);
  }
  LogHeader h;
  h.version = 1;
  h.seed = seed;
  h.config_digest = digest;
  return h;
}

void EventLog::append(const InteractionEvent& e) {
  validate_event(e);
  if (!events_.empty()) {
    const InteractionEvent& last = events_.back();
    if (e.tick < last.tick)
      fail(Err::OrderViolation, "tick " + std::to_string(e.tick) + " after tick " +
                                    std::to_string(last.tick));
    if (e.tick == last.tick) {
      if (e.seq != last.seq + 1)
        fail(Err::OrderViolation, "seq " + std::to_string(e.seq) + " after (tick " +
                                      std::to_string(last.tick) + ", seq " +
                                      std::to_string(last.seq) + ")");
    } else if (e.seq != 0) {
      fail(Err::OrderViolation, "tick advance must reset seq to 0");
    }
  } else if (e.seq != 0) {
    fail(Err::OrderViolation, "first event must have seq 0");
  }
  events_.push_back(e);
}

void write_log(std::ostream& os, const EventLog& log) {
  os << format_header(log.header()) << '\n';
  for (const auto& e : log.events()) os << serialize_event(e) << '\n';
}

std::string log_to_string(const EventLog& log) {
  std::ostringstream ss;
  write_log(ss, log);
  return ss.str();
}

EventLog log_from_string(const std::string& text) {
  if (text.empty()) fail(Err::ParseError, "empty log");
  std::size_t pos = 0, line_no = 0;
  EventLog log;
  bool have_header = false;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos)
      fail(Err::ParseError, "line " + std::to_string(line_no + 1) + ": missing newline");
    std::string line = text.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    if (!have_header) {
      log.header() = parse_header(line);
      have_header = true;
      continue;
    }
    if (line.empty())
      fail(Err::ParseError, "line " + std::to_string(line_no) + ": blank line");
    InteractionEvent e = parse_event(line, line_no);
    try {
      log.append(e);
    } catch (const SimError& err) {
      if (err.code() != Err::OrderViolation) throw;
      fail(Err::OrderViolation, "line " + std::to_string(line_no) + ": " + err.what());
    }
  }
  return log;
}

void save_log(const std::string& path, const EventLog& log) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(Err::IoError, "cannot open '" + path + "' for writing");
  write_log(f, log);
  f.flush();
  if (!f) fail(Err::IoError, "write failed for '" + path + "'");
}

EventLog load_log(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Err::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return log_from_string(ss.str());
}

}  // namespace reciprosim
