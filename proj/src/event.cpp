#include "reciprosim/event.hpp"

#include <array>
#include <charconv>
#include <cstring>

namespace reciprosim {

namespace {

struct KindInfo {
  EventKind kind;
  const char* name;
  bool actor, target, amount, token, project;
};

// The field matrix. Order matches EventKind.
constexpr std::array<KindInfo, 11> kKinds{{
    {EventKind::Give, "GIVE", true, true, true, false, false},
    {EventKind::Refuse, "REFUSE", true, true, false, false, false},
    {EventKind::TokenPay, "TOKEN_PAY", true, true, false, true, false},
    {EventKind::TokenRedeem, "TOKEN_REDEEM", true, true, false, true, false},
    {EventKind::Invest, "INVEST", true, false, true, false, true},
    {EventKind::ProjectPayout, "PROJECT_PAYOUT", false, true, true, false, true},
    {EventKind::ProjectFail, "PROJECT_FAIL", false, true, true, false, true},
    {EventKind::Shock, "SHOCK", false, true, true, false, false},
    {EventKind::Income, "INCOME", false, true, true, false, false},
    {EventKind::Consume, "CONSUME", false, true, true, false, false},
    {EventKind::Mint, "MINT", false, true, false, true, false},
}};

const KindInfo& info(EventKind k) { return kKinds[static_cast<std::size_t>(k)]; }

}  // namespace

const char* kind_name(EventKind k) { return info(k).name; }

EventKind kind_from_name(const std::string& s) {
  for (const auto& ki : kKinds)
    if (s == ki.name) return ki.kind;
  fail(Err::UnknownKind, "event kind '" + s + "'");
}

void validate_event(const InteractionEvent& e) {
  const KindInfo& ki = info(e.kind);
  auto want = [&](bool required, bool present, const char* field) {
    if (required && !present)
      fail(Err::SchemaViolation, std::string(ki.name) + " requires " + field);
    if (!required && present)
      fail(Err::SchemaViolation, std::string(ki.name) + " forbids " + field);
  };
  want(ki.actor, e.actor.has_value(), "actor");
  want(ki.target, e.target.has_value(), "target");
  want(ki.amount, e.amount.has_value(), "amount");
  want(ki.token, e.token.has_value(), "token");
  want(ki.project, e.project.has_value(), "project");
  if (e.actor && e.target && *e.actor == *e.target)
    fail(Err::SelfInteraction, std::string(ki.name) + " with actor == target");
  if (e.amount) {
    if (*e.amount < 0) fail(Err::SchemaViolation, "negative amount");
    // Floor'd refunds may legitimately hit zero; every other kind moves value.
    if (*e.amount == 0 && e.kind != EventKind::ProjectFail)
      fail(Err::SchemaViolation, std::string(ki.name) + " with zero amount");
  }
}

std::string serialize_event(const InteractionEvent& e) {
  std::string out;
  out.reserve(48);
  out += std::to_string(e.tick);
  out += ',';
  out += std::to_string(e.seq);
  out += ',';
  out += kind_name(e.kind);
  auto field = [&out](auto opt) {
    out += ',';
    if (opt)
      out += std::to_string(*opt);
    else
      out += '-';
  };
  field(e.actor);
  field(e.target);
  field(e.amount);
  field(e.token);
  field(e.project);
  return out;
}

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& why) {
  fail(Err::ParseError, "line " + std::to_string(line_no) + ": " + why);
}

template <typename T>
T parse_uint(const std::string& s, std::size_t line_no, const char* field) {
  if (s.empty()) parse_fail(line_no, std::string("empty ") + field);
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value, 10);
  if (ec != std::errc() || ptr != s.data() + s.size())
    parse_fail(line_no, std::string("bad ") + field + " '" + s + "'");
  return value;
}

}  // namespace

InteractionEvent parse_event(const std::string& line, std::size_t line_no) {
  std::array<std::string, 8> fields;
  std::size_t n = 0, start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      if (n >= fields.size()) parse_fail(line_no, "too many fields");
      fields[n++] = line.substr(start, i - start);
      start = i + 1;
    }
  }
  if (n != fields.size())
    parse_fail(line_no, "expected 8 fields, got " + std::to_string(n));

  InteractionEvent e;
  e.tick = parse_uint<Tick>(fields[0], line_no, "tick");
  e.seq = parse_uint<Seq>(fields[1], line_no, "seq");
  e.kind = kind_from_name(fields[2]);
  auto opt_field = [&](const std::string& s, const char* name, auto& out) {
    using T = typename std::decay_t<decltype(out)>::value_type;
    if (s == "-") return;
    out = parse_uint<T>(s, line_no, name);
  };
  opt_field(fields[3], "actor", e.actor);
  opt_field(fields[4], "target", e.target);
  opt_field(fields[5], "amount", e.amount);
  opt_field(fields[6], "token", e.token);
  opt_field(fields[7], "project", e.project);
  try {
    validate_event(e);
  } catch (const SimError& err) {
    if (err.code() == Err::SelfInteraction) throw;
    fail(Err::SchemaViolation, "line " + std::to_string(line_no) + ": " + err.what());
  }
  return e;
}

}  // namespace reciprosim
