#pragma once

#include <optional>
#include <string>

#include "reciprosim/types.hpp"

namespace reciprosim {

enum class EventKind {
  Give,
  Refuse,
  TokenPay,
  TokenRedeem,
  Invest,
  ProjectPayout,
  ProjectFail,
  Shock,
  Income,
  Consume,
  Mint,
};

const char* kind_name(EventKind k);                // "GIVE", "TOKEN_PAY", ...
EventKind kind_from_name(const std::string& s);    // throws UnknownKind

// One append-only log record. Absent fields are NONE and serialize as "-".
//
// Field matrix (required fields; everything else must be NONE):
//   GIVE            actor, target, amount
//   REFUSE          actor, target
//   TOKEN_PAY       actor, target, token
//   TOKEN_REDEEM    actor, target, token     (request signal; no state change)
//   INVEST          actor, amount, project
//   PROJECT_PAYOUT  target, amount, project
//   PROJECT_FAIL    target, amount, project
//   SHOCK           target, amount
//   INCOME          target, amount
//   CONSUME         target, amount
//   MINT            target, token
//
// actor/target must differ where both are present. Amounts are >= 1 except
// PROJECT_FAIL, whose floor'd refund may be 0.
struct InteractionEvent {
  Tick tick = 0;
  Seq seq = 0;
  EventKind kind = EventKind::Give;
  std::optional<AgentId> actor;
  std::optional<AgentId> target;
  std::optional<Amount> amount;
  std::optional<TokenId> token;
  std::optional<ProjectId> project;

  bool operator==(const InteractionEvent&) const = default;
};

// Throws SchemaViolation / SelfInteraction when the matrix is broken.
void validate_event(const InteractionEvent& e);

// "tick,seq,KIND,actor,target,amount,token,project" — decimal integers,
// "-" for NONE, no spaces. Injective over valid events.
std::string serialize_event(const InteractionEvent& e);

// Inverse of serialize_event. line_no is for diagnostics only.
InteractionEvent parse_event(const std::string& line, std::size_t line_no = 0);

}  // namespace reciprosim
