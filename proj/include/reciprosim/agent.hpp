#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "reciprosim/rational.hpp"
#include "reciprosim/rng.hpp"
#include "reciprosim/types.hpp"

namespace reciprosim {

// Per-partner interaction memory, indexed by partner identity.
// helpful/unhelpful count the partner's behavior toward me; given/received
// are cumulative transfer volumes; last_tick drives LRU eviction.
struct PartnerRecord {
  std::uint64_t helpful = 0;
  std::uint64_t unhelpful = 0;
  Amount given = 0;
  Amount received = 0;
  Tick last_tick = 0;
  bool blocked = false;

  bool operator==(const PartnerRecord&) const = default;
};

struct PolicyParams {
  Rational theta_coop{1, 25};  // minimum score for scored-branch giving
  Amount give_amount = 3;      // g
  double stranger_generosity = 0.05;  // p0
  Amount need_threshold = 10;  // nu
  Amount safety_buffer = 10;   // beta
  Amount need_gift = 3;
  Rational roi_threshold{2};   // rho
  bool accepts_tokens = false;
  bool insurance_norm = false;
  bool need_overrides_blocking = true;
  bool defector = false;       // always-WITHHOLD policy
  bool giving_enabled = true;  // cleared by the giving_disabled control switch

  bool operator==(const PolicyParams&) const = default;
};

struct AgentState {
  AgentId id = 0;
  Amount resource = 0;
  std::map<AgentId, PartnerRecord> memory;  // ordered: deterministic iteration
  std::optional<std::uint32_t> memory_capacity;  // nullopt = unlimited
  std::set<TokenId> tokens;
  PolicyParams policy;

  bool operator==(const AgentState&) const = default;
};

enum class Outcome { HelpedMe, RefusedMe };

enum class ActionKind { Give, GiveNeed, TokenRedeemRequest, Invest, Withhold };

struct ActionIntent {
  ActionKind kind = ActionKind::Withhold;
  std::optional<AgentId> target;  // Withhold: partner selected but not served
  std::optional<Amount> amount;
  std::optional<TokenId> token;
  std::optional<ProjectId> project;

  bool operator==(const ActionIntent&) const = default;
};

// What an agent sees when deciding. Candidates are all other agents in
// ascending id order; resources and accepts_tokens are public.
struct Candidate {
  AgentId id = 0;
  Amount resource = 0;
  bool accepts_tokens = false;
};

struct ProjectView {
  ProjectId id = 0;
  Rational multiplier{1};
  Amount contribution_unit = 1;
  bool feasible = false;  // still open for contributions
};

struct Observation {
  std::vector<Candidate> candidates;
  std::vector<ProjectView> projects;
};

// (helpful - unhelpful) / (helpful + unhelpful), exactly; 0 with no history.
Rational reciprocity_score(const PartnerRecord& rec);
// Score of a possibly-unknown partner: strangers score 0.
Rational reciprocity_score(const AgentState& s, AgentId partner);

// Record the partner's behavior toward me. amount accompanies HelpedMe.
// Inserts (evicting least-recently-interacted, ties to lowest partner id,
// when at capacity); capacity 0 keeps no records at all.
void record_interaction(AgentState& s, AgentId partner, Outcome outcome,
                        std::optional<Amount> amount, Tick tick);
// Record my own transfer to the partner (updates given / last_tick).
void record_gift(AgentState& s, AgentId partner, Amount amount, Tick tick);

struct Selection {
  std::optional<AgentId> id;
  bool need_based = false;
};

// Priority: need branch when insurance_norm is on and somebody is visibly
// below my need threshold (blocked partners stay eligible here only while
// need_overrides_blocking); else best-scoring non-blocked known partner if
// that score clears theta_coop; else lowest-id stranger with probability p0
// (exactly one rng draw whenever this branch is reached with a stranger
// present); else nobody. Ties always break to the lowest id.
Selection select_partner(const AgentState& s, const std::vector<Candidate>& candidates,
                         SplitMix64& rng);

// Full decision priority: invest -> give/give-need -> token redemption ->
// withhold. See engine.cpp for how intents are applied.
ActionIntent decide_action(const AgentState& s, const Observation& obs, SplitMix64& rng);

// End-of-tick behavioral updating: recompute blocked flags
// (score <= -1/2 with at least 4 recorded interactions). Idempotent.
void update_strategy(AgentState& s);

bool is_blocked(const PartnerRecord& rec);

}  // namespace reciprosim
