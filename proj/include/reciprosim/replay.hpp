#pragma once

#include <functional>

#include "reciprosim/engine.hpp"
#include "reciprosim/log.hpp"
#include "reciprosim/scenario.hpp"

namespace reciprosim {

// Streaming re-execution of a log against its generating config. Applies
// events one at a time, re-deriving config-driven bookkeeping (project
// postings, settlements of contribution-less projects, end-of-tick behavioral
// updates) and verifying after every event:
//   - (tick, seq) ordering and the field matrix (via EventLog/parse already,
//     re-checked on apply),
//   - no resource ever negative,
//   - sum of resources equals the running event ledger
//     (endowments + INCOME + PROJECT_PAYOUT + PROJECT_FAIL
//      - CONSUME - SHOCK - INVEST),
//   - escrow equals the sum of open-project contributions,
//   - every token has exactly one holder and TOKEN_PAY moves only that token.
//
// Hooks fire at fixed phase boundaries so detectors can sample state without
// re-implementing the application rules:
//   on_decision_start(t): after tick t's INCOME events, before decisions;
//   on_pre_shock(t):      after tick t's settlement events, before SHOCKs;
//   on_give(e, before): every GIVE, with the recipient's balance before the
//                       transfer lands.
class Replayer {
 public:
  Replayer(const ScenarioConfig& cfg, const LogHeader& header);

  std::function<void(Tick)> on_decision_start;
  std::function<void(Tick)> on_pre_shock;
  std::function<void(const InteractionEvent&, Amount recipient_before)> on_give;

  void apply(const InteractionEvent& e);
  // Advance bookkeeping through the horizon (closes quiet ticks).
  void finish();

  const WorldState& world() const { return world_; }
  Tick current_tick() const { return world_.tick; }

 private:
  void advance_to(Tick t);        // complete ticks < t, open tick t
  void enter_phase(int phase);    // fire boundary hooks inside current tick
  void end_tick();                // settle-by-schedule, update_strategy, tick++
  void verify_conservation(const InteractionEvent& e) const;
  void post_projects();
  void settle_marker();  // funded flags at deadlines (no events; zero-pool close)

  ScenarioConfig cfg_;
  WorldState world_;
  Amount expected_total_ = 0;
  bool finished_ = false;
  int phase_ = 0;  // mint, income, decisions, settlement, shocks, consume
  bool has_last_ = false;
  Tick last_tick_ = 0;
  Seq last_seq_ = 0;
  // Settlement events seen in the current tick, per project, for the
  // completeness checks in settle_marker().
  std::map<ProjectId, std::map<AgentId, Amount>> fail_seen_;
  std::map<ProjectId, std::map<AgentId, Amount>> payout_seen_;
};

// Full replay with verification; returns the final world state (tick ==
// horizon). Checks the header digest against the config first.
WorldState replay(const EventLog& log, const ScenarioConfig& cfg);

}  // namespace reciprosim
