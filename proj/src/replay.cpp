#include "reciprosim/replay.hpp"

#include <string>

namespace reciprosim {

namespace {

// Phase indices within a tick; events may only move forward through them.
constexpr int kMint = 0;
constexpr int kIncome = 1;
constexpr int kDecisions = 2;
constexpr int kSettlement = 3;
constexpr int kShocks = 4;
constexpr int kConsume = 5;
constexpr int kDone = 6;

int phase_of(EventKind k) {
  switch (k) {
    case EventKind::Mint: return kMint;
    case EventKind::Income: return kIncome;
    case EventKind::Give:
    case EventKind::Refuse:
    case EventKind::TokenPay:
    case EventKind::TokenRedeem:
    case EventKind::Invest: return kDecisions;
    case EventKind::ProjectPayout:
    case EventKind::ProjectFail: return kSettlement;
    case EventKind::Shock: return kShocks;
    case EventKind::Consume: return kConsume;
  }
  return kDone;
}

std::string at(const InteractionEvent& e) {
  return " at " + std::to_string(e.tick) + "," + std::to_string(e.seq);
}

}  // namespace

Replayer::Replayer(const ScenarioConfig& cfg, const LogHeader& header) : cfg_(cfg) {
  if (header.version != 1)
    fail(Err::ParseError, "unsupported log version " + std::to_string(header.version));
  if (header.config_digest != config_digest(cfg))
    fail(Err::DigestMismatch, "log was produced by a different configuration");
  std::vector<std::string> violations = validate_scenario(cfg);
  if (!violations.empty()) fail(Err::ValidationError, violations.front());
  world_ = make_world(cfg);
  expected_total_ = checked_mul(static_cast<Amount>(cfg.population), cfg.endowment);
  post_projects();
}

void Replayer::post_projects() {
  if (!cfg_.projects_enabled || world_.tick % cfg_.projects.period != 0) return;
  Project p;
  p.id = world_.next_project_id++;
  p.open_tick = world_.tick;
  p.deadline = world_.tick + cfg_.projects.deadline_offset;
  p.maturity = world_.tick + cfg_.projects.maturity_offset;
  p.threshold = cfg_.projects.threshold;
  p.contribution_unit = cfg_.projects.contribution_unit;
  p.multiplier = cfg_.projects.multiplier;
  p.refund = cfg_.projects.refund;
  world_.open_projects.emplace(p.id, p);
}

void Replayer::enter_phase(int phase) {
  if (phase < phase_)
    fail(Err::OrderViolation, "phase order violated within tick " +
                                  std::to_string(world_.tick));
  if (phase_ < kDecisions && phase >= kDecisions && on_decision_start)
    on_decision_start(world_.tick);
  if (phase_ < kShocks && phase >= kShocks) {
    settle_marker();
    if (on_pre_shock) on_pre_shock(world_.tick);
  }
  phase_ = phase;
}

void Replayer::settle_marker() {
  std::vector<ProjectId> closed;
  for (auto& [pid, p] : world_.open_projects) {
    if (!p.funded && p.deadline == world_.tick) {
      if (p.pooled() >= p.threshold) {
        if (fail_seen_.count(pid))
          fail(Err::ConservationViolation, "refund events for a funded project");
        p.funded = true;
      } else {
        const auto& seen = fail_seen_[pid];
        if (seen.size() != p.contributions.size())
          fail(Err::ConservationViolation, "failed project not fully refunded");
        for (const auto& [aid, c] : p.contributions)
          if (!seen.count(aid))
            fail(Err::ConservationViolation, "missing refund for contributor " +
                                                 std::to_string(aid));
        closed.push_back(pid);
      }
    } else if (p.funded && p.maturity == world_.tick) {
      const auto& seen = payout_seen_[pid];
      std::size_t expected_events = 0;
      for (const auto& [aid, c] : p.contributions) {
        if (floor_mul(c, p.multiplier) <= 0) continue;
        ++expected_events;
        if (!seen.count(aid))
          fail(Err::ConservationViolation,
               "missing payout for contributor " + std::to_string(aid));
      }
      if (seen.size() != expected_events)
        fail(Err::ConservationViolation, "stray payout events");
      closed.push_back(pid);
    }
  }
  for (ProjectId pid : closed) world_.open_projects.erase(pid);
}

void Replayer::end_tick() {
  enter_phase(kDone);
  for (AgentState& a : world_.agents) update_strategy(a);
  world_.tick += 1;
  world_.next_seq = 0;
  phase_ = kMint;
  fail_seen_.clear();
  payout_seen_.clear();
  if (world_.tick < cfg_.horizon) post_projects();
}

void Replayer::advance_to(Tick t) {
  while (world_.tick < t) end_tick();
}

void Replayer::verify_conservation(const InteractionEvent& e) const {
  if (world_.total_resources() != expected_total_)
    fail(Err::ConservationViolation,
         "resources diverge from the event ledger" + at(e));
}

void Replayer::apply(const InteractionEvent& e) {
  if (finished_) fail(Err::OrderViolation, "apply after finish");
  validate_event(e);
  if (e.tick >= cfg_.horizon)
    fail(Err::HorizonExceeded, "event beyond the configured horizon" + at(e));
  if (has_last_) {
    bool ok = e.tick > last_tick_ ? e.seq == 0
                                  : e.tick == last_tick_ && e.seq == last_seq_ + 1;
    if (!ok) fail(Err::OrderViolation, "non-contiguous event" + at(e));
  } else if (e.seq != 0) {
    fail(Err::OrderViolation, "first event must open its tick" + at(e));
  }
  advance_to(e.tick);
  enter_phase(phase_of(e.kind));

  auto valid_agent = [this, &e](AgentId id) -> AgentState& {
    if (id >= world_.agents.size())
      fail(Err::SchemaViolation, "agent id out of range" + at(e));
    return world_.agents[id];
  };

  switch (e.kind) {
    case EventKind::Mint: {
      if (e.tick != 0) fail(Err::OrderViolation, "MINT after tick 0" + at(e));
      AgentState& holder = valid_agent(*e.target);
      if (world_.token_holders.count(*e.token))
        fail(Err::SchemaViolation, "token minted twice" + at(e));
      holder.tokens.insert(*e.token);
      world_.token_holders.emplace(*e.token, holder.id);
      break;
    }
    case EventKind::Income: {
      AgentState& a = valid_agent(*e.target);
      if (*e.amount != income_for(cfg_, e.tick, a.id))
        fail(Err::ConservationViolation, "INCOME off schedule" + at(e));
      a.resource = checked_add(a.resource, *e.amount);
      expected_total_ = checked_add(expected_total_, *e.amount);
      break;
    }
    case EventKind::Give: {
      AgentState& giver = valid_agent(*e.actor);
      AgentState& recipient = valid_agent(*e.target);
      if (giver.resource < *e.amount)
        fail(Err::ConservationViolation, "GIVE overdraws the giver" + at(e));
      if (on_give) on_give(e, recipient.resource);
      giver.resource -= *e.amount;
      recipient.resource = checked_add(recipient.resource, *e.amount);
      record_gift(giver, recipient.id, *e.amount, e.tick);
      record_interaction(recipient, giver.id, Outcome::HelpedMe, *e.amount, e.tick);
      break;
    }
    case EventKind::Refuse: {
      AgentState& refuser = valid_agent(*e.actor);
      AgentState& refused = valid_agent(*e.target);
      record_interaction(refused, refuser.id, Outcome::RefusedMe, std::nullopt, e.tick);
      break;
    }
    case EventKind::TokenPay: {
      AgentState& payer = valid_agent(*e.actor);
      AgentState& payee = valid_agent(*e.target);
      auto it = world_.token_holders.find(*e.token);
      if (it == world_.token_holders.end() || it->second != payer.id)
        fail(Err::SchemaViolation, "TOKEN_PAY by a non-holder" + at(e));
      payer.tokens.erase(*e.token);
      payee.tokens.insert(*e.token);
      it->second = payee.id;
      break;
    }
    case EventKind::TokenRedeem: {
      // Pure request signal: no transfer, but the actor must hold the token.
      AgentState& requester = valid_agent(*e.actor);
      valid_agent(*e.target);
      auto it = world_.token_holders.find(*e.token);
      if (it == world_.token_holders.end() || it->second != requester.id)
        fail(Err::SchemaViolation, "TOKEN_REDEEM by a non-holder" + at(e));
      break;
    }
    case EventKind::Invest: {
      AgentState& investor = valid_agent(*e.actor);
      auto it = world_.open_projects.find(*e.project);
      if (it == world_.open_projects.end())
        fail(Err::SchemaViolation, "INVEST in a project that is not open" + at(e));
      Project& p = it->second;
      if (e.tick >= p.deadline)
        fail(Err::OrderViolation, "INVEST after the contribution deadline" + at(e));
      if (investor.resource < *e.amount)
        fail(Err::ConservationViolation, "INVEST overdraws the investor" + at(e));
      investor.resource -= *e.amount;
      Amount& c = p.contributions[investor.id];
      c = checked_add(c, *e.amount);
      expected_total_ = checked_sub(expected_total_, *e.amount);
      break;
    }
    case EventKind::ProjectPayout: {
      AgentState& a = valid_agent(*e.target);
      auto it = world_.open_projects.find(*e.project);
      if (it == world_.open_projects.end())
        fail(Err::SchemaViolation, "payout from a project that is not open" + at(e));
      Project& p = it->second;
      if (!p.funded || e.tick != p.maturity)
        fail(Err::OrderViolation, "payout outside the maturity tick" + at(e));
      auto cit = p.contributions.find(a.id);
      if (cit == p.contributions.end())
        fail(Err::SchemaViolation, "payout to a non-contributor" + at(e));
      if (*e.amount != floor_mul(cit->second, p.multiplier))
        fail(Err::ConservationViolation, "payout amount off the floor rule" + at(e));
      auto& seen = payout_seen_[p.id];
      if (!seen.emplace(a.id, *e.amount).second)
        fail(Err::ConservationViolation, "duplicate payout" + at(e));
      a.resource = checked_add(a.resource, *e.amount);
      expected_total_ = checked_add(expected_total_, *e.amount);
      break;
    }
    case EventKind::ProjectFail: {
      AgentState& a = valid_agent(*e.target);
      auto it = world_.open_projects.find(*e.project);
      if (it == world_.open_projects.end())
        fail(Err::SchemaViolation, "refund from a project that is not open" + at(e));
      Project& p = it->second;
      if (p.funded || e.tick != p.deadline)
        fail(Err::OrderViolation, "refund outside the deadline tick" + at(e));
      if (p.pooled() >= p.threshold)
        fail(Err::ConservationViolation, "refund from a project that met threshold" + at(e));
      auto cit = p.contributions.find(a.id);
      if (cit == p.contributions.end())
        fail(Err::SchemaViolation, "refund to a non-contributor" + at(e));
      if (*e.amount != floor_mul(cit->second, p.refund))
        fail(Err::ConservationViolation, "refund amount off the floor rule" + at(e));
      auto& seen = fail_seen_[p.id];
      if (!seen.emplace(a.id, *e.amount).second)
        fail(Err::ConservationViolation, "duplicate refund" + at(e));
      a.resource = checked_add(a.resource, *e.amount);
      expected_total_ = checked_add(expected_total_, *e.amount);
      break;
    }
    case EventKind::Shock: {
      AgentState& a = valid_agent(*e.target);
      if (*e.amount > cfg_.shock_loss)
        fail(Err::ConservationViolation, "SHOCK exceeds the configured loss" + at(e));
      if (a.resource < *e.amount)
        fail(Err::ConservationViolation, "SHOCK overdraws the agent" + at(e));
      if (*e.amount != cfg_.shock_loss && a.resource != *e.amount)
        fail(Err::ConservationViolation, "SHOCK not clamped to the balance" + at(e));
      a.resource -= *e.amount;
      expected_total_ = checked_sub(expected_total_, *e.amount);
      break;
    }
    case EventKind::Consume: {
      AgentState& a = valid_agent(*e.target);
      if (*e.amount > cfg_.consumption)
        fail(Err::ConservationViolation, "CONSUME exceeds the configured rate" + at(e));
      if (a.resource < *e.amount)
        fail(Err::ConservationViolation, "CONSUME overdraws the agent" + at(e));
      if (*e.amount != cfg_.consumption && a.resource != *e.amount)
        fail(Err::ConservationViolation, "CONSUME not clamped to the balance" + at(e));
      a.resource -= *e.amount;
      expected_total_ = checked_sub(expected_total_, *e.amount);
      break;
    }
  }

  verify_conservation(e);
  has_last_ = true;
  last_tick_ = e.tick;
  last_seq_ = e.seq;
  world_.next_seq = e.seq + 1;
}

void Replayer::finish() {
  if (finished_) return;
  while (world_.tick < cfg_.horizon) end_tick();
  finished_ = true;
}

WorldState replay(const EventLog& log, const ScenarioConfig& cfg) {
  Replayer r(cfg, log.header());
  for (const InteractionEvent& e : log.events()) r.apply(e);
  r.finish();
  return r.world();
}

}  // namespace reciprosim
