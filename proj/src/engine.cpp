#include "reciprosim/engine.hpp"

#include <algorithm>

namespace reciprosim {

Amount Project::pooled() const {
  Amount sum = 0;
  for (const auto& [id, c] : contributions) sum = checked_add(sum, c);
  return sum;
}

Amount WorldState::total_resources() const {
  Amount sum = 0;
  for (const AgentState& a : agents) sum = checked_add(sum, a.resource);
  return sum;
}

Amount WorldState::total_escrow() const {
  Amount sum = 0;
  for (const auto& [id, p] : open_projects) sum = checked_add(sum, p.pooled());
  return sum;
}

namespace {

InteractionEvent base_event(WorldState& w, EventKind kind) {
  InteractionEvent e;
  e.tick = w.tick;
  e.seq = w.next_seq++;
  e.kind = kind;
  return e;
}

Observation observe(const WorldState& w, AgentId self) {
  Observation obs;
  obs.candidates.reserve(w.agents.size() - 1);
  for (const AgentState& a : w.agents) {
    if (a.id == self) continue;
    obs.candidates.push_back({a.id, a.resource, a.policy.accepts_tokens});
  }
  for (const auto& [pid, p] : w.open_projects) {
    bool feasible = !p.funded && w.tick < p.deadline && p.pooled() < p.threshold;
    obs.projects.push_back({pid, p.multiplier, p.contribution_unit, feasible});
  }
  return obs;
}

// A transfer plus both sides' bookkeeping: the recipient experiences help,
// the giver remembers what it gave.
void apply_give(WorldState& w, EventLog& log, AgentState& giver, AgentId target_id,
                Amount amount) {
  AgentState& recipient = w.agent(target_id);
  giver.resource = checked_sub(giver.resource, amount);
  recipient.resource = checked_add(recipient.resource, amount);
  InteractionEvent e = base_event(w, EventKind::Give);
  e.actor = giver.id;
  e.target = target_id;
  e.amount = amount;
  log.append(e);
  record_gift(giver, target_id, amount, w.tick);
  record_interaction(recipient, giver.id, Outcome::HelpedMe, amount, w.tick);
}

// The refused party is the one who learns something.
void apply_refuse(WorldState& w, EventLog& log, AgentState& refuser, AgentId target_id) {
  InteractionEvent e = base_event(w, EventKind::Refuse);
  e.actor = refuser.id;
  e.target = target_id;
  log.append(e);
  record_interaction(w.agent(target_id), refuser.id, Outcome::RefusedMe, std::nullopt,
                     w.tick);
}

void apply_intent(WorldState& w, EventLog& log, AgentState& actor,
                  const ActionIntent& intent) {
  switch (intent.kind) {
    case ActionKind::Invest: {
      auto it = w.open_projects.find(*intent.project);
      if (it == w.open_projects.end())
        fail(Err::SchemaViolation, "intent names a project that is not open");
      Project& proj = it->second;
      actor.resource = checked_sub(actor.resource, *intent.amount);
      Amount& c = proj.contributions[actor.id];
      c = checked_add(c, *intent.amount);
      InteractionEvent e = base_event(w, EventKind::Invest);
      e.actor = actor.id;
      e.amount = intent.amount;
      e.project = proj.id;
      log.append(e);
      return;
    }
    case ActionKind::Give:
    case ActionKind::GiveNeed:
      apply_give(w, log, actor, *intent.target, *intent.amount);
      return;
    case ActionKind::TokenRedeemRequest: {
      // The engine never logs a TOKEN_REDEEM signal of its own: an honored
      // request is a GIVE followed by the TOKEN_PAY that settles it, a denied
      // one is a REFUSE. Honoring is score-blind -- holding the token is the
      // whole credential -- but still respects the honorer's own solvency rule.
      TokenId tok = *intent.token;
      if (!actor.tokens.count(tok) || w.token_holders.at(tok) != actor.id)
        fail(Err::SchemaViolation, "redeem request for a token the actor does not hold");
      AgentState& honorer = w.agent(*intent.target);
      bool honors = honorer.policy.accepts_tokens && honorer.policy.giving_enabled &&
                    honorer.resource >= checked_add(honorer.policy.give_amount,
                                                    honorer.policy.safety_buffer);
      if (honors) {
        apply_give(w, log, honorer, actor.id, honorer.policy.give_amount);
        actor.tokens.erase(tok);
        honorer.tokens.insert(tok);
        w.token_holders[tok] = honorer.id;
        InteractionEvent e = base_event(w, EventKind::TokenPay);
        e.actor = actor.id;
        e.target = honorer.id;
        e.token = tok;
        log.append(e);
      } else {
        apply_refuse(w, log, honorer, actor.id);
      }
      return;
    }
    case ActionKind::Withhold:
      if (intent.target) apply_refuse(w, log, actor, *intent.target);
      return;
  }
}

}  // namespace

WorldState make_world(const ScenarioConfig& cfg) {
  WorldState w;
  w.agents.reserve(cfg.population);
  for (std::uint32_t i = 0; i < cfg.population; ++i) {
    AgentState a;
    a.id = i;
    a.resource = cfg.endowment;
    a.memory_capacity = cfg.effective_memory_capacity();
    a.policy = cfg.policy;
    a.policy.giving_enabled = !cfg.giving_disabled;
    a.policy.defector = cfg.is_defector(i);
    w.agents.push_back(std::move(a));
  }
  return w;
}

WorldState init_world(const ScenarioConfig& cfg, std::uint64_t seed, EventLog& log) {
  WorldState w = make_world(cfg);
  w.decision_rng = decision_stream(seed);
  w.shock_rng = shock_stream(seed);
  std::uint32_t per_agent = cfg.effective_tokens_per_agent();
  TokenId next_token = 0;
  for (std::uint32_t i = 0; i < cfg.population; ++i) {
    for (std::uint32_t j = 0; j < per_agent; ++j) {
      TokenId tok = next_token++;
      w.agents[i].tokens.insert(tok);
      w.token_holders.emplace(tok, i);
      InteractionEvent e = base_event(w, EventKind::Mint);
      e.target = i;
      e.token = tok;
      log.append(e);
    }
  }
  return w;
}

void step(WorldState& w, const ScenarioConfig& cfg, EventLog& log) {
  if (w.tick >= cfg.horizon) fail(Err::HorizonExceeded, "step past the configured horizon");
  const std::size_t first_event = log.size();
  const Amount before = w.total_resources();

  // 1. Income.
  for (AgentState& a : w.agents) {
    Amount amt = income_for(cfg, w.tick, a.id);
    if (amt <= 0) continue;
    a.resource = checked_add(a.resource, amt);
    InteractionEvent e = base_event(w, EventKind::Income);
    e.target = a.id;
    e.amount = amt;
    log.append(e);
  }

  // 2. Project postings: schedule-driven, so replay re-derives them from the
  //    config without any event.
  if (cfg.projects_enabled && w.tick % cfg.projects.period == 0) {
    Project p;
    p.id = w.next_project_id++;
    p.open_tick = w.tick;
    p.deadline = w.tick + cfg.projects.deadline_offset;
    p.maturity = w.tick + cfg.projects.maturity_offset;
    p.threshold = cfg.projects.threshold;
    p.contribution_unit = cfg.projects.contribution_unit;
    p.multiplier = cfg.projects.multiplier;
    p.refund = cfg.projects.refund;
    w.open_projects.emplace(p.id, p);
  }

  // 3. Decisions, ascending id, each applied before the next agent observes.
  for (std::uint32_t i = 0; i < w.agents.size(); ++i) {
    Observation obs = observe(w, i);
    ActionIntent intent = decide_action(w.agents[i], obs, w.decision_rng);
    apply_intent(w, log, w.agents[i], intent);
  }

  // 4. Project settlement: fund-or-refund at the deadline, payout at maturity.
  std::vector<ProjectId> closed;
  for (auto& [pid, p] : w.open_projects) {
    if (!p.funded && w.tick == p.deadline) {
      if (p.pooled() >= p.threshold) {
        p.funded = true;
      } else {
        for (const auto& [aid, c] : p.contributions) {
          Amount refund = floor_mul(c, p.refund);
          w.agent(aid).resource = checked_add(w.agent(aid).resource, refund);
          InteractionEvent e = base_event(w, EventKind::ProjectFail);
          e.target = aid;
          e.amount = refund;  // the one kind where zero is meaningful
          e.project = pid;
          log.append(e);
        }
        closed.push_back(pid);
      }
    }
    if (p.funded && w.tick == p.maturity) {
      for (const auto& [aid, c] : p.contributions) {
        Amount pay = floor_mul(c, p.multiplier);
        if (pay <= 0) continue;
        w.agent(aid).resource = checked_add(w.agent(aid).resource, pay);
        InteractionEvent e = base_event(w, EventKind::ProjectPayout);
        e.target = aid;
        e.amount = pay;
        e.project = pid;
        log.append(e);
      }
      closed.push_back(pid);
    }
  }
  for (ProjectId pid : closed) w.open_projects.erase(pid);

  // 5. Shocks. Every agent consumes exactly one draw per tick whether or not
  //    a shock lands, so paired counterfactual runs face identical weather.
  for (AgentState& a : w.agents) {
    double u = w.shock_rng.next_unit();
    double p = (a.id % 2 == 1 && cfg.p_shock_odd) ? *cfg.p_shock_odd : cfg.p_shock;
    if (u < p) {
      Amount loss = std::min(cfg.shock_loss, a.resource);
      if (loss <= 0) continue;
      a.resource -= loss;
      InteractionEvent e = base_event(w, EventKind::Shock);
      e.target = a.id;
      e.amount = loss;
      log.append(e);
    }
  }

  // 6. Consumption, clamped at zero.
  for (AgentState& a : w.agents) {
    Amount c = std::min(cfg.consumption, a.resource);
    if (c <= 0) continue;
    a.resource -= c;
    InteractionEvent e = base_event(w, EventKind::Consume);
    e.target = a.id;
    e.amount = c;
    log.append(e);
  }

  // 7. Behavioral updating.
  for (AgentState& a : w.agents) update_strategy(a);

  // Conservation tripwire: the net resource movement this tick must equal
  // what the emitted events claim. Transfers (GIVE, TOKEN_PAY) and REFUSE
  // are neutral; escrow enters through INVEST and leaves through
  // PROJECT_PAYOUT / PROJECT_FAIL, so resources alone balance exactly.
  Amount delta = 0;
  for (std::size_t i = first_event; i < log.size(); ++i) {
    const InteractionEvent& e = log.events()[i];
    switch (e.kind) {
      case EventKind::Income:
      case EventKind::ProjectPayout:
      case EventKind::ProjectFail:
        delta = checked_add(delta, *e.amount);
        break;
      case EventKind::Consume:
      case EventKind::Shock:
      case EventKind::Invest:
        delta = checked_sub(delta, *e.amount);
        break;
      default:
        break;
    }
  }
  if (w.total_resources() != checked_add(before, delta))
    fail(Err::ConservationViolation, "tick delta does not match emitted events");

  w.tick += 1;
  w.next_seq = 0;
}

EventLog run(const ScenarioConfig& cfg, std::uint64_t seed, WorldState& final_world) {
  std::vector<std::string> violations = validate_scenario(cfg);
  if (!violations.empty()) fail(Err::ValidationError, violations.front());
  EventLog log(LogHeader{1, seed, config_digest(cfg)});
  WorldState w = init_world(cfg, seed, log);
  for (Tick t = 0; t < cfg.horizon; ++t) step(w, cfg, log);
  final_world = std::move(w);
  return log;
}

EventLog run(const ScenarioConfig& cfg, std::uint64_t seed) {
  WorldState w;
  return run(cfg, seed, w);
}

}  // namespace reciprosim
