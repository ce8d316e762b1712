#include "reciprosim/agent.hpp"

#include <algorithm>

namespace reciprosim {

Rational reciprocity_score(const PartnerRecord& rec) {
  std::uint64_t total = rec.helpful + rec.unhelpful;
  if (total == 0) return Rational(0);
  return Rational::make(static_cast<std::int64_t>(rec.helpful) -
                            static_cast<std::int64_t>(rec.unhelpful),
                        static_cast<std::int64_t>(total));
}

Rational reciprocity_score(const AgentState& s, AgentId partner) {
  auto it = s.memory.find(partner);
  if (it == s.memory.end()) return Rational(0);
  return reciprocity_score(it->second);
}

bool is_blocked(const PartnerRecord& rec) {
  // score <= -1/2 with (h - u)/(h + u): cross-multiplied, 3h <= u.
  std::uint64_t total = rec.helpful + rec.unhelpful;
  return total >= 4 && 3 * rec.helpful <= rec.unhelpful;
}

namespace {

// Returns the record for `partner`, inserting (with LRU eviction) if absent.
// nullptr when capacity is zero.
PartnerRecord* ensure_record(AgentState& s, AgentId partner) {
  if (partner == s.id) fail(Err::SelfInteraction, "agent recording itself");
  auto it = s.memory.find(partner);
  if (it != s.memory.end()) return &it->second;
  if (s.memory_capacity) {
    if (*s.memory_capacity == 0) return nullptr;
    if (s.memory.size() >= *s.memory_capacity) {
      // Evict the least-recently-interacted record; ties to the lowest id.
      auto victim = s.memory.begin();
      for (auto m = s.memory.begin(); m != s.memory.end(); ++m)
        if (m->second.last_tick < victim->second.last_tick) victim = m;
      s.memory.erase(victim);
    }
  }
  return &s.memory.emplace(partner, PartnerRecord{}).first->second;
}

}  // namespace

void record_interaction(AgentState& s, AgentId partner, Outcome outcome,
                        std::optional<Amount> amount, Tick tick) {
  PartnerRecord* rec = ensure_record(s, partner);
  if (!rec) return;
  if (outcome == Outcome::HelpedMe) {
    rec->helpful += 1;
    if (amount) rec->received = checked_add(rec->received, *amount);
  } else {
    rec->unhelpful += 1;
  }
  rec->last_tick = tick;
}

void record_gift(AgentState& s, AgentId partner, Amount amount, Tick tick) {
  PartnerRecord* rec = ensure_record(s, partner);
  if (!rec) return;
  rec->given = checked_add(rec->given, amount);
  rec->last_tick = tick;
}

Selection select_partner(const AgentState& s, const std::vector<Candidate>& candidates,
                         SplitMix64& rng) {
  const PolicyParams& p = s.policy;

  if (p.insurance_norm) {
    const Candidate* neediest = nullptr;
    for (const Candidate& c : candidates) {
      if (c.resource >= p.need_threshold) continue;
      if (!p.need_overrides_blocking) {
        auto it = s.memory.find(c.id);
        if (it != s.memory.end() && it->second.blocked) continue;
      }
      if (!neediest || c.resource < neediest->resource ||
          (c.resource == neediest->resource && c.id < neediest->id))
        neediest = &c;
    }
    if (neediest) return {neediest->id, true};
  }

  // Scored branch: best-known non-blocked partner; ties resolve to the
  // lowest id whatever order the candidates arrive in.
  const Candidate* best = nullptr;
  Rational best_score;
  for (const Candidate& c : candidates) {
    auto it = s.memory.find(c.id);
    if (it == s.memory.end() || it->second.blocked) continue;
    Rational score = reciprocity_score(it->second);
    if (!best || score > best_score || (score == best_score && c.id < best->id)) {
      best = &c;
      best_score = score;
    }
  }
  if (best && best_score >= p.theta_coop) return {best->id, false};

  // Stranger branch: one draw whenever a stranger exists, even at p0 == 0,
  // so the draw count is a pure function of the reached branches. The
  // lowest-id stranger is the prospective recipient.
  const Candidate* stranger = nullptr;
  for (const Candidate& c : candidates) {
    if (s.memory.count(c.id)) continue;
    if (!stranger || c.id < stranger->id) stranger = &c;
  }
  if (stranger) {
    double u = rng.next_unit();
    if (u < p.stranger_generosity) return {stranger->id, false};
  }
  return {std::nullopt, false};
}

ActionIntent decide_action(const AgentState& s, const Observation& obs, SplitMix64& rng) {
  const PolicyParams& p = s.policy;
  if (p.defector) return {};

  // 1. Investment: lowest-id feasible project clearing the ROI threshold.
  for (const ProjectView& pv : obs.projects) {
    if (!pv.feasible) continue;
    if (pv.multiplier >= p.roi_threshold && s.resource >= pv.contribution_unit) {
      ActionIntent a;
      a.kind = ActionKind::Invest;
      a.project = pv.id;
      a.amount = pv.contribution_unit;
      return a;
    }
  }

  // 2. Giving.
  std::optional<AgentId> selected;
  if (p.giving_enabled) {
    Selection sel = select_partner(s, obs.candidates, rng);
    if (sel.id) {
      if (sel.need_based) {
        Amount amt = std::min(p.need_gift, checked_sub(s.resource, p.safety_buffer));
        if (amt > 0) {
          ActionIntent a;
          a.kind = ActionKind::GiveNeed;
          a.target = sel.id;
          a.amount = amt;
          return a;
        }
      } else if (s.resource >= checked_add(p.give_amount, p.safety_buffer)) {
        ActionIntent a;
        a.kind = ActionKind::Give;
        a.target = sel.id;
        a.amount = p.give_amount;
        return a;
      }
      selected = sel.id;
    }
  }

  // 3. Token redemption when short of the need threshold.
  if (!s.tokens.empty() && s.resource < p.need_threshold) {
    const Candidate* best = nullptr;
    Rational best_score;
    for (const Candidate& c : obs.candidates) {
      if (!c.accepts_tokens) continue;
      Rational score = reciprocity_score(s, c.id);
      if (!best || score > best_score) {
        best = &c;
        best_score = score;
      }
    }
    if (best) {
      ActionIntent a;
      a.kind = ActionKind::TokenRedeemRequest;
      a.target = best->id;
      a.token = *s.tokens.begin();
      return a;
    }
  }

  // 4. Withhold; remembers who was selected so the refusal can be logged.
  ActionIntent a;
  a.target = selected;
  return a;
}

void update_strategy(AgentState& s) {
  for (auto& [id, rec] : s.memory) rec.blocked = is_blocked(rec);
}

}  // namespace reciprosim
