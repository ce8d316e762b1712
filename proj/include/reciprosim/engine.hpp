#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "reciprosim/agent.hpp"
#include "reciprosim/log.hpp"
#include "reciprosim/rng.hpp"
#include "reciprosim/scenario.hpp"

namespace reciprosim {

struct Project {
  ProjectId id = 0;
  Tick open_tick = 0;
  Tick deadline = 0;  // contributions accepted while tick < deadline
  Tick maturity = 0;
  Amount threshold = 0;
  Amount contribution_unit = 0;
  Rational multiplier{1};
  Rational refund{0};
  bool funded = false;
  std::map<AgentId, Amount> contributions;  // ordered by contributor id

  Amount pooled() const;

  bool operator==(const Project&) const = default;
};

// Full mutable simulation state. A run is strictly single-threaded; all
// containers iterate in id order so identical (config, seed) reproduce
// identical logs byte for byte.
struct WorldState {
  Tick tick = 0;
  Seq next_seq = 0;  // next seq within the current tick
  std::vector<AgentState> agents;
  std::map<ProjectId, Project> open_projects;
  std::map<TokenId, AgentId> token_holders;
  ProjectId next_project_id = 0;
  SplitMix64 decision_rng{0};
  SplitMix64 shock_rng{0};

  const AgentState& agent(AgentId id) const { return agents.at(id); }
  AgentState& agent(AgentId id) { return agents.at(id); }
  Amount total_resources() const;
  Amount total_escrow() const;
};

// Agents at their endowments, policies and defector flags applied; no rng
// seeding, no tokens. Shared by the engine and the replayer.
WorldState make_world(const ScenarioConfig& cfg);

// Builds the initial world and logs MINT events (tick 0) into `log`.
WorldState init_world(const ScenarioConfig& cfg, std::uint64_t seed, EventLog& log);

// Advances one tick, appending every emitted event to `log`. Phases, in
// order: income, project postings, decisions (ascending id, applied
// immediately), project settlement, shocks, consumption, behavioral
// updating. Throws HorizonExceeded at or past the horizon.
void step(WorldState& world, const ScenarioConfig& cfg, EventLog& log);

// init + horizon steps. Pure function of (cfg, seed).
EventLog run(const ScenarioConfig& cfg, std::uint64_t seed);
EventLog run(const ScenarioConfig& cfg, std::uint64_t seed, WorldState& final_world);

}  // namespace reciprosim
