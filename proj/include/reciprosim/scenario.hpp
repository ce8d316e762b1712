#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reciprosim/agent.hpp"
#include "reciprosim/rational.hpp"
#include "reciprosim/types.hpp"

namespace reciprosim {

enum class ScenarioKind { Trade, Credit, Insurance, Token, Investment };

const char* scenario_name(ScenarioKind k);              // "TRADE", ...
ScenarioKind scenario_from_name(const std::string& s);  // throws ConfigInvalid

enum class IncomeMode { Uniform, AntiPhase };

// Deterministic project posting rule: one project every `period` ticks
// starting at tick 0; contributions close at open+deadline_offset, funded
// projects pay at open+maturity_offset.
struct ProjectSchedule {
  Tick period = 40;
  Amount contribution_unit = 5;
  Amount threshold = 25;
  Tick deadline_offset = 5;
  Tick maturity_offset = 15;
  Rational multiplier{3};
  Rational refund{1, 2};  // lambda

  bool operator==(const ProjectSchedule&) const = default;
};

// Complete world recipe for one run. Everything that shapes the event stream
// lives here; the canonical text of this struct is what the log digest binds.
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Trade;
  std::uint32_t population = 20;  // N
  Tick horizon = 2000;
  Amount endowment = 50;
  Amount income = 2;       // y
  Amount consumption = 1;  // c-hat
  IncomeMode income_mode = IncomeMode::Uniform;
  Tick phase_period = 10;  // P; CREDIT only
  double p_shock = 0.0;
  std::optional<double> p_shock_odd;  // per-class override; odd ids
  Amount shock_loss = 10;             // L
  std::uint32_t tokens_per_agent = 0;
  std::optional<std::uint32_t> memory_capacity;  // nullopt = unlimited
  bool projects_enabled = false;
  ProjectSchedule projects;
  Rational defector_fraction{0};
  PolicyParams policy;  // shared by all non-defector agents

  // Control switches. Flipping exactly one of these is what makes a paired
  // counterfactual; they are first-class config fields so the pairing check
  // can diff canonical texts field by field.
  bool giving_disabled = false;
  bool tokens_disabled = false;
  bool memory_disabled = false;

  std::uint32_t defector_count() const;
  bool is_defector(AgentId id) const;
  // Effective values after switches.
  std::optional<std::uint32_t> effective_memory_capacity() const;
  std::uint32_t effective_tokens_per_agent() const;

  bool operator==(const ScenarioConfig&) const = default;
};

// Kind defaults with a strict override map (string key -> string value, the
// same grammar as config files). Unknown keys and keys that do not apply to
// the kind raise OverrideRejected; malformed values raise ParseError.
ScenarioConfig make_scenario(ScenarioKind kind,
                             const std::map<std::string, std::string>& overrides = {});

// Keys accepted by make_scenario for a kind (sorted).
std::vector<std::string> override_keys(ScenarioKind kind);

// Canonical serialized form: "[scenario]\n" then "key = value\n" for every
// key of the kind, sorted. Whitespace-normalized, comment-free, '\n' endings.
// The log header digest is fnv1a64 of exactly this text.
std::string canonical_text(const ScenarioConfig& cfg);
std::uint64_t config_digest(const ScenarioConfig& cfg);

// All constraint violations, empty when valid. ValidationError is raised by
// callers that need a hard failure.
std::vector<std::string> validate_scenario(const ScenarioConfig& cfg);

// Returns a copy with the named switch flipped on.
// Accepted names: giving_disabled, tokens_disabled, memory_disabled.
ScenarioConfig apply_control(const ScenarioConfig& cfg, const std::string& control);

// Pairing check for counterfactual analysis: configs must be identical except
// for the named switch. Throws PairingMismatch.
void check_pairing(const ScenarioConfig& treatment, const ScenarioConfig& control,
                   const std::string& control_switch);

// Per-tick income for an agent under the schedule.
Amount income_for(const ScenarioConfig& cfg, Tick tick, AgentId id);

}  // namespace reciprosim
