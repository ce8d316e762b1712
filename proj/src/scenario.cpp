#include "reciprosim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>

namespace reciprosim {

const char* scenario_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Trade: return "TRADE";
    case ScenarioKind::Credit: return "CREDIT";
    case ScenarioKind::Insurance: return "INSURANCE";
    case ScenarioKind::Token: return "TOKEN";
    case ScenarioKind::Investment: return "INVESTMENT";
  }
  return "?";
}

ScenarioKind scenario_from_name(const std::string& s) {
  for (ScenarioKind k : {ScenarioKind::Trade, ScenarioKind::Credit, ScenarioKind::Insurance,
                         ScenarioKind::Token, ScenarioKind::Investment})
    if (s == scenario_name(k)) return k;
  fail(Err::ConfigInvalid, "unknown scenario kind '" + s + "'");
}

std::uint32_t ScenarioConfig::defector_count() const {
  // floor(N * fraction), exact.
  __int128 n = __int128(population) * defector_fraction.num;
  return static_cast<std::uint32_t>(n / defector_fraction.den);
}

bool ScenarioConfig::is_defector(AgentId id) const {
  std::uint32_t k = defector_count();
  return k > 0 && id >= population - k;
}

std::optional<std::uint32_t> ScenarioConfig::effective_memory_capacity() const {
  if (memory_disabled) return 0u;
  return memory_capacity;
}

std::uint32_t ScenarioConfig::effective_tokens_per_agent() const {
  return tokens_disabled ? 0u : tokens_per_agent;
}

Amount income_for(const ScenarioConfig& cfg, Tick tick, AgentId id) {
  switch (cfg.income_mode) {
    case IncomeMode::Uniform:
      return cfg.income;
    case IncomeMode::AntiPhase: {
      // Two classes by id parity, paid 2y in alternating phases of length P.
      bool even_phase = (tick / cfg.phase_period) % 2 == 0;
      bool class_a = id % 2 == 0;
      return even_phase == class_a ? checked_mul(cfg.income, 2) : 0;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Defaults, override keys, canonical form
// ---------------------------------------------------------------------------

namespace {

ScenarioConfig kind_defaults(ScenarioKind kind) {
  ScenarioConfig c;
  c.kind = kind;
  switch (kind) {
    case ScenarioKind::Trade:
      // Simultaneous symmetric exchange. The buffer keeps every giver solvent
      // (>= nu + g) so nobody ever drops below the need threshold.
      break;
    case ScenarioKind::Credit:
      // Anti-phase income with zero average drift; the high buffer gates
      // giving on phase surplus, which is what makes repayment delayed.
      // theta below zero keeps bonds alive through the lean-phase refusals
      // that a surplus gate necessarily produces (score hovers near zero),
      // and the large gift makes each unreciprocated flush cross the
      // episode-opening threshold on its own. Bounded memory matters: with
      // unlimited records the argmax drifts across many near-zero scores and
      // stable pairs never lock in.
      c.income_mode = IncomeMode::AntiPhase;
      c.income = 3;
      c.consumption = 3;
      c.phase_period = 10;
      c.memory_capacity = 8;
      c.policy.theta_coop = Rational(-1, 10);
      c.policy.give_amount = 10;
      c.policy.stranger_generosity = 0.2;
      c.policy.safety_buffer = 45;
      break;
    case ScenarioKind::Insurance:
      c.endowment = 20;
      c.p_shock = 0.06;
      c.shock_loss = 15;
      c.policy.safety_buffer = 3;
      c.policy.insurance_norm = true;
      break;
    case ScenarioKind::Token:
      // Thin memory over a large population, no stranger generosity: the only
      // route to cooperation between strangers is token redemption.
      c.population = 60;
      c.endowment = 8;
      c.income = 1;
      c.consumption = 1;
      c.tokens_per_agent = 1;
      c.memory_capacity = 3;
      c.policy.stranger_generosity = 0.0;
      c.policy.safety_buffer = 0;
      c.policy.accepts_tokens = true;
      break;
    case ScenarioKind::Investment:
      c.projects_enabled = true;
      break;
  }
  return c;
}

enum class ValType { U32, Tick, Amount, Prob, OptProb, Rat, Bool, OptCap };

struct KeySpec {
  const char* key;
  ValType type;
};

// Keys every kind carries.
constexpr KeySpec kCommonKeys[] = {
    {"population", ValType::U32},
    {"horizon", ValType::Tick},
    {"endowment", ValType::Amount},
    {"income", ValType::Amount},
    {"consumption", ValType::Amount},
    {"memory_capacity", ValType::OptCap},
    {"defector_fraction", ValType::Rat},
    {"theta_coop", ValType::Rat},
    {"give_amount", ValType::Amount},
    {"stranger_generosity", ValType::Prob},
    {"need_threshold", ValType::Amount},
    {"safety_buffer", ValType::Amount},
    {"need_gift", ValType::Amount},
    {"roi_threshold", ValType::Rat},
    {"accepts_tokens", ValType::Bool},
    {"insurance_norm", ValType::Bool},
    {"need_overrides_blocking", ValType::Bool},
    {"giving_disabled", ValType::Bool},
    {"tokens_disabled", ValType::Bool},
    {"memory_disabled", ValType::Bool},
};

constexpr KeySpec kCreditKeys[] = {{"phase_period", ValType::Tick}};
constexpr KeySpec kInsuranceKeys[] = {
    {"p_shock", ValType::Prob},
    {"p_shock_odd", ValType::OptProb},
    {"shock_loss", ValType::Amount},
};
constexpr KeySpec kTokenKeys[] = {{"tokens_per_agent", ValType::U32}};
constexpr KeySpec kInvestmentKeys[] = {
    {"project_period", ValType::Tick},
    {"project_cost", ValType::Amount},
    {"project_threshold", ValType::Amount},
    {"project_deadline", ValType::Tick},
    {"project_maturity", ValType::Tick},
    {"project_multiplier", ValType::Rat},
    {"project_refund", ValType::Rat},
};

std::vector<KeySpec> keys_for(ScenarioKind kind) {
  std::vector<KeySpec> keys(std::begin(kCommonKeys), std::end(kCommonKeys));
  auto add = [&keys](const KeySpec* b, const KeySpec* e) { keys.insert(keys.end(), b, e); };
  switch (kind) {
    case ScenarioKind::Trade: break;
    case ScenarioKind::Credit: add(std::begin(kCreditKeys), std::end(kCreditKeys)); break;
    case ScenarioKind::Insurance:
      add(std::begin(kInsuranceKeys), std::end(kInsuranceKeys));
      break;
    case ScenarioKind::Token: add(std::begin(kTokenKeys), std::end(kTokenKeys)); break;
    case ScenarioKind::Investment:
      add(std::begin(kInvestmentKeys), std::end(kInvestmentKeys));
      break;
  }
  std::sort(keys.begin(), keys.end(),
            [](const KeySpec& a, const KeySpec& b) { return std::strcmp(a.key, b.key) < 0; });
  return keys;
}

std::string render_double(double v) {
  char buf[48];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
  if (s.empty()) fail(Err::ParseError, "empty number");
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    fail(Err::ParseError, "bad number '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  fail(Err::ParseError, "bad bool '" + s + "' (want true/false)");
}

template <typename T>
T parse_unsigned(const std::string& s) {
  T v{};
  if (s.empty()) fail(Err::ParseError, "empty integer");
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 10);
  if (ec != std::errc() || ptr != s.data() + s.size())
    fail(Err::ParseError, "bad integer '" + s + "'");
  return v;
}

Amount parse_amount(const std::string& s) {
  // Amounts in configs are non-negative decimals.
  std::uint64_t v = parse_unsigned<std::uint64_t>(s);
  if (v > static_cast<std::uint64_t>(INT64_MAX)) fail(Err::ParseError, "amount out of range");
  return static_cast<Amount>(v);
}

// Field accessors by key, shared by the renderer and the override applier.
std::string get_value(const ScenarioConfig& c, const std::string& key) {
  if (key == "population") return std::to_string(c.population);
  if (key == "horizon") return std::to_string(c.horizon);
  if (key == "endowment") return std::to_string(c.endowment);
  if (key == "income") return std::to_string(c.income);
  if (key == "consumption") return std::to_string(c.consumption);
  if (key == "memory_capacity")
    return c.memory_capacity ? std::to_string(*c.memory_capacity) : "unlimited";
  if (key == "defector_fraction") return c.defector_fraction.str();
  if (key == "theta_coop") return c.policy.theta_coop.str();
  if (key == "give_amount") return std::to_string(c.policy.give_amount);
  if (key == "stranger_generosity") return render_double(c.policy.stranger_generosity);
  if (key == "need_threshold") return std::to_string(c.policy.need_threshold);
  if (key == "safety_buffer") return std::to_string(c.policy.safety_buffer);
  if (key == "need_gift") return std::to_string(c.policy.need_gift);
  if (key == "roi_threshold") return c.policy.roi_threshold.str();
  if (key == "accepts_tokens") return c.policy.accepts_tokens ? "true" : "false";
  if (key == "insurance_norm") return c.policy.insurance_norm ? "true" : "false";
  if (key == "need_overrides_blocking") return c.policy.need_overrides_blocking ? "true" : "false";
  if (key == "giving_disabled") return c.giving_disabled ? "true" : "false";
  if (key == "tokens_disabled") return c.tokens_disabled ? "true" : "false";
  if (key == "memory_disabled") return c.memory_disabled ? "true" : "false";
  if (key == "phase_period") return std::to_string(c.phase_period);
  if (key == "p_shock") return render_double(c.p_shock);
  if (key == "p_shock_odd") return c.p_shock_odd ? render_double(*c.p_shock_odd) : "-";
  if (key == "shock_loss") return std::to_string(c.shock_loss);
  if (key == "tokens_per_agent") return std::to_string(c.tokens_per_agent);
  if (key == "project_period") return std::to_string(c.projects.period);
  if (key == "project_cost") return std::to_string(c.projects.contribution_unit);
  if (key == "project_threshold") return std::to_string(c.projects.threshold);
  if (key == "project_deadline") return std::to_string(c.projects.deadline_offset);
  if (key == "project_maturity") return std::to_string(c.projects.maturity_offset);
  if (key == "project_multiplier") return c.projects.multiplier.str();
  if (key == "project_refund") return c.projects.refund.str();
  fail(Err::ConfigInvalid, "no such field '" + key + "'");
}

void set_value(ScenarioConfig& c, const std::string& key, ValType type,
               const std::string& value) {
  switch (type) {
    case ValType::U32: {
      std::uint32_t v = parse_unsigned<std::uint32_t>(value);
      if (key == "population") c.population = v;
      else if (key == "tokens_per_agent") c.tokens_per_agent = v;
      return;
    }
    case ValType::Tick: {
      Tick v = parse_unsigned<Tick>(value);
      if (key == "horizon") c.horizon = v;
      else if (key == "phase_period") c.phase_period = v;
      else if (key == "project_period") c.projects.period = v;
      else if (key == "project_deadline") c.projects.deadline_offset = v;
      else if (key == "project_maturity") c.projects.maturity_offset = v;
      return;
    }
    case ValType::Amount: {
      Amount v = parse_amount(value);
      if (key == "endowment") c.endowment = v;
      else if (key == "income") c.income = v;
      else if (key == "consumption") c.consumption = v;
      else if (key == "give_amount") c.policy.give_amount = v;
      else if (key == "need_threshold") c.policy.need_threshold = v;
      else if (key == "safety_buffer") c.policy.safety_buffer = v;
      else if (key == "need_gift") c.policy.need_gift = v;
      else if (key == "shock_loss") c.shock_loss = v;
      else if (key == "project_cost") c.projects.contribution_unit = v;
      else if (key == "project_threshold") c.projects.threshold = v;
      return;
    }
    case ValType::Prob: {
      double v = parse_double(value);
      if (key == "stranger_generosity") c.policy.stranger_generosity = v;
      else if (key == "p_shock") c.p_shock = v;
      return;
    }
    case ValType::OptProb: {
      if (value == "-") c.p_shock_odd.reset();
      else c.p_shock_odd = parse_double(value);
      return;
    }
    case ValType::Rat: {
      Rational v = Rational::parse(value);
      if (key == "defector_fraction") c.defector_fraction = v;
      else if (key == "theta_coop") c.policy.theta_coop = v;
      else if (key == "roi_threshold") c.policy.roi_threshold = v;
      else if (key == "project_multiplier") c.projects.multiplier = v;
      else if (key == "project_refund") c.projects.refund = v;
      return;
    }
    case ValType::Bool: {
      bool v = parse_bool(value);
      if (key == "accepts_tokens") c.policy.accepts_tokens = v;
      else if (key == "insurance_norm") c.policy.insurance_norm = v;
      else if (key == "need_overrides_blocking") c.policy.need_overrides_blocking = v;
      else if (key == "giving_disabled") c.giving_disabled = v;
      else if (key == "tokens_disabled") c.tokens_disabled = v;
      else if (key == "memory_disabled") c.memory_disabled = v;
      return;
    }
    case ValType::OptCap: {
      if (value == "unlimited") c.memory_capacity.reset();
      else c.memory_capacity = parse_unsigned<std::uint32_t>(value);
      return;
    }
  }
}

}  // namespace

std::vector<std::string> override_keys(ScenarioKind kind) {
  std::vector<std::string> out;
  for (const KeySpec& ks : keys_for(kind)) out.push_back(ks.key);
  return out;
}

ScenarioConfig make_scenario(ScenarioKind kind,
                             const std::map<std::string, std::string>& overrides) {
  ScenarioConfig cfg = kind_defaults(kind);
  std::vector<KeySpec> keys = keys_for(kind);
  for (const auto& [key, value] : overrides) {
    auto it = std::find_if(keys.begin(), keys.end(),
                           [&key](const KeySpec& ks) { return key == ks.key; });
    if (it == keys.end())
      fail(Err::OverrideRejected,
           "'" + key + "' is not a " + scenario_name(kind) + " field");
    set_value(cfg, key, it->type, value);
  }
  // Giving is structural in the policy switch, not the params.
  cfg.policy.giving_enabled = !cfg.giving_disabled;
  cfg.policy.defector = false;
  return cfg;
}

std::string canonical_text(const ScenarioConfig& cfg) {
  std::string out = "[scenario]\n";
  out += "kind = ";
  out += scenario_name(cfg.kind);
  out += '\n';
  for (const KeySpec& ks : keys_for(cfg.kind)) {
    out += ks.key;
    out += " = ";
    out += get_value(cfg, ks.key);
    out += '\n';
  }
  return out;
}

std::uint64_t config_digest(const ScenarioConfig& cfg) { return fnv1a64(canonical_text(cfg)); }

std::vector<std::string> validate_scenario(const ScenarioConfig& cfg) {
  std::vector<std::string> v;
  auto bad = [&v](const std::string& msg) { v.push_back(msg); };
  if (cfg.population < 2) bad("population must be at least 2");
  if (cfg.horizon < 1) bad("horizon must be at least 1");
  if (cfg.endowment < 0) bad("endowment must be non-negative");
  if (cfg.income < 0) bad("income must be non-negative");
  // Average income is y per tick in both schedules (anti-phase pays 2y half
  // the time); desk-scale solvency requires consumption within it.
  if (cfg.consumption > cfg.income) bad("consumption must not exceed average income");
  if (cfg.p_shock < 0.0 || cfg.p_shock > 1.0) bad("p_shock must lie in [0, 1]");
  if (cfg.p_shock_odd && (*cfg.p_shock_odd < 0.0 || *cfg.p_shock_odd > 1.0))
    bad("p_shock_odd must lie in [0, 1]");
  if (cfg.p_shock > 0.0 && cfg.shock_loss < 1) bad("shock_loss must be positive under shocks");
  if (cfg.income_mode == IncomeMode::AntiPhase && cfg.phase_period < 1)
    bad("phase_period must be at least 1");
  const PolicyParams& p = cfg.policy;
  if (p.give_amount < 1) bad("give_amount must be at least 1");
  if (p.need_gift < 1) bad("need_gift must be at least 1");
  if (p.need_threshold < 0) bad("need_threshold must be non-negative");
  if (p.safety_buffer < 0) bad("safety_buffer must be non-negative");
  if (p.stranger_generosity < 0.0 || p.stranger_generosity > 1.0)
    bad("stranger_generosity must lie in [0, 1]");
  if (p.theta_coop < Rational(-1) || p.theta_coop > Rational(1))
    bad("theta_coop must lie in [-1, 1]");
  if (p.roi_threshold < Rational(0)) bad("roi_threshold must be non-negative");
  if (cfg.defector_fraction < Rational(0) || cfg.defector_fraction > Rational(1))
    bad("defector_fraction must lie in [0, 1]");
  if (cfg.kind == ScenarioKind::Token && cfg.tokens_per_agent < 1)
    bad("TOKEN requires tokens_per_agent >= 1");
  if (cfg.projects_enabled) {
    const ProjectSchedule& ps = cfg.projects;
    if (ps.period < 1) bad("project_period must be at least 1");
    if (ps.contribution_unit < 1) bad("project_cost must be at least 1");
    if (ps.threshold < 1) bad("project_threshold must be at least 1");
    if (ps.deadline_offset < 1) bad("project_deadline must be at least 1");
    if (ps.maturity_offset <= ps.deadline_offset)
      bad("project_maturity must exceed project_deadline");
    if (ps.multiplier <= Rational(0)) bad("project_multiplier must be positive");
    if (ps.refund < Rational(0) || ps.refund > Rational(1))
      bad("project_refund must lie in [0, 1]");
  }
  return v;
}

ScenarioConfig apply_control(const ScenarioConfig& cfg, const std::string& control) {
  ScenarioConfig out = cfg;
  if (control == "giving_disabled") out.giving_disabled = true;
  else if (control == "tokens_disabled") out.tokens_disabled = true;
  else if (control == "memory_disabled") out.memory_disabled = true;
  else fail(Err::ConfigInvalid, "unknown control switch '" + control + "'");
  out.policy.giving_enabled = !out.giving_disabled;
  return out;
}

void check_pairing(const ScenarioConfig& treatment, const ScenarioConfig& control,
                   const std::string& control_switch) {
  if (treatment.kind != control.kind)
    fail(Err::PairingMismatch, "scenario kinds differ");
  std::vector<std::string> diffs;
  for (const KeySpec& ks : keys_for(treatment.kind)) {
    if (get_value(treatment, ks.key) != get_value(control, ks.key)) diffs.push_back(ks.key);
  }
  if (diffs.size() != 1 || diffs[0] != control_switch ||
      get_value(control, control_switch) != "true" ||
      get_value(treatment, control_switch) != "false") {
    std::string what = "control differs in {";
    for (std::size_t i = 0; i < diffs.size(); ++i)
      what += (i ? "," : "") + diffs[i];
    what += "}, expected exactly {" + control_switch + "}";
    fail(Err::PairingMismatch, what);
  }
}

}  // namespace reciprosim
