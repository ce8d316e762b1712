// Macrostate detectors: credit excursions (scan vs brute-force oracle),
// insurance lift/buffering, token chains, investment returns, aggregation.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "reciprosim/detectors.hpp"
#include "reciprosim/engine.hpp"
#include "reciprosim/error.hpp"
#include "reciprosim/log.hpp"
#include "reciprosim/rng.hpp"
#include "reciprosim/scenario.hpp"

using namespace reciprosim;

namespace {

template <typename F>
std::string expect_err(Err want, F&& fn) {
  try {
    fn();
  } catch (const SimError& e) {
    CHECK(e.code() == want);
    return e.what();
  }
  FAIL_CHECK("expected a SimError, none was thrown");
  return {};
}

InteractionEvent ev(Tick tick, Seq seq, EventKind kind, std::optional<AgentId> actor,
                    std::optional<AgentId> target, std::optional<Amount> amount,
                    std::optional<TokenId> token = std::nullopt,
                    std::optional<ProjectId> project = std::nullopt) {
  InteractionEvent e;
  e.tick = tick;
  e.seq = seq;
  e.kind = kind;
  e.actor = actor;
  e.target = target;
  e.amount = amount;
  e.token = token;
  e.project = project;
  return e;
}

// Appends GIVEs given as (tick, actor, target, amount), assigning seqs.
EventLog give_log(const std::vector<std::tuple<Tick, AgentId, AgentId, Amount>>& gives) {
  EventLog log;
  Tick cur = 0;
  Seq seq = 0;
  bool first = true;
  for (const auto& [t, a, b, amt] : gives) {
    if (first || t != cur) seq = 0;
    first = false;
    cur = t;
    log.append(ev(t, seq++, EventKind::Give, a, b, amt));
  }
  return log;
}

const CreditParams kTight{3, 0, 50, 2};  // delta, epsilon, window, min_duration

}  // namespace

// ---------------------------------------------------------------------------
// Credit: pinned fixtures
// ---------------------------------------------------------------------------

TEST_CASE("credit: a gift repaid later is one episode") {
  EventLog log = give_log({{3, 0, 1, 5}, {9, 1, 0, 5}});
  for (ScanMode mode : {ScanMode::Serial, ScanMode::Parallel, ScanMode::Auto}) {
    CreditReport r = detect_credit(log, kTight, mode);
    REQUIRE(r.episodes.size() == 1);
    CHECK(r.episodes[0] == CreditEpisode{0, 1, 3, 9, 5});
    CHECK(r.unresolved == 0);
  }
  CHECK(oracle_credit(log, kTight) == detect_credit(log, kTight));
}

TEST_CASE("credit: immediate repayment is exchange, not credit") {
  // Below min_duration = 2.
  CreditReport r = detect_credit(give_log({{3, 0, 1, 5}, {4, 1, 0, 5}}), kTight);
  CHECK(r.episodes.empty());
  CHECK(r.unresolved == 0);
  // Same-tick flows net to zero before the balance is sampled.
  CreditReport r2 = detect_credit(give_log({{3, 0, 1, 5}, {3, 1, 0, 5}}), kTight);
  CHECK(r2.episodes.empty());
  CHECK(r2.unresolved == 0);
}

TEST_CASE("credit: window boundary splits episode from unresolved") {
  CreditReport at = detect_credit(give_log({{0, 0, 1, 5}, {50, 1, 0, 5}}), kTight);
  REQUIRE(at.episodes.size() == 1);  // duration 50 == window still counts
  CHECK(at.episodes[0].close_tick == 50);
  CHECK(at.unresolved == 0);

  CreditReport past = detect_credit(give_log({{0, 0, 1, 5}, {51, 1, 0, 5}}), kTight);
  CHECK(past.episodes.empty());
  CHECK(past.unresolved == 1);
}

TEST_CASE("credit: an unrepaid excursion is unresolved at log end") {
  CreditReport r = detect_credit(give_log({{3, 0, 1, 5}}), kTight);
  CHECK(r.episodes.empty());
  CHECK(r.unresolved == 1);
}

TEST_CASE("credit: partial repayment closes only at epsilon") {
  // Balance 7 -> 4 -> 0 with epsilon 0: still open at 4.
  CreditReport r =
      detect_credit(give_log({{1, 0, 1, 7}, {5, 1, 0, 3}, {12, 1, 0, 4}}), kTight);
  REQUIRE(r.episodes.size() == 1);
  CHECK(r.episodes[0] == CreditEpisode{0, 1, 1, 12, 7});
  // A looser epsilon of 4 accepts near-par at tick 5 already.
  CreditParams loose = kTight;
  loose.epsilon = 4;
  loose.delta = 5;
  CreditReport r2 =
      detect_credit(give_log({{1, 0, 1, 7}, {5, 1, 0, 3}, {12, 1, 0, 4}}), loose);
  REQUIRE(r2.episodes.size() == 1);
  CHECK(r2.episodes[0] == CreditEpisode{0, 1, 1, 5, 7});
}

TEST_CASE("credit: overshooting repayment can open the reverse episode") {
  EventLog log = give_log({{3, 0, 1, 5}, {9, 1, 0, 12}});
  CreditReport r = detect_credit(log, kTight);
  REQUIRE(r.episodes.size() == 1);
  CHECK(r.episodes[0] == CreditEpisode{0, 1, 3, 9, 5});
  CHECK(r.unresolved == 1);  // the reverse excursion never returns to par
  CHECK(oracle_credit(log, kTight) == r);
}

TEST_CASE("credit: default parameters see the worked example the same way") {
  CreditParams defaults;  // delta 4, epsilon 3, window 50, min_duration 2
  CreditReport r = detect_credit(give_log({{3, 0, 1, 5}, {9, 1, 0, 5}}), defaults);
  REQUIRE(r.episodes.size() == 1);
  CHECK(r.episodes[0] == CreditEpisode{0, 1, 3, 9, 5});
}

TEST_CASE("credit: episodes sort by (open, lender, borrower)") {
  EventLog log = give_log({
      {0, 2, 3, 9}, {1, 0, 1, 9},   // two opens, pair (2,3) first
      {5, 3, 2, 9}, {6, 1, 0, 9},   // both close
  });
  CreditReport r = detect_credit(log, kTight);
  REQUIRE(r.episodes.size() == 2);
  CHECK(r.episodes[0].lender == 2);
  CHECK(r.episodes[0].open_tick == 0);
  CHECK(r.episodes[1].lender == 0);
  CHECK(r.episodes[1].open_tick == 1);
}

TEST_CASE("credit: parameter guards") {
  EventLog log = give_log({{0, 0, 1, 5}});
  expect_err(Err::ValidationError, [&] { detect_credit(log, CreditParams{3, 3, 50, 2}); });
  expect_err(Err::ValidationError, [&] { detect_credit(log, CreditParams{4, 3, 50, 0}); });
  expect_err(Err::ValidationError, [&] { detect_credit(log, CreditParams{4, 3, 2, 2}); });
  expect_err(Err::ValidationError, [&] { oracle_credit(log, CreditParams{3, 3, 50, 2}); });
}

TEST_CASE("credit: the oracle refuses big logs") {
  std::vector<std::tuple<Tick, AgentId, AgentId, Amount>> gives;
  for (Tick t = 0; t < 65; ++t) gives.push_back({t, 0, 1, 1});
  EventLog log = give_log(gives);
  expect_err(Err::LogTooLarge, [&] { oracle_credit(log, kTight); });
  CreditReport r = detect_credit(log, kTight);  // the scan has no such limit
  CHECK(r.episodes.empty());
  CHECK(r.unresolved == 1);
}

// ---------------------------------------------------------------------------
// Credit: oracle equivalence and invariants on random logs
// ---------------------------------------------------------------------------

namespace {

EventLog random_give_log(SplitMix64& g) {
  std::vector<std::tuple<Tick, AgentId, AgentId, Amount>> gives;
  const std::size_t n = 1 + g.next_u64() % 12;
  Tick t = g.next_u64() % 3;
  for (std::size_t i = 0; i < n; ++i) {
    AgentId a = static_cast<AgentId>(g.next_u64() % 4);
    AgentId b = static_cast<AgentId>(g.next_u64() % 4);
    if (a == b) b = (b + 1) % 4;
    Amount amt = 1 + static_cast<Amount>(g.next_u64() % 9);
    gives.push_back({t, a, b, amt});
    t += g.next_u64() % 5;  // may stay on the same tick
  }
  return give_log(gives);
}

}  // namespace

TEST_CASE("credit: scan matches the brute-force oracle on random logs") {
  SplitMix64 g(0x5eedf00d);
  const CreditParams grid[] = {
      {1, 0, 50, 1}, {3, 0, 50, 2}, {4, 3, 50, 2}, {2, 1, 5, 1}, {4, 3, 8, 3},
  };
  for (int iter = 0; iter < 100; ++iter) {
    EventLog log = random_give_log(g);
    for (const CreditParams& p : grid) {
      CAPTURE(iter);
      CAPTURE(p.delta);
      CAPTURE(p.window);
      CreditReport want = oracle_credit(log, p);
      CHECK(detect_credit(log, p, ScanMode::Serial) == want);
      CHECK(detect_credit(log, p, ScanMode::Parallel) == want);
    }
  }
}

TEST_CASE("credit: raising delta never finds more excursions") {
  SplitMix64 g(0xabcdef12);
  for (int iter = 0; iter < 50; ++iter) {
    EventLog log = random_give_log(g);
    std::uint64_t prev = UINT64_MAX;
    for (Amount delta : {1, 2, 4, 8}) {
      CreditReport r = detect_credit(log, CreditParams{delta, 0, 50, 1});
      std::uint64_t total = r.episodes.size() + r.unresolved;
      CHECK(total <= prev);
      prev = total;
    }
  }
}

TEST_CASE("credit: serial and parallel agree on an engine log") {
  ScenarioConfig cfg =
      make_scenario(ScenarioKind::Credit, {{"population", "10"}, {"horizon", "200"}});
  EventLog log = run(cfg, 1);
  CreditParams p;
  CHECK(detect_credit(log, p, ScanMode::Serial) == detect_credit(log, p, ScanMode::Parallel));
}

// ---------------------------------------------------------------------------
// Insurance
// ---------------------------------------------------------------------------

namespace {

ScenarioConfig insurance_fixture_cfg() {
  return make_scenario(ScenarioKind::Insurance, {{"population", "2"},
                                                 {"endowment", "12"},
                                                 {"income", "0"},
                                                 {"consumption", "0"},
                                                 {"p_shock", "0.5"},
                                                 {"shock_loss", "4"},
                                                 {"horizon", "2"}});
}

}  // namespace

TEST_CASE("insurance: all need-targeted giving at a half-needy base rate lifts 2x") {
  ScenarioConfig cfg = insurance_fixture_cfg();
  EventLog log(LogHeader{1, 1, config_digest(cfg)});
  log.append(ev(0, 0, EventKind::Shock, std::nullopt, 0, 4));
  log.append(ev(0, 1, EventKind::Shock, std::nullopt, 1, 4));
  log.append(ev(1, 0, EventKind::Give, 0, 1, 3));
  InsuranceReport r = detect_insurance(log, cfg, 10);
  // Decision-time samples: tick 0 sees [12,12], tick 1 sees [8,8].
  CHECK(r.total_samples == 4);
  CHECK(r.below_need_samples == 2);
  CHECK(r.total_give_volume == 3);
  CHECK(r.need_targeted_volume == 3);
  REQUIRE(r.need_contingency_lift.has_value());
  CHECK(*r.need_contingency_lift == Rational(2));
  CHECK_FALSE(r.buffering_index.has_value());  // no control supplied
  CHECK(r.sharing_clusters.empty());           // one-way help is not a cluster
}

TEST_CASE("insurance: reciprocated need transfers form a sharing cluster") {
  ScenarioConfig cfg = insurance_fixture_cfg();
  EventLog log(LogHeader{1, 1, config_digest(cfg)});
  log.append(ev(0, 0, EventKind::Shock, std::nullopt, 0, 4));
  log.append(ev(0, 1, EventKind::Shock, std::nullopt, 1, 4));
  log.append(ev(1, 0, EventKind::Give, 0, 1, 3));
  log.append(ev(1, 1, EventKind::Give, 1, 0, 3));
  InsuranceReport r = detect_insurance(log, cfg, 10);
  REQUIRE(r.sharing_clusters.size() == 1);
  CHECK(r.sharing_clusters[0] == std::vector<AgentId>{0, 1});
  CHECK(*r.need_contingency_lift == Rational(2));
}

TEST_CASE("insurance: nu sweeps move the base rate monotonically") {
  ScenarioConfig cfg = make_scenario(ScenarioKind::Insurance,
                                     {{"population", "6"}, {"horizon", "80"}});
  EventLog log = run(cfg, 21);
  std::uint64_t prev = 0;
  for (Amount nu : {5, 10, 15, 25}) {
    InsuranceReport r = detect_insurance(log, cfg, nu);
    CHECK(r.below_need_samples >= prev);
    CHECK(r.total_samples == std::uint64_t(6) * 80);
    prev = r.below_need_samples;
  }
}

TEST_CASE("insurance: lift is NONE when nothing is given or nobody is needy") {
  ScenarioConfig cfg = insurance_fixture_cfg();
  {
    EventLog log(LogHeader{1, 1, config_digest(cfg)});  // no gives at all
    InsuranceReport r = detect_insurance(log, cfg, 10);
    CHECK_FALSE(r.need_contingency_lift.has_value());
  }
  {
    EventLog log(LogHeader{1, 1, config_digest(cfg)});
    log.append(ev(1, 0, EventKind::Give, 0, 1, 3));  // nobody below nu = 5
    InsuranceReport r = detect_insurance(log, cfg, 5);
    CHECK(r.below_need_samples == 0);
    CHECK_FALSE(r.need_contingency_lift.has_value());
  }
}

TEST_CASE("insurance: buffering against a paired giving-disabled control") {
  ScenarioConfig t = make_scenario(ScenarioKind::Insurance,
                                   {{"population", "6"}, {"horizon", "80"}});
  ScenarioConfig c = apply_control(t, "giving_disabled");
  EventLog lt = run(t, 21);
  EventLog lc = run(c, 21);
  InsuranceReport r = detect_insurance(lt, t, 10, &lc, &c);
  REQUIRE(r.buffering_index.has_value());
  CHECK(*r.buffering_index <= 1.0);  // 1 - variance ratio
}

TEST_CASE("insurance: two quiet paired logs give zero buffering and NONE lift") {
  ScenarioConfig t = make_scenario(ScenarioKind::Insurance, {{"population", "2"},
                                                             {"income", "0"},
                                                             {"consumption", "0"},
                                                             {"p_shock", "0"},
                                                             {"horizon", "4"}});
  ScenarioConfig c = apply_control(t, "giving_disabled");
  EventLog lt(LogHeader{1, 9, config_digest(t)});
  EventLog lc(LogHeader{1, 9, config_digest(c)});
  InsuranceReport r = detect_insurance(lt, t, 10, &lc, &c);
  CHECK_FALSE(r.need_contingency_lift.has_value());
  REQUIRE(r.buffering_index.has_value());
  CHECK(*r.buffering_index == 0.0);
}

TEST_CASE("insurance: pairing is enforced") {
  ScenarioConfig t = make_scenario(ScenarioKind::Insurance, {{"population", "2"},
                                                             {"income", "0"},
                                                             {"consumption", "0"},
                                                             {"p_shock", "0"},
                                                             {"horizon", "4"}});
  ScenarioConfig c = apply_control(t, "giving_disabled");
  EventLog lt(LogHeader{1, 9, config_digest(t)});
  {
    EventLog wrong_seed(LogHeader{1, 10, config_digest(c)});
    expect_err(Err::PairingMismatch,
               [&] { detect_insurance(lt, t, 10, &wrong_seed, &c); });
  }
  {
    EventLog lc(LogHeader{1, 9, config_digest(c)});
    expect_err(Err::PairingMismatch, [&] { detect_insurance(lt, t, 10, &lc, nullptr); });
  }
  {
    ScenarioConfig mem = apply_control(t, "memory_disabled");
    EventLog lm(LogHeader{1, 9, config_digest(mem)});
    expect_err(Err::PairingMismatch, [&] { detect_insurance(lt, t, 10, &lm, &mem); });
  }
}

// ---------------------------------------------------------------------------
// Token chains
// ---------------------------------------------------------------------------

TEST_CASE("token: two settled redemptions of one token form a chain") {
  EventLog log;
  log.append(ev(0, 0, EventKind::Mint, std::nullopt, 3, std::nullopt, 12));
  log.append(ev(2, 0, EventKind::Give, 5, 3, 4));
  log.append(ev(2, 1, EventKind::TokenPay, 3, 5, std::nullopt, 12));
  log.append(ev(7, 0, EventKind::Give, 9, 5, 4));
  log.append(ev(7, 1, EventKind::TokenPay, 5, 9, std::nullopt, 12));
  TokenReport r = detect_token_chains(log);
  CHECK(r.hop_count == 2);
  CHECK(r.max_chain_length == 2);
  REQUIRE(r.chains.size() == 1);
  CHECK(r.chains[0].token == 12);
  REQUIRE(r.chains[0].hops.size() == 2);
  CHECK(r.chains[0].hops[0] == TokenHop{12, 3, 5, 2});
  CHECK(r.chains[0].hops[1] == TokenHop{12, 5, 9, 7});
  CHECK(r.stranger_gives == 2);
  CHECK(r.stranger_gives_token_paired == 2);
  REQUIRE(r.stranger_cooperation_fraction.has_value());
  CHECK(*r.stranger_cooperation_fraction == Rational(1));
}

TEST_CASE("token: a single hop is not a chain") {
  EventLog log;
  log.append(ev(2, 0, EventKind::Give, 5, 3, 4));
  log.append(ev(2, 1, EventKind::TokenPay, 3, 5, std::nullopt, 12));
  TokenReport r = detect_token_chains(log);
  CHECK(r.hop_count == 1);
  CHECK(r.chains.empty());
  CHECK(r.max_chain_length == 0);
  CHECK(*r.stranger_cooperation_fraction == Rational(1));
}

TEST_CASE("token: a pay without its give is not a valid hop") {
  EventLog log;
  log.append(ev(2, 0, EventKind::TokenPay, 3, 5, std::nullopt, 12));
  TokenReport r = detect_token_chains(log);
  CHECK(r.hop_count == 0);
  CHECK(r.chains.empty());
  CHECK_FALSE(r.stranger_cooperation_fraction.has_value());  // no gives at all
}

TEST_CASE("token: an invalid hop breaks the chain") {
  EventLog log;
  log.append(ev(2, 0, EventKind::Give, 5, 3, 4));
  log.append(ev(2, 1, EventKind::TokenPay, 3, 5, std::nullopt, 12));
  log.append(ev(4, 0, EventKind::TokenPay, 5, 9, std::nullopt, 12));  // unbacked
  log.append(ev(6, 0, EventKind::Give, 2, 9, 4));
  log.append(ev(6, 1, EventKind::TokenPay, 9, 2, std::nullopt, 12));
  log.append(ev(8, 0, EventKind::Give, 7, 2, 4));
  log.append(ev(8, 1, EventKind::TokenPay, 2, 7, std::nullopt, 12));
  TokenReport r = detect_token_chains(log);
  CHECK(r.hop_count == 3);
  REQUIRE(r.chains.size() == 1);
  CHECK(r.chains[0].hops.size() == 2);
  CHECK(r.chains[0].hops[0].from == 9);
  CHECK(r.max_chain_length == 2);
}

TEST_CASE("token: each give settles at most one pay") {
  EventLog log;
  log.append(ev(2, 0, EventKind::Give, 5, 3, 4));
  log.append(ev(2, 1, EventKind::TokenPay, 3, 5, std::nullopt, 1));
  log.append(ev(2, 2, EventKind::TokenPay, 3, 5, std::nullopt, 2));  // no give left
  TokenReport r = detect_token_chains(log);
  CHECK(r.hop_count == 1);
  CHECK(r.chains.empty());
}

TEST_CASE("token: stranger bookkeeping") {
  // A repeat pair only counts once, and a refusal spends stranger status.
  EventLog log;
  log.append(ev(1, 0, EventKind::Refuse, 0, 1, std::nullopt));
  log.append(ev(2, 0, EventKind::Give, 1, 0, 2));  // already interacted
  log.append(ev(3, 0, EventKind::Give, 2, 3, 2));  // fresh pair, unpaired give
  log.append(ev(4, 0, EventKind::Give, 2, 3, 2));  // repeat
  TokenReport r = detect_token_chains(log);
  CHECK(r.stranger_gives == 1);
  CHECK(r.stranger_gives_token_paired == 0);
  CHECK(*r.stranger_cooperation_fraction == Rational(0));
}

TEST_CASE("token: engine-generated redemption cascade chains") {
  ScenarioConfig cfg =
      make_scenario(ScenarioKind::Token, {{"population", "2"}, {"horizon", "4"}});
  EventLog log = run(cfg, 7);
  TokenReport r = detect_token_chains(log);
  CHECK(r.hop_count >= 2);
  CHECK(r.max_chain_length >= 2);
  REQUIRE(r.stranger_cooperation_fraction.has_value());
  CHECK(*r.stranger_cooperation_fraction == Rational(1));
}

// ---------------------------------------------------------------------------
// Investment
// ---------------------------------------------------------------------------

namespace {

ScenarioConfig investment_cfg(const std::map<std::string, std::string>& extra = {}) {
  std::map<std::string, std::string> overrides = {
      {"population", "2"},   {"endowment", "50"},       {"income", "0"},
      {"consumption", "0"},  {"horizon", "40"},         {"project_period", "40"},
      {"project_cost", "5"}, {"project_threshold", "5"}, {"project_deadline", "12"},
      {"project_maturity", "20"},
  };
  for (const auto& [k, v] : extra) overrides[k] = v;
  return make_scenario(ScenarioKind::Investment, overrides);
}

}  // namespace

TEST_CASE("investment: a funded act realizes the multiplied return") {
  ScenarioConfig cfg = investment_cfg();
  EventLog log(LogHeader{1, 1, config_digest(cfg)});
  log.append(ev(10, 0, EventKind::Invest, 0, std::nullopt, 5, std::nullopt, 0));
  InvestmentReport r = detect_investment(log, cfg);
  CHECK(r.posted == 1);
  CHECK(r.funded == 1);
  CHECK(r.dangling_acts == 0);
  REQUIRE(r.acts.size() == 1);
  CHECK(r.acts[0].investor == 0);
  CHECK(r.acts[0].cost == 5);
  CHECK(r.acts[0].realized_return == Rational(15));  // floor(5 * 3)
  CHECK(r.acts[0].delay == 10);                      // maturity 20 - invest 10
  REQUIRE(r.mean_roi.has_value());
  CHECK(*r.mean_roi == Rational(3));
  CHECK(*r.funded_fraction == Rational(1));
}

TEST_CASE("investment: an unfunded act realizes the floored refund") {
  ScenarioConfig cfg = investment_cfg({{"project_threshold", "25"}, {"project_cost", "4"}});
  EventLog log(LogHeader{1, 1, config_digest(cfg)});
  log.append(ev(2, 0, EventKind::Invest, 0, std::nullopt, 4, std::nullopt, 0));
  InvestmentReport r = detect_investment(log, cfg);
  CHECK(r.funded == 0);
  REQUIRE(r.acts.size() == 1);
  CHECK(r.acts[0].realized_return == Rational(2));  // floor(4 * 1/2)
  CHECK(r.acts[0].delay == 10);                     // deadline 12 - invest 2
  CHECK(*r.mean_roi == Rational(1, 2));
  CHECK(*r.funded_fraction == Rational(0));
}

TEST_CASE("investment: returns are attributed pro rata") {
  ScenarioConfig cfg = investment_cfg({{"project_threshold", "15"}});
  EventLog log(LogHeader{1, 1, config_digest(cfg)});
  log.append(ev(0, 0, EventKind::Invest, 0, std::nullopt, 3, std::nullopt, 0));
  log.append(ev(1, 0, EventKind::Invest, 0, std::nullopt, 2, std::nullopt, 0));
  log.append(ev(2, 0, EventKind::Invest, 1, std::nullopt, 10, std::nullopt, 0));
  InvestmentReport r = detect_investment(log, cfg);
  REQUIRE(r.acts.size() == 3);
  CHECK(*r.acts[0].realized_return == Rational(9));   // 15 * 3/5
  CHECK(*r.acts[1].realized_return == Rational(6));   // 15 * 2/5
  CHECK(*r.acts[2].realized_return == Rational(30));  // floor(10*3) whole
  CHECK(*r.mean_roi == Rational(3));
}

TEST_CASE("investment: acts without a settlement in-horizon dangle") {
  {
    // Deadline beyond the horizon: never settled either way.
    ScenarioConfig cfg = investment_cfg({{"horizon", "11"}});
    EventLog log(LogHeader{1, 1, config_digest(cfg)});
    log.append(ev(10, 0, EventKind::Invest, 0, std::nullopt, 5, std::nullopt, 0));
    InvestmentReport r = detect_investment(log, cfg);
    CHECK(r.dangling_acts == 1);
    CHECK_FALSE(r.mean_roi.has_value());
    CHECK(*r.funded_fraction == Rational(0));  // fate unknown counts unfunded
  }
  {
    // Funded but maturity beyond the horizon.
    ScenarioConfig cfg = investment_cfg({{"horizon", "15"}});
    EventLog log(LogHeader{1, 1, config_digest(cfg)});
    log.append(ev(10, 0, EventKind::Invest, 0, std::nullopt, 5, std::nullopt, 0));
    InvestmentReport r = detect_investment(log, cfg);
    CHECK(r.funded == 1);
    CHECK(r.dangling_acts == 1);
    CHECK_FALSE(r.mean_roi.has_value());
    CHECK(*r.funded_fraction == Rational(1));
  }
}

TEST_CASE("investment: empty logs still report the posting schedule") {
  ScenarioConfig cfg = investment_cfg();
  EventLog log(LogHeader{1, 1, config_digest(cfg)});
  InvestmentReport r = detect_investment(log, cfg);
  CHECK(r.posted == 1);
  CHECK(r.acts.empty());
  CHECK_FALSE(r.mean_roi.has_value());
  CHECK(*r.funded_fraction == Rational(0));

  ScenarioConfig trade = make_scenario(ScenarioKind::Trade);
  EventLog tlog(LogHeader{1, 1, config_digest(trade)});
  InvestmentReport tr = detect_investment(tlog, trade);
  CHECK(tr.posted == 0);
  CHECK_FALSE(tr.funded_fraction.has_value());
}

TEST_CASE("investment: an act naming an unposted project is rejected") {
  ScenarioConfig cfg = investment_cfg();
  EventLog log(LogHeader{1, 1, config_digest(cfg)});
  log.append(ev(10, 0, EventKind::Invest, 0, std::nullopt, 5, std::nullopt, 7));
  expect_err(Err::SchemaViolation, [&] { detect_investment(log, cfg); });
}

TEST_CASE("investment: engine logs settle consistently with the detector") {
  ScenarioConfig cfg =
      make_scenario(ScenarioKind::Investment, {{"population", "8"}, {"horizon", "90"}});
  EventLog log = run(cfg, 5);
  InvestmentReport r = detect_investment(log, cfg);
  CHECK(r.posted == 3);  // ticks 0, 40, 80
  for (const InvestmentAct& act : r.acts)
    if (act.realized_return) CHECK(*act.delay >= 1);
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

TEST_CASE("transfers: cooperating pairs and per-role quarter volumes") {
  ScenarioConfig cfg = make_scenario(ScenarioKind::Trade, {{"population", "4"},
                                                           {"endowment", "50"},
                                                           {"income", "0"},
                                                           {"consumption", "0"},
                                                           {"horizon", "100"},
                                                           {"defector_fraction", "1/4"}});
  EventLog log(LogHeader{1, 3, config_digest(cfg)});
  log.append(ev(10, 0, EventKind::Give, 0, 1, 5));
  log.append(ev(80, 0, EventKind::Give, 1, 0, 5));
  log.append(ev(80, 1, EventKind::Give, 2, 3, 7));
  log.append(ev(90, 0, EventKind::Give, 3, 2, 2));
  MacrostateReport r = summarize(log, cfg, DetectorParams{});
  CHECK(r.transfers.cooperating_pairs == 2);
  // Final quarter starts at tick 75; agent 3 is the defector.
  CHECK(*r.transfers.defector_received_per_capita == Rational(7));
  CHECK(*r.transfers.cooperator_received_per_capita == Rational(7, 3));
  CHECK(*r.transfers.episodes_per_cooperating_pair == Rational(0));
  CHECK(r.credit.unresolved == 2);
}

TEST_CASE("summarize rejects a mismatched digest") {
  ScenarioConfig cfg = make_scenario(ScenarioKind::Trade);
  EventLog log(LogHeader{1, 1, 0xdeadbeefdeadbeefULL});
  expect_err(Err::DigestMismatch, [&] { summarize(log, cfg, DetectorParams{}); });
}

TEST_CASE("report csv of a quiet trade log is frozen") {
  ScenarioConfig cfg = make_scenario(ScenarioKind::Trade, {{"income", "0"},
                                                           {"consumption", "0"},
                                                           {"horizon", "4"}});
  EventLog log(LogHeader{1, 5, config_digest(cfg)});
  MacrostateReport r = summarize(log, cfg, DetectorParams{});
  CHECK(report_csv(r) ==
        "metric,value,decimal\n"
        "credit_episodes,0,0.000000\n"
        "credit_unresolved,0,0.000000\n"
        "insurance_lift,NONE,NONE\n"
        "insurance_buffering,NONE,NONE\n"
        "insurance_clusters,0,0.000000\n"
        "insurance_need_targeted_volume,0,0.000000\n"
        "insurance_total_give_volume,0,0.000000\n"
        "token_chains,0,0.000000\n"
        "token_valid_hops,0,0.000000\n"
        "token_max_chain_length,0,0.000000\n"
        "token_stranger_cooperation,NONE,NONE\n"
        "investment_acts,0,0.000000\n"
        "investment_dangling_acts,0,0.000000\n"
        "investment_mean_roi,NONE,NONE\n"
        "investment_funded_fraction,NONE,NONE\n"
        "transfers_cooperating_pairs,0,0.000000\n"
        "transfers_episodes_per_pair,NONE,NONE\n"
        "transfers_defector_received_per_capita,NONE,NONE\n"
        "transfers_cooperator_received_per_capita,NONE,NONE\n");
  std::string text = report_text(r);
  CHECK(text.find("TRADE seed=5") == 0);
  CHECK(text.find("insurance_lift = NONE") != std::string::npos);
}

TEST_CASE("summarize from text equals summarize from memory") {
  ScenarioConfig cfg =
      make_scenario(ScenarioKind::Credit, {{"population", "8"}, {"horizon", "80"}});
  EventLog log = run(cfg, 13);
  MacrostateReport a = summarize(log, cfg, DetectorParams{});
  MacrostateReport b = summarize(log_from_string(log_to_string(log)), cfg, DetectorParams{});
  CHECK(a == b);
  CHECK(report_csv(a) == report_csv(b));
}
