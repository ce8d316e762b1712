#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reciprosim/log.hpp"
#include "reciprosim/rational.hpp"
#include "reciprosim/scenario.hpp"

namespace reciprosim {

// ---------------------------------------------------------------------------
// Credit: persistent asymmetric giving that is repaid later.
// ---------------------------------------------------------------------------

struct CreditParams {
  Amount delta = 4;    // excursion opens when balance first exceeds this
  Amount epsilon = 3;  // and closes at the first return to <= this
  Tick window = 50;    // W: longer excursions are unresolved, not credit
  Tick min_duration = 2;
};

struct CreditEpisode {
  AgentId lender = 0;
  AgentId borrower = 0;
  Tick open_tick = 0;
  Tick close_tick = 0;
  Amount peak_imbalance = 0;

  bool operator==(const CreditEpisode&) const = default;
  auto operator<=>(const CreditEpisode&) const = default;
};

struct CreditReport {
  std::vector<CreditEpisode> episodes;  // sorted (open_tick, lender, borrower)
  std::uint64_t unresolved = 0;         // excursions never repaid in-window

  bool operator==(const CreditReport&) const = default;
};

enum class ScanMode { Auto, Serial, Parallel };

// Pairwise end-of-tick balance scan over every pair with transfer traffic.
// Parallel and serial modes produce identical reports; Auto picks parallel
// when built with OpenMP and the log is big enough to be worth it.
CreditReport detect_credit(const EventLog& log, const CreditParams& params,
                           ScanMode mode = ScanMode::Auto);

// Independent brute-force reference: enumerates (pair, open, close) candidates
// straight from the episode definition over full per-tick balance series.
// Guard: logs over 64 events raise LogTooLarge.
CreditReport oracle_credit(const EventLog& log, const CreditParams& params);

// ---------------------------------------------------------------------------
// Insurance: need-contingent giving and mutual buffering under shocks.
// ---------------------------------------------------------------------------

struct InsuranceReport {
  // (share of give volume landing on recipients below nu) divided by
  // (share of agent-ticks spent below nu). NONE when either is undefined.
  std::optional<Rational> need_contingency_lift;
  // 1 - var(per-tick resource changes, treatment)/var(same, control), changes
  // sampled at the pre-shock boundary. NONE without a control log.
  std::optional<double> buffering_index;
  // Connected components of the bidirectional need-transfer graph.
  std::vector<std::vector<AgentId>> sharing_clusters;

  Amount total_give_volume = 0;
  Amount need_targeted_volume = 0;
  std::uint64_t below_need_samples = 0;
  std::uint64_t total_samples = 0;

  bool operator==(const InsuranceReport&) const = default;
};

InsuranceReport detect_insurance(const EventLog& log, const ScenarioConfig& cfg,
                                 Amount need_threshold,
                                 const EventLog* control_log = nullptr,
                                 const ScenarioConfig* control_cfg = nullptr);

// ---------------------------------------------------------------------------
// Token indirection: placeholder chains and stranger cooperation.
// ---------------------------------------------------------------------------

struct TokenHop {
  TokenId token = 0;
  AgentId from = 0;
  AgentId to = 0;
  Tick tick = 0;

  bool operator==(const TokenHop&) const = default;
};

struct TokenChain {
  TokenId token = 0;
  std::vector<TokenHop> hops;  // consecutive valid hops, length >= 2

  bool operator==(const TokenChain&) const = default;
};

struct TokenReport {
  std::vector<TokenChain> chains;
  std::uint64_t hop_count = 0;        // valid hops, chained or not
  std::uint32_t max_chain_length = 0; // 0 when no chain
  // Over GIVEs between pairs with no prior direct interaction (GIVE/REFUSE
  // either way): the fraction that are token-paired. NONE when no such GIVEs.
  std::optional<Rational> stranger_cooperation_fraction;
  std::uint64_t stranger_gives = 0;
  std::uint64_t stranger_gives_token_paired = 0;

  bool operator==(const TokenReport&) const = default;
};

TokenReport detect_token_chains(const EventLog& log);

// ---------------------------------------------------------------------------
// Investment: costly, delayed, contingent commitments.
// ---------------------------------------------------------------------------

struct InvestmentAct {
  AgentId investor = 0;
  ProjectId project = 0;
  Tick invest_tick = 0;
  Amount cost = 0;
  std::optional<Rational> realized_return;  // NONE while dangling
  std::optional<Tick> delay;                // settlement - invest tick

  bool operator==(const InvestmentAct&) const = default;
};

struct InvestmentReport {
  std::vector<InvestmentAct> acts;
  std::optional<Rational> mean_roi;         // sum(returns)/sum(costs), settled only
  std::optional<Rational> funded_fraction;  // funded / posted; NONE when none posted
  std::uint64_t posted = 0;
  std::uint64_t funded = 0;
  std::uint64_t dangling_acts = 0;  // excluded from mean_roi

  bool operator==(const InvestmentReport&) const = default;
};

InvestmentReport detect_investment(const EventLog& log, const ScenarioConfig& cfg);

// ---------------------------------------------------------------------------
// Aggregate macrostate report.
// ---------------------------------------------------------------------------

struct TransferStats {
  // Final-quarter per-capita received volume, split by role. Only populated
  // when the config has defectors.
  std::optional<Rational> defector_received_per_capita;
  std::optional<Rational> cooperator_received_per_capita;
  std::uint64_t cooperating_pairs = 0;  // pairs with GIVEs both directions
  std::optional<Rational> episodes_per_cooperating_pair;

  bool operator==(const TransferStats&) const = default;
};

struct MacrostateReport {
  std::uint64_t seed = 0;
  std::uint64_t config_digest = 0;
  ScenarioKind kind = ScenarioKind::Trade;
  std::uint32_t population = 0;
  Tick horizon = 0;

  CreditReport credit;
  InsuranceReport insurance;
  TokenReport token;
  InvestmentReport investment;
  TransferStats transfers;

  bool operator==(const MacrostateReport&) const = default;
};

struct DetectorParams {
  CreditParams credit;
  Amount need_threshold = 10;  // nu used by the insurance detector
};

MacrostateReport summarize(const EventLog& log, const ScenarioConfig& cfg,
                           const DetectorParams& params,
                           const EventLog* control_log = nullptr,
                           const ScenarioConfig* control_cfg = nullptr);

// Human-readable text form and flat CSV ("metric,value,decimal" rows; exact
// rationals as num/den with a 6-place decimal column; NONE for undefined).
std::string report_text(const MacrostateReport& r);
std::string report_csv(const MacrostateReport& r);

}  // namespace reciprosim
