#include "reciprosim/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "reciprosim/replay.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace reciprosim {

namespace {

std::uint64_t pair_key(AgentId a, AgentId b) {
  AgentId lo = std::min(a, b), hi = std::max(a, b);
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

void check_credit_params(const CreditParams& p) {
  if (!(p.delta > p.epsilon && p.epsilon >= 0))
    fail(Err::ValidationError, "credit scan needs delta > epsilon >= 0");
  if (!(p.window > p.min_duration && p.min_duration >= 1))
    fail(Err::ValidationError, "credit scan needs window > min_duration >= 1");
}

void sort_episodes(std::vector<CreditEpisode>& eps) {
  std::sort(eps.begin(), eps.end(), [](const CreditEpisode& a, const CreditEpisode& b) {
    if (a.open_tick != b.open_tick) return a.open_tick < b.open_tick;
    if (a.lender != b.lender) return a.lender < b.lender;
    return a.borrower < b.borrower;
  });
}

// Net transfer history of one unordered pair; positive deltas flow lo -> hi.
struct PairSeries {
  AgentId lo = 0;
  AgentId hi = 0;
  std::vector<std::pair<Tick, Amount>> deltas;  // log order, ticks non-decreasing
};

struct PairOutcome {
  std::vector<CreditEpisode> episodes;
  std::uint64_t unresolved = 0;
};

// Sequential excursion state machine over the end-of-tick balance of one
// pair. Both kernels funnel through this; they differ only in scheduling.
PairOutcome scan_pair(const PairSeries& s, const CreditParams& p) {
  PairOutcome out;
  Amount balance = 0;
  int lend_dir = 0;  // +1 lo is the lender, -1 hi is, 0 no open excursion
  Tick open_tick = 0;
  Amount peak = 0;
  std::size_t i = 0;
  while (i < s.deltas.size()) {
    const Tick t = s.deltas[i].first;
    Amount b = balance;
    for (; i < s.deltas.size() && s.deltas[i].first == t; ++i)
      b = checked_add(b, s.deltas[i].second);
    const Amount prev = balance;
    balance = b;
    if (b == prev) continue;
    if (lend_dir != 0) {
      const Amount mag = lend_dir > 0 ? b : -b;
      if (mag > peak) peak = mag;
      if (mag <= p.epsilon) {
        const Tick duration = t - open_tick;
        if (duration > p.window) {
          out.unresolved += 1;
        } else if (duration >= p.min_duration) {
          CreditEpisode e;
          e.lender = lend_dir > 0 ? s.lo : s.hi;
          e.borrower = lend_dir > 0 ? s.hi : s.lo;
          e.open_tick = open_tick;
          e.close_tick = t;
          e.peak_imbalance = peak;
          out.episodes.push_back(e);
        }
        lend_dir = 0;
      }
    }
    if (lend_dir == 0) {
      // A close and an opposite-direction open may share a tick when the
      // balance jumps across the whole band in one step.
      if (prev <= p.delta && b > p.delta) {
        lend_dir = 1;
        open_tick = t;
        peak = b;
      } else if (prev >= -p.delta && b < -p.delta) {
        lend_dir = -1;
        open_tick = t;
        peak = -b;
      }
    }
  }
  if (lend_dir != 0) out.unresolved += 1;  // still out past the log's end
  return out;
}

std::vector<PairSeries> gather_pairs(const EventLog& log) {
  std::map<std::uint64_t, PairSeries> pairs;
  for (const InteractionEvent& e : log.events()) {
    if (e.kind != EventKind::Give) continue;
    const AgentId a = *e.actor, b = *e.target;
    auto [it, inserted] = pairs.try_emplace(pair_key(a, b));
    PairSeries& s = it->second;
    if (inserted) {
      s.lo = std::min(a, b);
      s.hi = std::max(a, b);
    }
    s.deltas.emplace_back(e.tick, a == s.lo ? *e.amount : -*e.amount);
  }
  std::vector<PairSeries> out;
  out.reserve(pairs.size());
  for (auto& [key, s] : pairs) out.push_back(std::move(s));
  return out;
}

}  // namespace

CreditReport detect_credit(const EventLog& log, const CreditParams& params, ScanMode mode) {
  check_credit_params(params);
  const std::vector<PairSeries> pairs = gather_pairs(log);

  bool parallel = false;
#ifdef _OPENMP
  if (mode == ScanMode::Parallel)
    parallel = true;
  else if (mode == ScanMode::Auto)
    parallel = pairs.size() >= 64 && log.size() >= 32768;
#else
  (void)mode;  // without OpenMP every mode degrades to the serial kernel
#endif

  CreditReport report;
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel
    {
      std::vector<CreditEpisode> local;
      std::uint64_t local_unresolved = 0;
#pragma omp for schedule(dynamic, 8) nowait
      for (std::int64_t i = 0; i < static_cast<std::int64_t>(pairs.size()); ++i) {
        PairOutcome o = scan_pair(pairs[i], params);
        local.insert(local.end(), o.episodes.begin(), o.episodes.end());
        local_unresolved += o.unresolved;
      }
#pragma omp critical
      {
        report.episodes.insert(report.episodes.end(), local.begin(), local.end());
        report.unresolved += local_unresolved;
      }
    }
#endif
  } else {
    for (const PairSeries& s : pairs) {
      PairOutcome o = scan_pair(s, params);
      report.episodes.insert(report.episodes.end(), o.episodes.begin(), o.episodes.end());
      report.unresolved += o.unresolved;
    }
  }
  sort_episodes(report.episodes);
  return report;
}

CreditReport oracle_credit(const EventLog& log, const CreditParams& params) {
  check_credit_params(params);
  if (log.size() > 64) fail(Err::LogTooLarge, "oracle accepts at most 64 events");

  Tick last = 0;
  std::set<std::pair<AgentId, AgentId>> ordered_pairs;
  for (const InteractionEvent& e : log.events()) {
    last = std::max(last, e.tick);
    if (e.kind != EventKind::Give) continue;
    ordered_pairs.emplace(*e.actor, *e.target);
    ordered_pairs.emplace(*e.target, *e.actor);
  }
  if (last > 100000) fail(Err::LogTooLarge, "oracle builds dense series; ticks too sparse");

  CreditReport report;
  for (const auto& [i, j] : ordered_pairs) {
    // Dense end-of-tick balance series for the ordered pair (i, j).
    std::vector<Amount> bal(static_cast<std::size_t>(last) + 1, 0);
    for (const InteractionEvent& e : log.events()) {
      if (e.kind != EventKind::Give) continue;
      if (*e.actor == i && *e.target == j) bal[e.tick] = checked_add(bal[e.tick], *e.amount);
      if (*e.actor == j && *e.target == i) bal[e.tick] = checked_sub(bal[e.tick], *e.amount);
    }
    for (std::size_t t = 1; t < bal.size(); ++t) bal[t] = checked_add(bal[t], bal[t - 1]);

    // Enumerate (t1, t2) straight from the definition: first crossing above
    // delta after the previous excursion closed, first return to <= epsilon.
    std::size_t search = 0;
    while (search < bal.size()) {
      std::size_t t1 = bal.size();
      for (std::size_t t = search; t < bal.size(); ++t) {
        const Amount before = t == 0 ? 0 : bal[t - 1];
        if (before <= params.delta && bal[t] > params.delta) {
          t1 = t;
          break;
        }
      }
      if (t1 == bal.size()) break;
      std::size_t t2 = bal.size();
      for (std::size_t t = t1 + 1; t < bal.size(); ++t) {
        if (bal[t] <= params.epsilon) {
          t2 = t;
          break;
        }
      }
      if (t2 == bal.size()) {
        report.unresolved += 1;
        break;
      }
      const Tick duration = static_cast<Tick>(t2 - t1);
      if (duration > params.window) {
        report.unresolved += 1;
      } else if (duration >= params.min_duration) {
        CreditEpisode e;
        e.lender = i;
        e.borrower = j;
        e.open_tick = static_cast<Tick>(t1);
        e.close_tick = static_cast<Tick>(t2);
        e.peak_imbalance = *std::max_element(bal.begin() + t1, bal.begin() + t2 + 1);
        report.episodes.push_back(e);
      }
      search = t2 + 1;
    }
  }
  sort_episodes(report.episodes);
  return report;
}

// ---------------------------------------------------------------------------
// Insurance
// ---------------------------------------------------------------------------

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::optional<double> population_variance(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double acc = 0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(xs.size());
}

// Per-tick balance changes, sampled at the pre-shock boundary so a change
// spans shock(t) -> response(t+1) and transfers can offset the shocks they
// answer instead of lagging them.
std::vector<double> preshock_changes(const EventLog& log, const ScenarioConfig& cfg) {
  std::vector<double> changes;
  std::vector<Amount> prev;
  Replayer r(cfg, log.header());
  r.on_pre_shock = [&](Tick) {
    const std::vector<AgentState>& agents = r.world().agents;
    if (!prev.empty())
      for (std::size_t i = 0; i < agents.size(); ++i)
        changes.push_back(static_cast<double>(agents[i].resource - prev[i]));
    prev.resize(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) prev[i] = agents[i].resource;
  };
  for (const InteractionEvent& e : log.events()) r.apply(e);
  r.finish();
  return changes;
}

}  // namespace

InsuranceReport detect_insurance(const EventLog& log, const ScenarioConfig& cfg,
                                 Amount need_threshold, const EventLog* control_log,
                                 const ScenarioConfig* control_cfg) {
  InsuranceReport rep;
  std::set<std::pair<AgentId, AgentId>> need_edges;  // directed
  std::vector<double> changes;
  std::vector<Amount> prev;
  {
    Replayer r(cfg, log.header());
    r.on_decision_start = [&](Tick) {
      for (const AgentState& a : r.world().agents) {
        rep.total_samples += 1;
        if (a.resource < need_threshold) rep.below_need_samples += 1;
      }
    };
    r.on_give = [&](const InteractionEvent& e, Amount recipient_before) {
      rep.total_give_volume = checked_add(rep.total_give_volume, *e.amount);
      if (recipient_before < need_threshold) {
        rep.need_targeted_volume = checked_add(rep.need_targeted_volume, *e.amount);
        need_edges.emplace(*e.actor, *e.target);
      }
    };
    r.on_pre_shock = [&](Tick) {
      const std::vector<AgentState>& agents = r.world().agents;
      if (!prev.empty())
        for (std::size_t i = 0; i < agents.size(); ++i)
          changes.push_back(static_cast<double>(agents[i].resource - prev[i]));
      prev.resize(agents.size());
      for (std::size_t i = 0; i < agents.size(); ++i) prev[i] = agents[i].resource;
    };
    for (const InteractionEvent& e : log.events()) r.apply(e);
    r.finish();
  }

  if (rep.total_give_volume > 0 && rep.below_need_samples > 0 && rep.total_samples > 0) {
    rep.need_contingency_lift = Rational::make(
        checked_mul(rep.need_targeted_volume, static_cast<Amount>(rep.total_samples)),
        checked_mul(rep.total_give_volume, static_cast<Amount>(rep.below_need_samples)));
  }

  UnionFind uf(cfg.population);
  for (const auto& [a, b] : need_edges)
    if (a < b && need_edges.count({b, a})) uf.unite(a, b);
  std::map<std::uint32_t, std::vector<AgentId>> groups;
  for (std::uint32_t i = 0; i < cfg.population; ++i) groups[uf.find(i)].push_back(i);
  for (auto& [root, members] : groups)
    if (members.size() >= 2) rep.sharing_clusters.push_back(std::move(members));

  if (control_log) {
    if (!control_cfg) fail(Err::PairingMismatch, "control log supplied without its config");
    check_pairing(cfg, *control_cfg, "giving_disabled");
    if (control_log->header().seed != log.header().seed)
      fail(Err::PairingMismatch, "control ran under a different seed");
    std::vector<double> control_changes = preshock_changes(*control_log, *control_cfg);
    std::optional<double> var_t = population_variance(changes);
    std::optional<double> var_c = population_variance(control_changes);
    if (var_t && var_c) {
      if (*var_c > 0.0)
        rep.buffering_index = 1.0 - *var_t / *var_c;
      else if (*var_t == 0.0)
        rep.buffering_index = 0.0;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Token chains
// ---------------------------------------------------------------------------

TokenReport detect_token_chains(const EventLog& log) {
  TokenReport rep;
  struct FlaggedHop {
    TokenHop hop;
    bool valid = false;
  };
  std::map<TokenId, std::vector<FlaggedHop>> paths;
  std::set<std::uint64_t> interacted;  // unordered pairs with a prior GIVE/REFUSE

  const std::vector<InteractionEvent>& ev = log.events();
  std::size_t i = 0;
  while (i < ev.size()) {
    std::size_t j = i;
    while (j < ev.size() && ev[j].tick == ev[i].tick) ++j;

    // Pair every TOKEN_PAY with the earliest unconsumed opposite-direction
    // GIVE in the same tick; each event backs at most one partner.
    std::vector<bool> give_paired(j - i, false);
    std::vector<bool> pay_paired(j - i, false);
    for (std::size_t k = i; k < j; ++k) {
      if (ev[k].kind != EventKind::TokenPay) continue;
      for (std::size_t g = i; g < j; ++g) {
        if (ev[g].kind != EventKind::Give || give_paired[g - i]) continue;
        if (*ev[g].actor == *ev[k].target && *ev[g].target == *ev[k].actor) {
          give_paired[g - i] = true;
          pay_paired[k - i] = true;
          break;
        }
      }
    }

    for (std::size_t k = i; k < j; ++k) {
      const InteractionEvent& e = ev[k];
      switch (e.kind) {
        case EventKind::Give: {
          const std::uint64_t key = pair_key(*e.actor, *e.target);
          if (!interacted.count(key)) {
            rep.stranger_gives += 1;
            if (give_paired[k - i]) rep.stranger_gives_token_paired += 1;
          }
          interacted.insert(key);
          break;
        }
        case EventKind::Refuse:
          interacted.insert(pair_key(*e.actor, *e.target));
          break;
        case EventKind::TokenPay: {
          FlaggedHop h;
          h.hop = TokenHop{*e.token, *e.actor, *e.target, e.tick};
          h.valid = pay_paired[k - i];
          paths[*e.token].push_back(h);
          break;
        }
        default:
          break;
      }
    }
    i = j;
  }

  for (const auto& [token, hops] : paths) {
    std::size_t run_start = 0;
    for (std::size_t k = 0; k <= hops.size(); ++k) {
      const bool valid = k < hops.size() && hops[k].valid;
      if (valid) {
        rep.hop_count += 1;
        continue;
      }
      // run of valid hops [run_start, k)
      if (k - run_start >= 2) {
        TokenChain chain;
        chain.token = token;
        for (std::size_t h = run_start; h < k; ++h) chain.hops.push_back(hops[h].hop);
        rep.max_chain_length =
            std::max<std::uint32_t>(rep.max_chain_length, static_cast<std::uint32_t>(k - run_start));
        rep.chains.push_back(std::move(chain));
      }
      run_start = k + 1;
    }
  }

  if (rep.stranger_gives > 0)
    rep.stranger_cooperation_fraction =
        Rational::make(static_cast<std::int64_t>(rep.stranger_gives_token_paired),
                       static_cast<std::int64_t>(rep.stranger_gives));
  return rep;
}

// ---------------------------------------------------------------------------
// Investment
// ---------------------------------------------------------------------------

InvestmentReport detect_investment(const EventLog& log, const ScenarioConfig& cfg) {
  InvestmentReport rep;
  std::vector<Tick> opens;
  if (cfg.projects_enabled) {
    if (cfg.projects.period < 1) fail(Err::ValidationError, "project_period must be positive");
    for (std::uint64_t t = 0; t < cfg.horizon; t += cfg.projects.period)
      opens.push_back(static_cast<Tick>(t));
  }
  rep.posted = opens.size();

  std::map<ProjectId, std::map<AgentId, Amount>> contrib;
  std::map<ProjectId, std::vector<std::size_t>> project_acts;
  for (const InteractionEvent& e : log.events()) {
    if (e.kind != EventKind::Invest) continue;
    const ProjectId pid = *e.project;
    if (pid >= opens.size())
      fail(Err::SchemaViolation, "INVEST names a project the schedule never posts");
    InvestmentAct act;
    act.investor = *e.actor;
    act.project = pid;
    act.invest_tick = e.tick;
    act.cost = *e.amount;
    project_acts[pid].push_back(rep.acts.size());
    rep.acts.push_back(act);
    Amount& c = contrib[pid][act.investor];
    c = checked_add(c, act.cost);
  }

  Rational return_sum{0};
  Amount cost_sum = 0;
  for (ProjectId pid = 0; pid < opens.size(); ++pid) {
    const Tick open = opens[pid];
    const Tick deadline = open + cfg.projects.deadline_offset;
    const Tick maturity = open + cfg.projects.maturity_offset;
    auto pit = project_acts.find(pid);
    const bool has_acts = pit != project_acts.end();
    Amount pooled = 0;
    if (has_acts)
      for (const auto& [aid, c] : contrib[pid]) pooled = checked_add(pooled, c);

    if (deadline >= cfg.horizon) {
      if (has_acts) rep.dangling_acts += pit->second.size();
      continue;
    }
    const bool funded = pooled >= cfg.projects.threshold;
    if (funded) rep.funded += 1;
    if (!has_acts) continue;

    if (funded && maturity >= cfg.horizon) {
      rep.dangling_acts += pit->second.size();
      continue;
    }
    const Rational rate = funded ? cfg.projects.multiplier : cfg.projects.refund;
    const Tick settle_tick = funded ? maturity : deadline;
    for (std::size_t idx : pit->second) {
      InvestmentAct& act = rep.acts[idx];
      const Amount agent_total = contrib[pid][act.investor];
      const Amount agent_settle = floor_mul(agent_total, rate);
      act.realized_return =
          Rational::make(checked_mul(agent_settle, act.cost), agent_total);
      act.delay = settle_tick - act.invest_tick;
      return_sum = return_sum + *act.realized_return;
      cost_sum = checked_add(cost_sum, act.cost);
    }
  }
  if (cost_sum > 0) rep.mean_roi = return_sum / Rational(cost_sum);
  if (rep.posted > 0)
    rep.funded_fraction = Rational::make(static_cast<std::int64_t>(rep.funded),
                                         static_cast<std::int64_t>(rep.posted));
  return rep;
}

// ---------------------------------------------------------------------------
// Aggregate
// ---------------------------------------------------------------------------

namespace {

TransferStats transfer_stats(const EventLog& log, const ScenarioConfig& cfg,
                             const CreditReport& credit) {
  TransferStats ts;
  const Tick quarter_start = cfg.horizon - cfg.horizon / 4;
  const std::uint32_t defectors = cfg.defector_count();

  std::map<AgentId, Amount> received;
  std::set<std::uint64_t> gave;  // directed (actor, target) pairs with a GIVE
  std::uint64_t pair_both = 0;
  for (const InteractionEvent& e : log.events()) {
    if (e.kind != EventKind::Give) continue;
    if (e.tick >= quarter_start) {
      Amount& r = received[*e.target];
      r = checked_add(r, *e.amount);
    }
    const std::uint64_t fwd = (static_cast<std::uint64_t>(*e.actor) << 32) | *e.target;
    const std::uint64_t rev = (static_cast<std::uint64_t>(*e.target) << 32) | *e.actor;
    if (!gave.count(fwd)) {
      if (gave.count(rev)) pair_both += 1;
      gave.insert(fwd);
    }
  }
  ts.cooperating_pairs = pair_both;
  if (pair_both > 0)
    ts.episodes_per_cooperating_pair =
        Rational::make(static_cast<std::int64_t>(credit.episodes.size()),
                       static_cast<std::int64_t>(pair_both));

  if (defectors > 0 && defectors < cfg.population) {
    Amount def_total = 0, coop_total = 0;
    for (std::uint32_t id = 0; id < cfg.population; ++id) {
      auto it = received.find(id);
      const Amount r = it == received.end() ? 0 : it->second;
      if (cfg.is_defector(id))
        def_total = checked_add(def_total, r);
      else
        coop_total = checked_add(coop_total, r);
    }
    ts.defector_received_per_capita = Rational::make(def_total, defectors);
    ts.cooperator_received_per_capita =
        Rational::make(coop_total, cfg.population - defectors);
  }
  return ts;
}

}  // namespace

MacrostateReport summarize(const EventLog& log, const ScenarioConfig& cfg,
                           const DetectorParams& params, const EventLog* control_log,
                           const ScenarioConfig* control_cfg) {
  if (log.header().config_digest != config_digest(cfg))
    fail(Err::DigestMismatch, "log was produced by a different configuration");
  MacrostateReport r;
  r.seed = log.header().seed;
  r.config_digest = log.header().config_digest;
  r.kind = cfg.kind;
  r.population = cfg.population;
  r.horizon = cfg.horizon;
  r.credit = detect_credit(log, params.credit);
  r.insurance = detect_insurance(log, cfg, params.need_threshold, control_log, control_cfg);
  r.token = detect_token_chains(log);
  r.investment = detect_investment(log, cfg);
  r.transfers = transfer_stats(log, cfg, r.credit);
  return r;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct MetricRow {
  std::string name;
  std::string value;    // exact: integer, n/d rational, or NONE
  std::string decimal;  // 6-place decimal, or NONE
};

MetricRow row_count(const std::string& name, std::uint64_t v) {
  return {name, std::to_string(v), Rational(static_cast<std::int64_t>(v)).decimal6()};
}

MetricRow row_rational(const std::string& name, const std::optional<Rational>& v) {
  if (!v) return {name, "NONE", "NONE"};
  return {name, v->str(), v->decimal6()};
}

MetricRow row_double(const std::string& name, const std::optional<double>& v) {
  if (!v) return {name, "NONE", "NONE"};
  return {name, fixed6(*v), fixed6(*v)};
}

std::vector<MetricRow> metric_rows(const MacrostateReport& r) {
  std::vector<MetricRow> rows;
  rows.push_back(row_count("credit_episodes", r.credit.episodes.size()));
  rows.push_back(row_count("credit_unresolved", r.credit.unresolved));
  rows.push_back(row_rational("insurance_lift", r.insurance.need_contingency_lift));
  rows.push_back(row_double("insurance_buffering", r.insurance.buffering_index));
  rows.push_back(row_count("insurance_clusters", r.insurance.sharing_clusters.size()));
  rows.push_back(row_count("insurance_need_targeted_volume",
                           static_cast<std::uint64_t>(r.insurance.need_targeted_volume)));
  rows.push_back(row_count("insurance_total_give_volume",
                           static_cast<std::uint64_t>(r.insurance.total_give_volume)));
  rows.push_back(row_count("token_chains", r.token.chains.size()));
  rows.push_back(row_count("token_valid_hops", r.token.hop_count));
  rows.push_back(row_count("token_max_chain_length", r.token.max_chain_length));
  rows.push_back(
      row_rational("token_stranger_cooperation", r.token.stranger_cooperation_fraction));
  rows.push_back(row_count("investment_acts", r.investment.acts.size()));
  rows.push_back(row_count("investment_dangling_acts", r.investment.dangling_acts));
  rows.push_back(row_rational("investment_mean_roi", r.investment.mean_roi));
  rows.push_back(row_rational("investment_funded_fraction", r.investment.funded_fraction));
  rows.push_back(row_count("transfers_cooperating_pairs", r.transfers.cooperating_pairs));
  rows.push_back(row_rational("transfers_episodes_per_pair",
                              r.transfers.episodes_per_cooperating_pair));
  rows.push_back(row_rational("transfers_defector_received_per_capita",
                              r.transfers.defector_received_per_capita));
  rows.push_back(row_rational("transfers_cooperator_received_per_capita",
                              r.transfers.cooperator_received_per_capita));
  return rows;
}

}  // namespace

std::string report_text(const MacrostateReport& r) {
  char head[160];
  std::snprintf(head, sizeof head, "%s seed=%llu config=%016llx population=%u horizon=%u\n",
                scenario_name(r.kind), static_cast<unsigned long long>(r.seed),
                static_cast<unsigned long long>(r.config_digest), r.population, r.horizon);
  std::string out = head;
  for (const MetricRow& row : metric_rows(r)) {
    out += "  ";
    out += row.name;
    out += " = ";
    out += row.value;
    if (row.decimal != row.value && row.decimal != "NONE") {
      out += " (";
      out += row.decimal;
      out += ")";
    }
    out += '\n';
  }
  return out;
}

std::string report_csv(const MacrostateReport& r) {
  std::string out = "metric,value,decimal\n";
  for (const MetricRow& row : metric_rows(r)) {
    out += row.name;
    out += ',';
    out += row.value;
    out += ',';
    out += row.decimal;
    out += '\n';
  }
  return out;
}

}  // namespace reciprosim
