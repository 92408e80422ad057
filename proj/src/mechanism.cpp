#include "cola/mechanism.hpp"

#include "cola/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace cola {

namespace {

// Guards against representation error in products such as 0.3 * 10.
constexpr double kRoundingSlack = 1e-9;

std::unordered_map<TeamId, std::size_t> index_by_team(std::span<const SeasonOutcome> outcomes) {
  std::unordered_map<TeamId, std::size_t> idx;
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    if (!idx.emplace(outcomes[i].team_id, i).second)
      throw ConfigError("duplicate outcome for team '" + outcomes[i].team_id + "'");
  return idx;
}

const SeasonOutcome &outcome_for(const std::unordered_map<TeamId, std::size_t> &idx,
                                 std::span<const SeasonOutcome> outcomes, const TeamId &team) {
  auto it = idx.find(team);
  if (it == idx.end()) throw ConfigError("no season outcome for team '" + team + "'");
  return outcomes[it->second];
}

const PickOwnership *ownership_of(std::span<const PickOwnership> ownerships,
                                  const TeamId &original) {
  const PickOwnership *found = nullptr;
  for (const auto &o : ownerships) {
    if (o.original_team != original) continue;
    if (found) throw DataError("more than one ownership record for the pick of '" + original + "'");
    found = &o;
  }
  return found;
}

bool traded_unprotected(std::span<const PickOwnership> ownerships, const TeamId &team) {
  const auto *own = ownership_of(ownerships, team);
  return own && own->traded() && own->protection == Protection::none;
}

void validate_ownerships(std::span<const PickOwnership> ownerships,
                         const std::unordered_map<TeamId, std::size_t> &teams) {
  std::unordered_set<TeamId> seen;
  for (const auto &o : ownerships) {
    if (!teams.count(o.original_team))
      throw DataError("ownership record for unknown team '" + o.original_team + "'");
    if (!teams.count(o.holder_team))
      throw DataError("pick of '" + o.original_team + "' held by unknown team '" + o.holder_team +
                      "'");
    if (!seen.insert(o.original_team).second)
      throw DataError("more than one ownership record for the pick of '" + o.original_team + "'");
  }
}

} // namespace

Tickets round_half_up(double x) {
  return static_cast<Tickets>(std::floor(x + 0.5 + kRoundingSlack));
}

bool line_grants_increment(LineLevel line, const MechanismConfig &cfg) {
  if (cfg.strong_year_rule == StrongYearRule::always_alpha) return true;
  // Binary rule: alpha while eight or more teams stay excluded, nothing once
  // four or fewer remain. Counts 5..7 cannot arise from the six line levels.
  return excluded_team_count(line) >= 8;
}

std::vector<TeamLedger> increment_indices(std::span<const TeamLedger> ledgers,
                                          std::span<const SeasonOutcome> outcomes,
                                          LineLevel line, const MechanismConfig &cfg) {
  if (ledgers.size() != outcomes.size())
    throw ConfigError("ledger/outcome count mismatch: " + std::to_string(ledgers.size()) + " vs " +
                      std::to_string(outcomes.size()));
  const auto idx = index_by_team(outcomes);
  const bool grant = line_grants_increment(line, cfg);

  std::vector<TeamLedger> out(ledgers.begin(), ledgers.end());
  for (auto &l : out) {
    const auto &o = outcome_for(idx, outcomes, l.team_id);
    if (grant && on_lottery_side(o.result, line)) l.lottery_index += cfg.alpha;
  }
  return out;
}

Tickets diminish_for_pick(Tickets index, int pick, const MechanismConfig &cfg) {
  return round_half_up(static_cast<double>(index) * cfg.pick_fraction(pick));
}

Tickets diminish_for_playoff(Tickets index, Result result, const MechanismConfig &cfg) {
  return round_half_up(static_cast<double>(index) * cfg.playoff_fraction(result));
}

double win_probability(Tickets team_tickets, Tickets total_tickets) {
  if (total_tickets <= 0) throw EmptyLotteryError("lottery pool has no tickets");
  if (team_tickets < 0 || team_tickets > total_tickets)
    throw ArgumentError("team tickets must lie in [0, total]");
  return static_cast<double>(team_tickets) / static_cast<double>(total_tickets);
}

std::vector<LotteryEntrant> lottery_eligibility(std::span<const TeamLedger> ledgers,
                                                std::span<const SeasonOutcome> outcomes,
                                                std::span<const PickOwnership> ownerships,
                                                LineLevel line) {
  const auto idx = index_by_team(outcomes);
  std::vector<LotteryEntrant> entrants;
  for (const auto &l : ledgers) {
    const auto &o = outcome_for(idx, outcomes, l.team_id);
    if (!on_lottery_side(o.result, line) || o.opted_out) continue;
    if (traded_unprotected(ownerships, l.team_id)) continue;
    entrants.push_back({l.team_id, l.lottery_index});
  }
  return entrants;
}

std::vector<TeamId> run_lottery(std::span<const LotteryEntrant> entrants, Rng &rng,
                                const MechanismConfig &cfg) {
  std::unordered_set<TeamId> seen;
  for (const auto &e : entrants) {
    if (!seen.insert(e.team_id).second)
      throw ArgumentError("team '" + e.team_id + "' entered the lottery twice");
    if (e.tickets < 0) throw ArgumentError("negative ticket count for '" + e.team_id + "'");
  }
  const auto scope = static_cast<std::size_t>(cfg.lottery_scope);
  if (scope == 0) return {};

  std::vector<LotteryEntrant> pool;
  for (const auto &e : entrants)
    if (e.tickets > 0) pool.push_back(e);
  if (pool.empty()) {
    if (entrants.empty())
      throw InsufficientEntrantsError("no lottery entrants for " + std::to_string(scope) +
                                      " picks");
    throw EmptyLotteryError("every lottery entrant holds zero tickets");
  }
  if (pool.size() < scope)
    throw InsufficientEntrantsError(std::to_string(pool.size()) +
                                    " entrants with tickets for " + std::to_string(scope) +
                                    " lottery picks");

  std::vector<TeamId> winners;
  winners.reserve(scope);
  Tickets total = 0;
  for (const auto &e : pool) total += e.tickets;
  while (winners.size() < scope) {
    // Ticket numbers 0..total-1 are laid out in entrant order; draw one.
    auto ticket = static_cast<Tickets>(rng.below(static_cast<std::uint64_t>(total)));
    auto it = pool.begin();
    for (; ticket >= it->tickets; ++it) ticket -= it->tickets;
    winners.push_back(it->team_id);
    total -= it->tickets;
    pool.erase(it);
  }
  return winners;
}

PickResolution resolve_traded_pick(const TeamId &winner,
                                   std::span<const PickOwnership> ownerships) {
  const auto *own = ownership_of(ownerships, winner);
  if (!own || !own->traded()) return {winner, winner};
  if (own->protection == Protection::top_four) return {winner, winner};
  throw DataError("pick of '" + winner + "' was traded unprotected to '" + own->holder_team +
                  "' and cannot win the lottery");
}

TeamLedger apply_opt_out(TeamLedger ledger, Result result, LineLevel line,
                         const MechanismConfig &cfg) {
  if (!on_lottery_side(result, line))
    throw ArgumentError("team '" + ledger.team_id + "' is not on the lottery side of the line (" +
                        std::string(to_string(result)) + ", line " +
                        std::string(to_string(line)) + ") and cannot opt out");
  ledger.lottery_index = std::max<Tickets>(0, ledger.lottery_index - cfg.opt_out_cost);
  return ledger;
}

std::vector<TeamId> assign_remaining_picks(std::span<const SlotCandidate> non_winners,
                                           RemainingPickOrder mode, Rng &rng) {
  struct Keyed {
    const SlotCandidate *c;
    std::size_t tiebreak;
  };
  std::vector<std::size_t> tiebreaks(non_winners.size());
  std::iota(tiebreaks.begin(), tiebreaks.end(), std::size_t{0});
  rng.shuffle(tiebreaks.begin(), tiebreaks.end());

  std::vector<Keyed> keyed;
  keyed.reserve(non_winners.size());
  for (std::size_t i = 0; i < non_winners.size(); ++i)
    keyed.push_back({&non_winners[i], tiebreaks[i]});

  std::sort(keyed.begin(), keyed.end(), [mode](const Keyed &a, const Keyed &b) {
    if (a.c->lottery_side != b.c->lottery_side) return a.c->lottery_side;
    if (mode == RemainingPickOrder::by_standings) {
      if (a.c->wins != b.c->wins) return a.c->wins < b.c->wins;
    } else if (a.c->lottery_index != b.c->lottery_index) {
      return a.c->lottery_index > b.c->lottery_index;
    }
    return a.tiebreak < b.tiebreak;
  });

  std::vector<TeamId> order;
  order.reserve(keyed.size());
  for (const auto &k : keyed) order.push_back(k.c->team_id);
  return order;
}

void validate_season(std::span<const TeamLedger> ledgers,
                     std::span<const SeasonOutcome> outcomes) {
  if (ledgers.size() != outcomes.size())
    throw ConfigError("ledger/outcome count mismatch: " + std::to_string(ledgers.size()) + " vs " +
                      std::to_string(outcomes.size()));
  const auto idx = index_by_team(outcomes);
  std::unordered_set<TeamId> ledger_teams;
  for (const auto &l : ledgers) {
    if (!ledger_teams.insert(l.team_id).second)
      throw ConfigError("duplicate ledger for team '" + l.team_id + "'");
    if (l.lottery_index < 0)
      throw ValidationError("negative lottery index for team '" + l.team_id + "'");
    outcome_for(idx, outcomes, l.team_id);
  }
  std::array<int, 6> counts{};
  for (const auto &o : outcomes) ++counts[static_cast<int>(o.result)];
  for (Result r : kAllResults) {
    if (!is_playoff(r)) continue;
    const int want = kPlayoffResultCounts[static_cast<int>(r)];
    if (counts[static_cast<int>(r)] != want)
      throw ValidationError("season has " + std::to_string(counts[static_cast<int>(r)]) + " " +
                            std::string(to_string(r)) + " results, expected " +
                            std::to_string(want));
  }
}

SeasonResult run_draft(std::span<const TeamLedger> ledgers,
                       std::span<const SeasonOutcome> outcomes,
                       std::span<const PickOwnership> ownerships, LineLevel line, Rng &rng,
                       const MechanismConfig &cfg) {
  validate_season(ledgers, outcomes);
  const auto idx = index_by_team(outcomes);
  validate_ownerships(ownerships, idx);

  SeasonResult res;
  res.ledgers.assign(ledgers.begin(), ledgers.end());
  res.outcomes.assign(outcomes.begin(), outcomes.end());
  for (auto &o : res.outcomes) o.pick_won.reset();

  std::unordered_map<TeamId, std::size_t> ledger_pos;
  for (std::size_t i = 0; i < res.ledgers.size(); ++i) ledger_pos[res.ledgers[i].team_id] = i;

  auto entrants = lottery_eligibility(res.ledgers, outcomes, ownerships, line);

  for (const auto &o : outcomes) {
    if (!o.opted_out) continue;
    if (traded_unprotected(ownerships, o.team_id))
      throw ArgumentError("team '" + o.team_id +
                          "' cannot opt out with a pick it traded away unprotected");
    auto &l = res.ledgers[ledger_pos.at(o.team_id)];
    l = apply_opt_out(l, o.result, line, cfg);
  }

  const auto winners = run_lottery(entrants, rng, cfg);

  std::unordered_set<TeamId> winner_set;
  for (std::size_t i = 0; i < winners.size(); ++i) {
    const int pick = static_cast<int>(i) + 1;
    const auto resolved = resolve_traded_pick(winners[i], ownerships);
    auto &target = res.ledgers[ledger_pos.at(resolved.ledger_target)];
    target.lottery_index = diminish_for_pick(target.lottery_index, pick, cfg);
    res.outcomes[idx.at(winners[i])].pick_won = pick;
    res.draft_order.push_back({pick, winners[i], resolved.benefiting_team, true});
    winner_set.insert(winners[i]);
  }

  // Slotting sees the index the team carried into the draft, after any
  // opt-out charge but before diminishment.
  std::vector<SlotCandidate> rest;
  for (const auto &l : res.ledgers) {
    if (winner_set.count(l.team_id)) continue;
    const auto &o = outcomes[idx.at(l.team_id)];
    rest.push_back({l.team_id, on_lottery_side(o.result, line), o.wins, l.lottery_index});
  }

  for (const auto &o : outcomes) {
    if (on_lottery_side(o.result, line)) continue;
    auto &l = res.ledgers[ledger_pos.at(o.team_id)];
    l.lottery_index = diminish_for_playoff(l.lottery_index, o.result, cfg);
  }

  const auto order = assign_remaining_picks(rest, cfg.remaining_pick_order, rng);
  int pick = static_cast<int>(winners.size());
  for (const auto &team : order) {
    const auto *own = ownership_of(ownerships, team);
    res.draft_order.push_back({++pick, team, own ? own->holder_team : team, false});
  }
  return res;
}

SeasonResult apply_season(std::span<const TeamLedger> ledgers,
                          std::span<const SeasonOutcome> outcomes,
                          std::span<const PickOwnership> ownerships, LineLevel line, Rng &rng,
                          const MechanismConfig &cfg) {
  validate_season(ledgers, outcomes);
  const auto incremented = increment_indices(ledgers, outcomes, line, cfg);
  return run_draft(incremented, outcomes, ownerships, line, rng, cfg);
}

std::vector<TeamLedger> apply_postseason(std::span<const TeamLedger> ledgers,
                                         std::span<const SeasonOutcome> outcomes,
                                         LineLevel line, const MechanismConfig &cfg) {
  validate_season(ledgers, outcomes);
  const auto idx = index_by_team(outcomes);
  std::vector<TeamLedger> out(ledgers.begin(), ledgers.end());
  for (auto &l : out) {
    const auto &o = outcomes[idx.at(l.team_id)];
    if (o.pick_won) l.lottery_index = diminish_for_pick(l.lottery_index, *o.pick_won, cfg);
    if (!on_lottery_side(o.result, line))
      l.lottery_index = diminish_for_playoff(l.lottery_index, o.result, cfg);
  }
  return out;
}

} // namespace cola
