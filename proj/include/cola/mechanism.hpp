#ifndef COLA_MECHANISM_HPP
#define COLA_MECHANISM_HPP

#include "cola/config.hpp"
#include "cola/rng.hpp"
#include "cola/types.hpp"

#include <span>
#include <vector>

namespace cola {

/// Nearest integer, halves rounded up. Diminished indices use this rule:
/// 1750 * 0.25 = 437.5 -> 438.
Tickets round_half_up(double x);

/// Adds alpha to every lottery-side team when the strong-year rule grants
/// increments for `line`. Output keeps the order of `ledgers`.
std::vector<TeamLedger> increment_indices(std::span<const TeamLedger> ledgers,
                                          std::span<const SeasonOutcome> outcomes,
                                          LineLevel line, const MechanismConfig &cfg);

/// True when lottery-side teams receive alpha this season.
bool line_grants_increment(LineLevel line, const MechanismConfig &cfg);

Tickets diminish_for_pick(Tickets index, int pick, const MechanismConfig &cfg);
Tickets diminish_for_playoff(Tickets index, Result result, const MechanismConfig &cfg);

/// Chance of drawing pick 1: team tickets over the pool.
double win_probability(Tickets team_tickets, Tickets total_tickets);

/**
 * Entrants for this season's draw with their ticket counts (= current
 * lottery index). Lottery-side teams enter unless they opted out or their
 * own pick was traded away without protection. Zero-ticket entrants are
 * kept here; run_lottery skips them.
 */
std::vector<LotteryEntrant> lottery_eligibility(std::span<const TeamLedger> ledgers,
                                                std::span<const SeasonOutcome> outcomes,
                                                std::span<const PickOwnership> ownerships,
                                                LineLevel line);

/// Sequential ticket-weighted draw without replacement. Returns the winners
/// of picks 1..lottery_scope in order.
std::vector<TeamId> run_lottery(std::span<const LotteryEntrant> entrants, Rng &rng,
                                const MechanismConfig &cfg);

struct PickResolution {
  TeamId benefiting_team; // who selects with the pick
  TeamId ledger_target;   // whose index is diminished
};

PickResolution resolve_traded_pick(const TeamId &winner,
                                   std::span<const PickOwnership> ownerships);

/// Charges the opt-out cost, floored at zero. Only lottery-side teams may
/// opt out.
TeamLedger apply_opt_out(TeamLedger ledger, Result result, LineLevel line,
                         const MechanismConfig &cfg);

struct SlotCandidate {
  TeamId team_id;
  bool lottery_side = true;
  int wins = 0;
  Tickets lottery_index = 0;
};

/// Orders the teams that did not win a lottery pick: lottery-side teams
/// first, then the rest. Within each group, fewest wins first
/// (by_standings) or highest index first (by_lottery_index); ties are broken
/// by `rng`.
std::vector<TeamId> assign_remaining_picks(std::span<const SlotCandidate> non_winners,
                                           RemainingPickOrder mode, Rng &rng);

struct SeasonResult {
  std::vector<TeamLedger> ledgers;
  DraftOrder draft_order;
  /// Input outcomes with pick_won filled in from the draw.
  std::vector<SeasonOutcome> outcomes;
};

/// Draft for ledgers that already include this season's increment:
/// eligibility, opt-outs, draw, pick and playoff diminishment, slotting.
SeasonResult run_draft(std::span<const TeamLedger> ledgers,
                       std::span<const SeasonOutcome> outcomes,
                       std::span<const PickOwnership> ownerships, LineLevel line, Rng &rng,
                       const MechanismConfig &cfg);

/// Full season: increment_indices followed by run_draft.
SeasonResult apply_season(std::span<const TeamLedger> ledgers,
                          std::span<const SeasonOutcome> outcomes,
                          std::span<const PickOwnership> ownerships, LineLevel line, Rng &rng,
                          const MechanismConfig &cfg);

/// Ledger arithmetic after a season whose lottery picks are already known
/// (`pick_won` in the outcomes): pick and playoff diminishment only.
std::vector<TeamLedger> apply_postseason(std::span<const TeamLedger> ledgers,
                                         std::span<const SeasonOutcome> outcomes,
                                         LineLevel line, const MechanismConfig &cfg);

/// Checks one outcome per ledger and the 1/1/2/4/8 playoff bracket.
void validate_season(std::span<const TeamLedger> ledgers,
                     std::span<const SeasonOutcome> outcomes);

} // namespace cola

#endif
