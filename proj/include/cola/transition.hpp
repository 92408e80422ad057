#ifndef COLA_TRANSITION_HPP
#define COLA_TRANSITION_HPP

#include "cola/config.hpp"
#include "cola/records.hpp"
#include "cola/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace cola {

inline constexpr int kDefaultEpoch = 1999;

/// One team-season of league history. Picks are the historical lottery
/// results, so nothing is drawn during replay.
struct HistoryEvent {
  int season = 0;
  SeasonOutcome outcome;
};

/// Expected ledger at a snapshot date, e.g. "1 May 25".
struct ReferenceVector {
  std::string label;
  std::vector<TeamLedger> entries;
};

/**
 * Event log: `season,team_id,result,pick_won` with pick_won blank when the
 * team won no lottery pick. Events come back ordered by season (stable
 * within a season). Throws ParseError for a malformed record and
 * ValidationError for a broken per-season rule.
 */
std::vector<HistoryEvent> parse_event_log(const std::string &text, int epoch = kDefaultEpoch);
std::vector<HistoryEvent> load_event_log(const std::filesystem::path &path,
                                         int epoch = kDefaultEpoch);

/// Seasons contiguous from `epoch`; one record per team per season; a full
/// playoff bracket; at most one winner per pick 1..4, all non-playoff teams.
void validate_history(const std::vector<HistoryEvent> &events, int epoch = kDefaultEpoch);

/// Folds increments and diminishments over the log, every team starting at
/// zero. Ledgers are returned in order of first appearance.
std::vector<TeamLedger> replay_history(const std::vector<HistoryEvent> &events,
                                       const MechanismConfig &cfg);

/// Reference file: `team_id,lottery_index`; a `# snapshot: <label>` comment
/// names the snapshot.
ReferenceVector parse_reference(const std::string &text);
ReferenceVector load_reference(const std::filesystem::path &path);

struct LedgerDelta {
  TeamId team_id;
  Tickets actual = 0;
  Tickets expected = 0;
};

/// Per-team mismatches, in reference order. Empty when every team matches.
/// Throws DataError when the team sets differ.
std::vector<LedgerDelta> compare_to_reference(const std::vector<TeamLedger> &ledgers,
                                              const ReferenceVector &reference);

} // namespace cola

#endif
