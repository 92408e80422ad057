#ifndef COLA_TYPES_HPP
#define COLA_TYPES_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cola {

using TeamId = std::string;

/// Lottery index / ticket count. Always an exact, non-negative integer.
using Tickets = std::int64_t;

struct TeamLedger {
  TeamId team_id;
  Tickets lottery_index = 0;

  friend bool operator==(const TeamLedger &, const TeamLedger &) = default;
};

/// Season result, ordered from worst to best.
enum class Result {
  missed_playoffs,
  lost_first_round,
  lost_second_round,
  lost_conf_finals,
  runner_up,
  champion,
};

inline constexpr std::array<Result, 6> kAllResults = {
    Result::missed_playoffs,   Result::lost_first_round, Result::lost_second_round,
    Result::lost_conf_finals,  Result::runner_up,        Result::champion};

/// Playoff bracket composition: teams per playoff result, indexed by Result.
inline constexpr std::array<int, 6> kPlayoffResultCounts = {0, 8, 4, 2, 1, 1};
inline constexpr int kPlayoffTeams = 16;

std::string_view to_string(Result r);
Result parse_result(std::string_view s);

inline bool is_playoff(Result r) { return r != Result::missed_playoffs; }

/**
 * Where the lottery line sits. Each level corresponds to one survey option,
 * in the same order (option 1 == no_move). Moving the line one level deeper
 * brings the next playoff round's losers into the lottery.
 */
enum class LineLevel {
  no_move,
  include_R1_losers,
  include_R2_losers,
  include_CF_losers,
  include_finals_loser,
  include_all,
};

std::string_view to_string(LineLevel l);
LineLevel parse_line_level(std::string_view s);

/// Survey option (1..6) for a line level and back.
inline int survey_option(LineLevel l) { return static_cast<int>(l) + 1; }
LineLevel line_from_option(int option);

/// Teams left outside the lottery at a given line in a 30-team, 16-playoff
/// league: 16, 8, 4, 2, 1, 0.
int excluded_team_count(LineLevel l);

/// True when a team with result `r` is on the lottery side of `line`.
inline bool on_lottery_side(Result r, LineLevel line) {
  return static_cast<int>(r) <= static_cast<int>(line);
}

enum class Protection { none, top_four };

std::string_view to_string(Protection p);
Protection parse_protection(std::string_view s);

/// Who holds a team's own pick this season. Teams without a record hold
/// their own pick.
struct PickOwnership {
  TeamId original_team;
  TeamId holder_team;
  Protection protection = Protection::none;

  bool traded() const { return holder_team != original_team; }
};

struct SeasonOutcome {
  TeamId team_id;
  Result result = Result::missed_playoffs;
  bool opted_out = false;
  /// Lottery pick won this season. Set by the draw; given for history.
  std::optional<int> pick_won;
  /// Regular-season wins, used to slot the non-lottery picks.
  int wins = 0;
};

struct LotteryEntrant {
  TeamId team_id;
  Tickets tickets = 0;
};

/// One slot of the draft. `team_id` is the team whose pick it is
/// originally; `holder` is who actually selects.
struct DraftSlot {
  int pick = 0;
  TeamId team_id;
  TeamId holder;
  bool lottery_winner = false;
};

using DraftOrder = std::vector<DraftSlot>;

} // namespace cola

#endif
