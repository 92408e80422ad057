#ifndef COLA_TESTS_SUPPORT_HPP
#define COLA_TESTS_SUPPORT_HPP

#include "cola/records.hpp"
#include "cola/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace cola::testing {

inline std::filesystem::path data_path(const std::string &name) {
  return std::filesystem::path(COLA_DATA_DIR) / name;
}

/// Thirty teams with a valid bracket: F01..F14 miss the playoffs, then
/// eight first-round losers, four second-round, two conference finalists,
/// the runner-up and the champion. Wins fall with the team number.
inline std::vector<SeasonOutcome> league_outcomes() {
  std::vector<SeasonOutcome> out;
  auto add = [&](Result r, int count) {
    for (int i = 0; i < count; ++i) {
      SeasonOutcome o;
      const int n = static_cast<int>(out.size()) + 1;
      o.team_id = (n < 10 ? "F0" : "F") + std::to_string(n);
      o.result = r;
      o.wins = 10 + 2 * n;
      out.push_back(o);
    }
  };
  add(Result::missed_playoffs, 14);
  add(Result::lost_first_round, 8);
  add(Result::lost_second_round, 4);
  add(Result::lost_conf_finals, 2);
  add(Result::runner_up, 1);
  add(Result::champion, 1);
  return out;
}

inline std::vector<TeamLedger> ledgers_for(const std::vector<SeasonOutcome> &outcomes,
                                           Tickets start_step = 500) {
  std::vector<TeamLedger> out;
  Tickets v = 0;
  for (const auto &o : outcomes) {
    out.push_back({o.team_id, v});
    v += start_step;
  }
  return out;
}

inline LotteryState table1_2025() {
  return parse_lottery_state(read_csv(data_path("season_2025_state.csv")));
}

} // namespace cola::testing

#endif
