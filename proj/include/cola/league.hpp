#ifndef COLA_LEAGUE_HPP
#define COLA_LEAGUE_HPP

#include "cola/config.hpp"
#include "cola/mechanism.hpp"
#include "cola/rng.hpp"
#include "cola/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cola::sim {

/// Default pick-value table: positive, strictly descending and convex.
/// Stand-in values; c(1) = 0.02.
std::vector<double> default_draft_coefficients(int n_teams = 30);

struct SimConfig {
  int n_teams = 30;
  int games_per_team = 82;
  double s_max = 100.0;
  double initial_strength_low = 5.0;
  double initial_strength_high = 100.0;
  double decay_low = 0.05;
  double decay_high = 0.15;
  double beta = 7.5;
  double strength_floor = 0.1;
  std::vector<double> draft_coefficients = default_draft_coefficients();
  /// Off: strengths stay fixed between seasons (diagnostics).
  bool dynamics_enabled = true;
  /// Overrides the random initial strengths when non-empty.
  std::vector<double> initial_strengths;
  MechanismConfig mechanism;

  void validate() const;
};

SimConfig sim_config_from_json(const std::string &text);
SimConfig load_sim_config(const std::filesystem::path &path);
std::string to_json(const SimConfig &cfg);

using Game = std::pair<int, int>;

/// Every pair meets twice; the remaining games are dealt out as random
/// perfect matchings so each team plays exactly `games_per_team`.
std::vector<Game> build_schedule(int n_teams, int games_per_team, Rng &rng);

/// Bradley-Terry: index 0 (first team) wins with probability s_i/(s_i+s_j).
/// Returns 0 if the first team wins, 1 otherwise.
int simulate_game(double s_i, double s_j, Rng &rng);

/// First to four wins. Returns 0 if the first team takes the series.
int simulate_series(double s_i, double s_j, Rng &rng);

/// Seed order of the single 16-team bracket: neighbours meet in round one,
/// neighbouring winners meet next, and so on.
inline constexpr std::array<int, 16> kBracketSeeds = {1, 16, 8, 9, 4, 13, 5, 12,
                                                      2, 15, 7, 10, 3, 14, 6, 11};

/// Plays the bracket for `seeded` (team indices, seed 1 first, 16 teams).
/// Returns the playoff result of each of those teams, same order.
std::vector<Result> simulate_playoffs(const std::vector<int> &seeded,
                                      const std::vector<double> &strengths, Rng &rng);

/// Teams ranked by wins, most first; equal records ordered by `rng`.
std::vector<int> rank_by_wins(const std::vector<int> &wins, Rng &rng);

void apply_decay(std::vector<double> &strengths, double low, double high, Rng &rng);

double apply_draft_boost(double strength, int pick, const SimConfig &cfg);

/// Draws n uniform numbers in [min, max] of the current strengths and maps
/// the strengths linearly onto the range those draws span.
void spread_strengths(std::vector<double> &strengths, Rng &rng);

struct LeagueState {
  std::vector<double> strengths;
  std::vector<TeamLedger> ledgers;
  int season_counter = 0;
  std::uint64_t seed = 0;
};

std::string team_name(int index);

/// Initial strengths U(low, high) (or the configured override); the weakest
/// team starts at 3*alpha, the strongest at 0, linear by strength rank.
LeagueState make_initial_state(const SimConfig &cfg, std::uint64_t seed);

struct SeasonRecord {
  int season = 0;
  std::vector<double> strengths; // during the season
  std::vector<int> wins;
  std::vector<int> standings; // team indices, best record first
  std::vector<Result> results;
  std::vector<Tickets> draft_index; // index entering the draft
  std::vector<int> picks;
  std::vector<TeamLedger> ledgers_before; // entering the season
  std::vector<TeamLedger> ledgers;        // after the draft
  DraftOrder draft_order;
  std::uint64_t draft_seed = 0;
};

/// Runs one season and advances `state`: schedule, regular season,
/// playoffs, draft (line never moved), then decay, draft boost, spreading.
SeasonRecord simulate_season(LeagueState &state, const SimConfig &cfg);

/// Outcomes fed to the mechanism for a simulated season.
std::vector<SeasonOutcome> season_outcomes(const SeasonRecord &rec);

void write_season_header(std::ostream &out);
void write_season_rows(std::ostream &out, const SeasonRecord &rec);

} // namespace cola::sim

#endif
