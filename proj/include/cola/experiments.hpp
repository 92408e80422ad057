#ifndef COLA_EXPERIMENTS_HPP
#define COLA_EXPERIMENTS_HPP

#include "cola/league.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cola::experiments {

/// A finished experiment: the table it produced plus summary lines, tagged
/// with everything needed to reproduce it.
struct ExperimentReport {
  std::string name;
  std::string config_json;
  std::uint64_t seed = 0;
  std::string csv;
  std::vector<std::pair<std::string, std::string>> summary;

  std::string summary_text() const;
};

struct AvgDraftPick {
  std::vector<double> mean_pick; // per team
  double grand_mean = 0.0;
};

AvgDraftPick avg_draft_pick(int seasons, const sim::SimConfig &cfg, std::uint64_t seed);

struct Streaks {
  std::vector<int> max_playoff_streak;     // per team, across replicates
  std::vector<int> max_non_playoff_streak; // per team, across replicates
  int overall_max_playoff = 0;
  int overall_max_non_playoff = 0;
};

/// Longest runs of true and false values in `made_playoffs`.
std::pair<int, int> longest_runs(const std::vector<bool> &made_playoffs);

/// Replicate r runs from derive_seed(seed, r); replicates run concurrently.
Streaks streaks(int replicates, int seasons, const sim::SimConfig &cfg, std::uint64_t seed);

struct TrajectoryPoint {
  int season = 0;
  int team = 0;
  Tickets index = 0; // after the season's draft
  Result result = Result::missed_playoffs;
  int pick = 0;
};

std::vector<TrajectoryPoint> index_trajectories(const std::vector<int> &teams, int seasons,
                                                const sim::SimConfig &cfg, std::uint64_t seed);

/// Improvement in pick-1 odds for a team holding `top_tickets` of a pool of
/// `pool` if `delta` tickets leave the pool: T/(P-delta) - T/P.
double manipulation_gain(double top_tickets, double pool, double delta);

/**
 * Boundary statistics for one season. The boundary teams are the two
 * lowest playoff qualifiers and the two best non-qualifiers by standings.
 */
struct ManipulationSeason {
  int season = 0;
  Tickets pool = 0;
  Tickets top_tickets = 0;
  /// |higher index of the two playoff teams - lower index of the two
  /// non-playoff teams|. Headline measure.
  Tickets delta_paired = 0;
  /// Larger index of the two non-playoff teams minus the smaller of the two
  /// playoff teams: the biggest pool cut any single swap could make.
  Tickets delta_swap = 0;
  double gain = 0.0;      // from delta_paired
  double gain_swap = 0.0; // from delta_swap
};

struct GainSummary {
  double mean_delta = 0.0;
  double mean_gain = 0.0;
  double max_gain = 0.0;
  double share_below_1_5pct = 0.0;
};

struct ManipulationBenefit {
  std::vector<ManipulationSeason> seasons;
  double mean_pool = 0.0;
  double mean_top = 0.0;
  GainSummary paired;
  GainSummary swap;
  int skipped = 0;
};

/// Boundary statistics for one simulated season. Returns nullopt for an
/// empty pool.
std::optional<ManipulationSeason> manipulation_season(const sim::SeasonRecord &rec);

ManipulationBenefit manipulation_benefit(int seasons, const sim::SimConfig &cfg,
                                         std::uint64_t seed);

inline constexpr std::array<const char *, 4> kExperimentNames = {
    "avg_draft_pick", "streaks", "index_trajectories", "manipulation_benefit"};

struct RunOptions {
  int seasons = 0;    // 0: experiment default
  int replicates = 0; // streaks only
  std::vector<int> teams; // index_trajectories; empty: two seeded picks
};

/// Runs a named experiment with its default sizes unless overridden.
/// Throws ArgumentError for an unknown name.
ExperimentReport run_experiment(const std::string &name, const sim::SimConfig &cfg,
                                std::uint64_t seed, const RunOptions &opts = {});

} // namespace cola::experiments

#endif
