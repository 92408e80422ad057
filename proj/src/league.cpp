#include "cola/league.hpp"

#include "cola/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

namespace cola::sim {

using nlohmann::json;

std::vector<double> default_draft_coefficients(int n_teams) {
  // Geometric decay from 0.02 at pick 1.
  constexpr double kFirst = 0.02;
  constexpr double kRatio = 0.88;
  std::vector<double> c(static_cast<std::size_t>(std::max(n_teams, 0)));
  double v = kFirst;
  for (auto &x : c) {
    x = v;
    v *= kRatio;
  }
  return c;
}

void SimConfig::validate() const {
  if (n_teams != 30) throw ConfigError("the league simulator models exactly 30 teams");
  if (games_per_team < 2 * (n_teams - 1))
    throw ConfigError("games_per_team must allow every pair to meet twice");
  if (!(s_max > 0.0)) throw ConfigError("s_max must be positive");
  if (!(initial_strength_low > 0.0) || !(initial_strength_low <= initial_strength_high) ||
      initial_strength_high > s_max)
    throw ConfigError("initial strengths must satisfy 0 < low <= high <= s_max");
  if (!(0.0 < decay_low && decay_low < decay_high && decay_high < 1.0))
    throw ConfigError("decay bounds must satisfy 0 < low < high < 1");
  if (!(beta >= 0.0)) throw ConfigError("beta must be non-negative");
  if (!(strength_floor > 0.0 && strength_floor < s_max))
    throw ConfigError("strength_floor must lie in (0, s_max)");
  if (static_cast<int>(draft_coefficients.size()) != n_teams)
    throw ConfigError("draft_coefficients needs one value per pick");
  for (std::size_t i = 0; i < draft_coefficients.size(); ++i) {
    if (!(draft_coefficients[i] > 0.0))
      throw ConfigError("draft_coefficients must be strictly positive");
    if (i > 0 && draft_coefficients[i] > draft_coefficients[i - 1])
      throw ConfigError("draft_coefficients must be sorted in descending order");
  }
  if (!initial_strengths.empty()) {
    if (static_cast<int>(initial_strengths.size()) != n_teams)
      throw ConfigError("initial_strengths needs one value per team");
    for (double s : initial_strengths)
      if (!(s > 0.0 && s <= s_max))
        throw ConfigError("initial_strengths must lie in (0, s_max]");
  }
  mechanism.validate();
  if (mechanism.lottery_scope > n_teams - kPlayoffTeams)
    throw ConfigError("lottery_scope exceeds the number of non-playoff teams");
}

SimConfig sim_config_from_json(const std::string &text) {
  static const std::set<std::string> known = {
      "n_teams",          "games_per_team", "s_max",
      "initial_strength_low", "initial_strength_high", "decay_low",
      "decay_high",       "beta",           "strength_floor",
      "draft_coefficients", "dynamics_enabled", "initial_strengths",
      "mechanism"};
  SimConfig cfg;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("sim config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("sim config must be a JSON object");
  try {
    for (const auto &[key, _] : j.items())
      if (!known.count(key)) throw ConfigError("sim config: unknown key '" + key + "'");
    auto get = [&](const char *key, auto &field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("n_teams", cfg.n_teams);
    get("games_per_team", cfg.games_per_team);
    get("s_max", cfg.s_max);
    get("initial_strength_low", cfg.initial_strength_low);
    get("initial_strength_high", cfg.initial_strength_high);
    get("decay_low", cfg.decay_low);
    get("decay_high", cfg.decay_high);
    get("beta", cfg.beta);
    get("strength_floor", cfg.strength_floor);
    if (j.contains("n_teams") && !j.contains("draft_coefficients"))
      cfg.draft_coefficients = default_draft_coefficients(cfg.n_teams);
    get("draft_coefficients", cfg.draft_coefficients);
    get("dynamics_enabled", cfg.dynamics_enabled);
    get("initial_strengths", cfg.initial_strengths);
    if (j.contains("mechanism"))
      cfg.mechanism = mechanism_config_from_json(j.at("mechanism").dump());
  } catch (const json::exception &e) {
    throw ConfigError(std::string("sim config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

SimConfig load_sim_config(const std::filesystem::path &path) {
  return sim_config_from_json(read_file(path));
}

std::string to_json(const SimConfig &cfg) {
  json j;
  j["n_teams"] = cfg.n_teams;
  j["games_per_team"] = cfg.games_per_team;
  j["s_max"] = cfg.s_max;
  j["initial_strength_low"] = cfg.initial_strength_low;
  j["initial_strength_high"] = cfg.initial_strength_high;
  j["decay_low"] = cfg.decay_low;
  j["decay_high"] = cfg.decay_high;
  j["beta"] = cfg.beta;
  j["strength_floor"] = cfg.strength_floor;
  j["draft_coefficients"] = cfg.draft_coefficients;
  j["dynamics_enabled"] = cfg.dynamics_enabled;
  if (!cfg.initial_strengths.empty()) j["initial_strengths"] = cfg.initial_strengths;
  j["mechanism"] = json::parse(cola::to_json(cfg.mechanism));
  return j.dump(2);
}

std::vector<Game> build_schedule(int n_teams, int games_per_team, Rng &rng) {
  if (n_teams < 2) throw ConfigError("a schedule needs at least two teams");
  const int base = 2 * (n_teams - 1);
  if (games_per_team < base)
    throw ConfigError("each team needs at least " + std::to_string(base) +
                      " games to meet every opponent twice");
  if ((static_cast<long long>(n_teams) * games_per_team) % 2 != 0)
    throw ConfigError("odd total number of team-games; schedule is infeasible");
  const int extra = games_per_team - base;
  if (extra > 0 && n_teams % 2 != 0)
    throw ConfigError("extra games need an even number of teams");

  std::vector<Game> games;
  games.reserve(static_cast<std::size_t>(n_teams) * games_per_team / 2);
  for (int i = 0; i < n_teams; ++i)
    for (int j = i + 1; j < n_teams; ++j) {
      games.emplace_back(i, j);
      games.emplace_back(i, j);
    }
  std::vector<int> slots(static_cast<std::size_t>(n_teams));
  for (int round = 0; round < extra; ++round) {
    std::iota(slots.begin(), slots.end(), 0);
    rng.shuffle(slots.begin(), slots.end());
    for (int k = 0; k < n_teams; k += 2)
      games.emplace_back(std::min(slots[k], slots[k + 1]), std::max(slots[k], slots[k + 1]));
  }
  return games;
}

int simulate_game(double s_i, double s_j, Rng &rng) {
  if (!(s_i > 0.0) || !(s_j > 0.0)) throw ArgumentError("team strengths must be positive");
  return rng.uniform() < s_i / (s_i + s_j) ? 0 : 1;
}

int simulate_series(double s_i, double s_j, Rng &rng) {
  int a = 0, b = 0;
  while (a < 4 && b < 4) (simulate_game(s_i, s_j, rng) == 0 ? a : b)++;
  return a == 4 ? 0 : 1;
}

std::vector<Result> simulate_playoffs(const std::vector<int> &seeded,
                                      const std::vector<double> &strengths, Rng &rng) {
  if (seeded.size() != kBracketSeeds.size())
    throw ArgumentError("the playoff bracket needs exactly 16 teams");
  // Positions in `seeded`, arranged in bracket order.
  std::vector<std::size_t> alive;
  for (int seed : kBracketSeeds) alive.push_back(static_cast<std::size_t>(seed - 1));

  std::vector<Result> results(seeded.size(), Result::champion);
  constexpr std::array<Result, 4> kLoser = {Result::lost_first_round, Result::lost_second_round,
                                            Result::lost_conf_finals, Result::runner_up};
  for (Result loser_result : kLoser) {
    std::vector<std::size_t> next;
    for (std::size_t k = 0; k < alive.size(); k += 2) {
      const auto a = alive[k], b = alive[k + 1];
      const int w = simulate_series(strengths[seeded[a]], strengths[seeded[b]], rng);
      next.push_back(w == 0 ? a : b);
      results[w == 0 ? b : a] = loser_result;
    }
    alive = std::move(next);
  }
  return results;
}

std::vector<int> rank_by_wins(const std::vector<int> &wins, Rng &rng) {
  std::vector<int> order(wins.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order.begin(), order.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return wins[a] > wins[b]; });
  return order;
}

void apply_decay(std::vector<double> &strengths, double low, double high, Rng &rng) {
  for (auto &s : strengths) s *= 1.0 - rng.uniform(low, high);
}

double apply_draft_boost(double strength, int pick, const SimConfig &cfg) {
  if (pick < 1 || pick > static_cast<int>(cfg.draft_coefficients.size()))
    throw ArgumentError("pick " + std::to_string(pick) + " is out of range");
  const double c = cfg.draft_coefficients[pick - 1];
  return std::min(cfg.s_max, strength + c * (cfg.s_max - strength) * cfg.beta);
}

void spread_strengths(std::vector<double> &strengths, Rng &rng) {
  if (strengths.size() < 2) return;
  const auto [lo_it, hi_it] = std::minmax_element(strengths.begin(), strengths.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) return;

  double new_lo = hi, new_hi = lo;
  for (std::size_t k = 0; k < strengths.size(); ++k) {
    const double d = rng.uniform(lo, hi);
    new_lo = std::min(new_lo, d);
    new_hi = std::max(new_hi, d);
  }
  const double scale = (new_hi - new_lo) / (hi - lo);
  for (auto &s : strengths) s = new_lo + (s - lo) * scale;
}

std::string team_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%02d", index + 1);
  return buf;
}

LeagueState make_initial_state(const SimConfig &cfg, std::uint64_t seed) {
  cfg.validate();
  LeagueState st;
  st.seed = seed;
  const auto n = static_cast<std::size_t>(cfg.n_teams);
  if (!cfg.initial_strengths.empty()) {
    st.strengths = cfg.initial_strengths;
  } else {
    Rng rng = Rng(seed).fork("initial-strengths");
    for (std::size_t i = 0; i < n; ++i)
      st.strengths.push_back(rng.uniform(cfg.initial_strength_low, cfg.initial_strength_high));
  }

  std::vector<int> by_strength(n);
  std::iota(by_strength.begin(), by_strength.end(), 0);
  std::stable_sort(by_strength.begin(), by_strength.end(),
                   [&](int a, int b) { return st.strengths[a] > st.strengths[b]; });
  st.ledgers.resize(n);
  for (std::size_t rank = 0; rank < n; ++rank) {
    const int team = by_strength[rank];
    st.ledgers[team].team_id = team_name(team);
    st.ledgers[team].lottery_index = round_half_up(3.0 * static_cast<double>(cfg.mechanism.alpha) *
                                                   static_cast<double>(rank) /
                                                   static_cast<double>(n - 1));
  }
  return st;
}

std::vector<SeasonOutcome> season_outcomes(const SeasonRecord &rec) {
  std::vector<SeasonOutcome> out;
  for (std::size_t i = 0; i < rec.wins.size(); ++i) {
    SeasonOutcome o;
    o.team_id = team_name(static_cast<int>(i));
    o.result = rec.results[i];
    o.wins = rec.wins[i];
    out.push_back(std::move(o));
  }
  return out;
}

SeasonRecord simulate_season(LeagueState &state, const SimConfig &cfg) {
  const auto n = static_cast<std::size_t>(cfg.n_teams);
  const Rng season_rng = Rng(state.seed).fork(static_cast<std::uint64_t>(state.season_counter));

  SeasonRecord rec;
  rec.season = state.season_counter + 1;
  rec.strengths = state.strengths;
  rec.ledgers_before = state.ledgers;

  Rng schedule_rng = season_rng.fork("schedule");
  const auto games = build_schedule(cfg.n_teams, cfg.games_per_team, schedule_rng);
  Rng game_rng = season_rng.fork("games");
  rec.wins.assign(n, 0);
  for (const auto &[i, j] : games)
    ++rec.wins[simulate_game(state.strengths[i], state.strengths[j], game_rng) == 0 ? i : j];

  Rng standings_rng = season_rng.fork("standings");
  rec.standings = rank_by_wins(rec.wins, standings_rng);
  const std::vector<int> seeded(rec.standings.begin(), rec.standings.begin() + kPlayoffTeams);
  Rng playoff_rng = season_rng.fork("playoffs");
  const auto bracket = simulate_playoffs(seeded, state.strengths, playoff_rng);
  rec.results.assign(n, Result::missed_playoffs);
  for (std::size_t k = 0; k < seeded.size(); ++k) rec.results[seeded[k]] = bracket[k];

  const auto outcomes = season_outcomes(rec);
  const auto incremented =
      increment_indices(state.ledgers, outcomes, LineLevel::no_move, cfg.mechanism);
  for (const auto &l : incremented)
    rec.draft_index.push_back(l.lottery_index);

  Rng draft_rng = season_rng.fork("draft");
  rec.draft_seed = draft_rng.seed();
  auto drafted = apply_season(state.ledgers, outcomes, {}, LineLevel::no_move, draft_rng,
                              cfg.mechanism);
  rec.draft_order = std::move(drafted.draft_order);
  rec.ledgers = std::move(drafted.ledgers);
  state.ledgers = rec.ledgers;

  std::unordered_map<TeamId, int> team_index;
  for (std::size_t i = 0; i < n; ++i)
    team_index[team_name(static_cast<int>(i))] = static_cast<int>(i);
  rec.picks.assign(n, 0);
  for (const auto &slot : rec.draft_order) rec.picks[team_index.at(slot.team_id)] = slot.pick;

  if (cfg.dynamics_enabled) {
    auto &s = state.strengths;
    Rng decay_rng = season_rng.fork("decay");
    apply_decay(s, cfg.decay_low, cfg.decay_high, decay_rng);
    for (std::size_t i = 0; i < n; ++i) s[i] = apply_draft_boost(s[i], rec.picks[i], cfg);
    Rng spread_rng = season_rng.fork("spread");
    spread_strengths(s, spread_rng);
    for (auto &x : s) x = std::clamp(x, cfg.strength_floor, cfg.s_max);
  }
  ++state.season_counter;
  return rec;
}

void write_season_header(std::ostream &out) {
  out << "season,team,wins,result,pick,index,strength\n";
}

void write_season_rows(std::ostream &out, const SeasonRecord &rec) {
  char buf[32];
  for (std::size_t i = 0; i < rec.wins.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f", rec.strengths[i]);
    out << rec.season << ',' << team_name(static_cast<int>(i)) << ',' << rec.wins[i] << ','
        << to_string(rec.results[i]) << ',' << rec.picks[i] << ',' << rec.ledgers[i].lottery_index
        << ',' << buf << '\n';
  }
}

} // namespace cola::sim
