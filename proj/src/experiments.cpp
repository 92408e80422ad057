#include "cola/experiments.hpp"

#include "cola/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace cola::experiments {

namespace {

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Runs body(0..count-1) on up to hardware_concurrency threads. Each index
// must write only its own output slot.
template <typename F> void parallel_for(int count, F body) {
  const int workers =
      std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, std::max(count, 1));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) body(i);
    });
  for (auto &t : pool) t.join();
}

} // namespace

std::string ExperimentReport::summary_text() const {
  std::ostringstream out;
  out << "experiment: " << name << '\n' << "seed: " << seed << '\n';
  for (const auto &[k, v] : summary) out << k << ": " << v << '\n';
  return out.str();
}

AvgDraftPick avg_draft_pick(int seasons, const sim::SimConfig &cfg, std::uint64_t seed) {
  if (seasons < 1) throw ArgumentError("seasons must be positive");
  auto state = sim::make_initial_state(cfg, seed);
  const auto n = static_cast<std::size_t>(cfg.n_teams);
  std::vector<long long> total(n, 0);
  for (int s = 0; s < seasons; ++s) {
    const auto rec = sim::simulate_season(state, cfg);
    for (std::size_t i = 0; i < n; ++i) total[i] += rec.picks[i];
  }
  AvgDraftPick out;
  long long grand = 0;
  for (auto t : total) {
    out.mean_pick.push_back(static_cast<double>(t) / seasons);
    grand += t;
  }
  out.grand_mean = static_cast<double>(grand) / (static_cast<double>(seasons) * n);
  return out;
}

std::pair<int, int> longest_runs(const std::vector<bool> &made_playoffs) {
  int best_in = 0, best_out = 0, run = 0;
  for (std::size_t k = 0; k < made_playoffs.size(); ++k) {
    run = (k > 0 && made_playoffs[k] == made_playoffs[k - 1]) ? run + 1 : 1;
    (made_playoffs[k] ? best_in : best_out) =
        std::max(made_playoffs[k] ? best_in : best_out, run);
  }
  return {best_in, best_out};
}

Streaks streaks(int replicates, int seasons, const sim::SimConfig &cfg, std::uint64_t seed) {
  if (replicates < 1 || seasons < 1)
    throw ArgumentError("replicates and seasons must be positive");
  const auto n = static_cast<std::size_t>(cfg.n_teams);
  std::vector<std::vector<std::pair<int, int>>> per_rep(static_cast<std::size_t>(replicates));

  parallel_for(replicates, [&](int r) {
    auto state = sim::make_initial_state(cfg, derive_seed(seed, static_cast<std::uint64_t>(r)));
    std::vector<std::vector<bool>> made(n);
    for (int s = 0; s < seasons; ++s) {
      const auto rec = sim::simulate_season(state, cfg);
      for (std::size_t i = 0; i < n; ++i) made[i].push_back(is_playoff(rec.results[i]));
    }
    for (std::size_t i = 0; i < n; ++i) per_rep[r].push_back(longest_runs(made[i]));
  });

  Streaks out;
  out.max_playoff_streak.assign(n, 0);
  out.max_non_playoff_streak.assign(n, 0);
  for (const auto &rep : per_rep)
    for (std::size_t i = 0; i < n; ++i) {
      out.max_playoff_streak[i] = std::max(out.max_playoff_streak[i], rep[i].first);
      out.max_non_playoff_streak[i] = std::max(out.max_non_playoff_streak[i], rep[i].second);
    }
  out.overall_max_playoff =
      *std::max_element(out.max_playoff_streak.begin(), out.max_playoff_streak.end());
  out.overall_max_non_playoff =
      *std::max_element(out.max_non_playoff_streak.begin(), out.max_non_playoff_streak.end());
  return out;
}

std::vector<TrajectoryPoint> index_trajectories(const std::vector<int> &teams, int seasons,
                                                const sim::SimConfig &cfg, std::uint64_t seed) {
  for (int t : teams)
    if (t < 0 || t >= cfg.n_teams) throw ArgumentError("team index out of range");
  auto state = sim::make_initial_state(cfg, seed);
  std::vector<TrajectoryPoint> out;
  for (int s = 0; s < seasons; ++s) {
    const auto rec = sim::simulate_season(state, cfg);
    for (int t : teams)
      out.push_back({rec.season, t, rec.ledgers[t].lottery_index, rec.results[t], rec.picks[t]});
  }
  return out;
}

double manipulation_gain(double top_tickets, double pool, double delta) {
  if (!(pool > 0.0)) throw EmptyLotteryError("lottery pool has no tickets");
  if (!(pool - delta > 0.0)) throw ArgumentError("delta must be smaller than the pool");
  return top_tickets / (pool - delta) - top_tickets / pool;
}

std::optional<ManipulationSeason> manipulation_season(const sim::SeasonRecord &rec) {
  ManipulationSeason m;
  m.season = rec.season;
  for (std::size_t i = 0; i < rec.results.size(); ++i)
    if (!is_playoff(rec.results[i])) {
      m.pool += rec.draft_index[i];
      m.top_tickets = std::max(m.top_tickets, rec.draft_index[i]);
    }
  if (m.pool <= 0) return std::nullopt;

  const auto idx = [&](std::size_t rank) { return rec.draft_index[rec.standings[rank]]; };
  const std::size_t line = kPlayoffTeams;
  const Tickets p_lo = std::min(idx(line - 2), idx(line - 1));
  const Tickets p_hi = std::max(idx(line - 2), idx(line - 1));
  const Tickets np_lo = std::min(idx(line), idx(line + 1));
  const Tickets np_hi = std::max(idx(line), idx(line + 1));
  // A swap can take at most the whole pool bar the top team's own tickets.
  const Tickets cap = m.pool - m.top_tickets;
  m.delta_paired = std::min(p_hi > np_lo ? p_hi - np_lo : np_lo - p_hi, cap);
  m.delta_swap = std::min(std::max<Tickets>(0, np_hi - p_lo), cap);

  const auto T = static_cast<double>(m.top_tickets);
  const auto P = static_cast<double>(m.pool);
  m.gain = manipulation_gain(T, P, static_cast<double>(m.delta_paired));
  m.gain_swap = manipulation_gain(T, P, static_cast<double>(m.delta_swap));
  return m;
}

ManipulationBenefit manipulation_benefit(int seasons, const sim::SimConfig &cfg,
                                         std::uint64_t seed) {
  if (seasons < 1) throw ArgumentError("seasons must be positive");
  auto state = sim::make_initial_state(cfg, seed);
  ManipulationBenefit out;
  for (int s = 0; s < seasons; ++s) {
    const auto rec = sim::simulate_season(state, cfg);
    if (auto m = manipulation_season(rec))
      out.seasons.push_back(*m);
    else
      ++out.skipped;
  }
  if (out.seasons.empty()) return out;

  const auto k = static_cast<double>(out.seasons.size());
  auto summarize = [&](auto delta_of, auto gain_of) {
    GainSummary g;
    int below = 0;
    for (const auto &m : out.seasons) {
      g.mean_delta += static_cast<double>(delta_of(m));
      g.mean_gain += gain_of(m);
      g.max_gain = std::max(g.max_gain, gain_of(m));
      if (gain_of(m) < 0.015) ++below;
    }
    g.mean_delta /= k;
    g.mean_gain /= k;
    g.share_below_1_5pct = below / k;
    return g;
  };
  for (const auto &m : out.seasons) {
    out.mean_pool += static_cast<double>(m.pool);
    out.mean_top += static_cast<double>(m.top_tickets);
  }
  out.mean_pool /= k;
  out.mean_top /= k;
  out.paired = summarize([](const auto &m) { return m.delta_paired; },
                         [](const auto &m) { return m.gain; });
  out.swap = summarize([](const auto &m) { return m.delta_swap; },
                       [](const auto &m) { return m.gain_swap; });
  return out;
}

ExperimentReport run_experiment(const std::string &name, const sim::SimConfig &cfg,
                                std::uint64_t seed, const RunOptions &opts) {
  ExperimentReport rep;
  rep.name = name;
  rep.config_json = sim::to_json(cfg);
  rep.seed = seed;
  std::ostringstream csv;

  if (name == "avg_draft_pick") {
    const int seasons = opts.seasons ? opts.seasons : 1000;
    const auto r = avg_draft_pick(seasons, cfg, seed);
    csv << "team,mean_pick\n";
    for (std::size_t i = 0; i < r.mean_pick.size(); ++i)
      csv << sim::team_name(static_cast<int>(i)) << ',' << fmt(r.mean_pick[i]) << '\n';
    const auto [lo, hi] = std::minmax_element(r.mean_pick.begin(), r.mean_pick.end());
    rep.summary = {{"seasons", std::to_string(seasons)},
                   {"grand_mean_pick", fmt(r.grand_mean)},
                   {"min_mean_pick", fmt(*lo)},
                   {"max_mean_pick", fmt(*hi)}};
  } else if (name == "streaks") {
    const int seasons = opts.seasons ? opts.seasons : 100;
    const int replicates = opts.replicates ? opts.replicates : 50;
    const auto r = streaks(replicates, seasons, cfg, seed);
    csv << "team,max_playoff_streak,max_non_playoff_streak\n";
    for (std::size_t i = 0; i < r.max_playoff_streak.size(); ++i)
      csv << sim::team_name(static_cast<int>(i)) << ',' << r.max_playoff_streak[i] << ','
          << r.max_non_playoff_streak[i] << '\n';
    rep.summary = {{"replicates", std::to_string(replicates)},
                   {"seasons", std::to_string(seasons)},
                   {"max_playoff_streak", std::to_string(r.overall_max_playoff)},
                   {"max_non_playoff_streak", std::to_string(r.overall_max_non_playoff)}};
  } else if (name == "index_trajectories") {
    const int seasons = opts.seasons ? opts.seasons : 100;
    auto teams = opts.teams;
    if (teams.empty()) {
      Rng pick = Rng(seed).fork("trajectory-teams");
      const int a = static_cast<int>(pick.below(static_cast<std::uint64_t>(cfg.n_teams)));
      int b = static_cast<int>(pick.below(static_cast<std::uint64_t>(cfg.n_teams - 1)));
      if (b >= a) ++b;
      teams = {a, b};
    }
    const auto r = index_trajectories(teams, seasons, cfg, seed);
    csv << "season,team,lottery_index,result,pick\n";
    for (const auto &p : r)
      csv << p.season << ',' << sim::team_name(p.team) << ',' << p.index << ','
          << to_string(p.result) << ',' << p.pick << '\n';
    std::string names;
    for (int t : teams) names += (names.empty() ? "" : " ") + sim::team_name(t);
    rep.summary = {{"seasons", std::to_string(seasons)}, {"teams", names}};
  } else if (name == "manipulation_benefit") {
    const int seasons = opts.seasons ? opts.seasons : 1000;
    const auto r = manipulation_benefit(seasons, cfg, seed);
    csv << "season,pool,top_tickets,delta_paired,gain,delta_swap,gain_swap\n";
    for (const auto &m : r.seasons)
      csv << m.season << ',' << m.pool << ',' << m.top_tickets << ',' << m.delta_paired << ','
          << fmt(m.gain, 8) << ',' << m.delta_swap << ',' << fmt(m.gain_swap, 8) << '\n';
    rep.summary = {{"seasons", std::to_string(seasons)},
                   {"skipped_empty_pool", std::to_string(r.skipped)},
                   {"mean_pool", fmt(r.mean_pool, 1)},
                   {"mean_top_tickets", fmt(r.mean_top, 1)},
                   {"mean_delta", fmt(r.paired.mean_delta, 1)},
                   {"mean_gain", fmt(r.paired.mean_gain)},
                   {"max_gain", fmt(r.paired.max_gain)},
                   {"share_seasons_gain_below_1.5pct", fmt(r.paired.share_below_1_5pct, 4)},
                   {"swap_mean_delta", fmt(r.swap.mean_delta, 1)},
                   {"swap_mean_gain", fmt(r.swap.mean_gain)},
                   {"swap_max_gain", fmt(r.swap.max_gain)},
                   {"swap_share_seasons_gain_below_1.5pct", fmt(r.swap.share_below_1_5pct, 4)}};
  } else {
    throw ArgumentError("unknown experiment '" + name + "'");
  }
  rep.csv = csv.str();
  return rep;
}

} // namespace cola::experiments
