#include "cola/error.hpp"
#include "cola/league.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

using namespace cola;
using namespace cola::sim;

namespace {

std::map<std::pair<int, int>, int> pair_counts(const std::vector<Game> &games) {
  std::map<std::pair<int, int>, int> m;
  for (auto [a, b] : games) ++m[{std::min(a, b), std::max(a, b)}];
  return m;
}

std::vector<int> games_per_team(const std::vector<Game> &games, int n) {
  std::vector<int> c(n);
  for (auto [a, b] : games) ++c[a], ++c[b];
  return c;
}

} // namespace

TEST_SUITE("league") {

TEST_CASE("default coefficients are positive, descending and convex") {
  const auto c = default_draft_coefficients();
  REQUIRE(c.size() == 30);
  CHECK(c[0] == doctest::Approx(0.02));
  for (std::size_t i = 1; i < c.size(); ++i) {
    CHECK(c[i] > 0.0);
    CHECK(c[i] < c[i - 1]);
  }
  for (std::size_t i = 1; i + 1 < c.size(); ++i) CHECK(c[i - 1] - c[i] >= c[i] - c[i + 1]);
}

TEST_CASE("full schedule") {
  Rng rng(1);
  const auto g = build_schedule(30, 82, rng);
  CHECK(g.size() == 1230);
  for (int n : games_per_team(g, 30)) CHECK(n == 82);
  const auto pairs = pair_counts(g);
  CHECK(pairs.size() == 435);
  for (const auto &[p, n] : pairs) {
    CHECK(p.first != p.second);
    CHECK(n >= 2);
  }
  Rng again(1);
  CHECK(build_schedule(30, 82, again) == g);
}

TEST_CASE("toy schedule is a double round robin") {
  Rng rng(2);
  const auto g = build_schedule(4, 6, rng);
  CHECK(g.size() == 12);
  for (const auto &[p, n] : pair_counts(g)) CHECK(n == 2);
}

TEST_CASE("infeasible schedules") {
  Rng rng(3);
  CHECK_THROWS_AS(build_schedule(5, 9, rng), ConfigError);
  CHECK_THROWS_AS(build_schedule(30, 50, rng), ConfigError);
  CHECK_THROWS_AS(build_schedule(1, 2, rng), ConfigError);
}

TEST_CASE("game win rates") {
  Rng rng(4);
  const int n = 100000;
  int even = 0, strong = 0, lopsided = 0;
  for (int i = 0; i < n; ++i) {
    even += simulate_game(50, 50, rng) == 0;
    strong += simulate_game(75, 25, rng) == 0;
    lopsided += simulate_game(100, 1e-9, rng) == 0;
  }
  CHECK(std::abs(even / double(n) - 0.5) < 0.01);
  CHECK(std::abs(strong / double(n) - 0.75) < 0.01);
  CHECK(lopsided == n);
  CHECK_THROWS_AS(simulate_game(0, 1, rng), ArgumentError);
  CHECK_THROWS_AS(simulate_game(1, -1, rng), ArgumentError);
}

TEST_CASE("bracket results") {
  std::vector<int> seeded(16);
  std::iota(seeded.begin(), seeded.end(), 0);
  const std::vector<double> equal(16, 10.0);
  Rng rng(5);
  std::vector<int> titles(16);
  const int n = 100000;
  for (int t = 0; t < n; ++t) {
    const auto res = simulate_playoffs(seeded, equal, rng);
    std::array<int, 6> counts{};
    for (std::size_t i = 0; i < res.size(); ++i) {
      ++counts[static_cast<int>(res[i])];
      if (res[i] == Result::champion) ++titles[i];
    }
    REQUIRE(counts == kPlayoffResultCounts);
  }
  for (int c : titles) CHECK(std::abs(c / double(n) - 1.0 / 16.0) < 0.01);

  std::vector<double> one_strong(16, 1.0);
  one_strong[9] = 100.0;
  int won = 0;
  for (int t = 0; t < 20000; ++t)
    won += simulate_playoffs(seeded, one_strong, rng)[9] == Result::champion;
  CHECK(won / 20000.0 >= 0.999);
}

TEST_CASE("round one pairs seeds summing to 17") {
  std::vector<int> seeded(16);
  std::iota(seeded.begin(), seeded.end(), 0);
  std::vector<double> s(16, 1e-6);
  // Seeds 1..8 are overwhelming favourites, so they win round one.
  for (int i = 0; i < 8; ++i) s[i] = 100.0;
  Rng rng(6);
  const auto res = simulate_playoffs(seeded, s, rng);
  for (int i = 8; i < 16; ++i) CHECK(res[i] == Result::lost_first_round);
  for (int i = 0; i < 8; ++i) CHECK(res[i] != Result::lost_first_round);
}

TEST_CASE("ranking by wins") {
  Rng rng(7);
  const std::vector<int> wins = {10, 50, 30, 30};
  const auto r = rank_by_wins(wins, rng);
  CHECK(r.front() == 1);
  CHECK(r.back() == 0);
}

TEST_CASE("decay") {
  Rng rng(8);
  double total = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    std::vector<double> s = {100.0};
    apply_decay(s, 0.05, 0.15, rng);
    CHECK(s[0] >= 85.0);
    CHECK(s[0] <= 95.0);
    total += s[0];
  }
  CHECK(std::abs(total / n / 90.0 - 1.0) < 0.01);
  std::vector<double> tiny = {1e-12};
  apply_decay(tiny, 0.05, 0.15, rng);
  CHECK(tiny[0] >= 0.0);
}

TEST_CASE("draft boost") {
  SimConfig cfg;
  CHECK(apply_draft_boost(cfg.s_max, 1, cfg) == cfg.s_max);
  CHECK(apply_draft_boost(50.0, 1, cfg) == doctest::Approx(57.5));
  for (int p = 1; p <= 30; ++p) {
    double prev = 1e9;
    for (double s = 1; s < 100; s += 7) {
      const double gain = apply_draft_boost(s, p, cfg) - s;
      CHECK(gain < prev);
      prev = gain;
    }
  }
  cfg.beta = 1000;
  CHECK(apply_draft_boost(10, 1, cfg) == cfg.s_max);
  CHECK_THROWS_AS(apply_draft_boost(50, 0, SimConfig{}), ArgumentError);
  CHECK_THROWS_AS(apply_draft_boost(50, 31, SimConfig{}), ArgumentError);
}

TEST_CASE("spreading keeps the ranking and stays inside the old range") {
  Rng rng(9);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> s(30);
    for (auto &x : s) x = rng.uniform(1, 100);
    const auto before = s;
    spread_strengths(s, rng);
    const auto [lo, hi] = std::minmax_element(before.begin(), before.end());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s[i] >= *lo);
      CHECK(s[i] <= *hi);
      for (std::size_t j = 0; j < s.size(); ++j)
        if (before[i] < before[j]) CHECK(s[i] <= s[j]);
    }
  }
}

TEST_CASE("two-team spreading lands on the drawn bounds") {
  std::vector<double> s = {10.0, 90.0};
  Rng rng(10), replay(10);
  spread_strengths(s, rng);
  const double a = replay.uniform(10, 90), b = replay.uniform(10, 90);
  CHECK(s[0] == doctest::Approx(std::min(a, b)));
  CHECK(s[1] == doctest::Approx(std::max(a, b)));

  std::vector<double> flat(5, 42.0);
  spread_strengths(flat, rng);
  CHECK(flat == std::vector<double>(5, 42.0));
}

TEST_CASE("initial state") {
  const SimConfig cfg;
  const auto st = make_initial_state(cfg, 11);
  REQUIRE(st.strengths.size() == 30);
  std::vector<int> order(30);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return st.strengths[a] < st.strengths[b]; });
  CHECK(st.ledgers[order.front()].lottery_index == 3000);
  CHECK(st.ledgers[order.back()].lottery_index == 0);
  for (int i = 1; i < 30; ++i)
    CHECK(st.ledgers[order[i]].lottery_index <= st.ledgers[order[i - 1]].lottery_index);
  for (double s : st.strengths) {
    CHECK(s >= 5.0);
    CHECK(s < 100.0);
  }
  CHECK(st.ledgers[0].team_id == "T01");
}

TEST_CASE("seasons") {
  const SimConfig cfg;
  auto st = make_initial_state(cfg, 12);
  for (int season = 0; season < 60; ++season) {
    const auto rec = simulate_season(st, cfg);
    CHECK(rec.season == season + 1);
    CHECK(std::accumulate(rec.wins.begin(), rec.wins.end(), 0) == 1230);
    int playoff = 0;
    for (auto r : rec.results) playoff += is_playoff(r);
    CHECK(playoff == 16);
    auto picks = rec.picks;
    std::sort(picks.begin(), picks.end());
    for (int i = 0; i < 30; ++i) CHECK(picks[i] == i + 1);
    for (double s : st.strengths) {
      CHECK(s > 0.0);
      CHECK(s <= cfg.s_max);
    }
    for (std::size_t i = 0; i < 30; ++i) {
      CHECK(rec.ledgers[i].lottery_index >= 0);
      if (rec.results[i] == Result::champion) CHECK(rec.ledgers[i].lottery_index == 0);
    }

    // The simulator's draft is the standalone mechanism on the same inputs.
    Rng draft(rec.draft_seed);
    const auto standalone = apply_season(rec.ledgers_before, season_outcomes(rec), {},
                                         LineLevel::no_move, draft, cfg.mechanism);
    CHECK(standalone.ledgers == rec.ledgers);
  }
  CHECK(st.season_counter == 60);
}

TEST_CASE("same seed, same trajectory") {
  const SimConfig cfg;
  auto a = make_initial_state(cfg, 13), b = make_initial_state(cfg, 13);
  std::ostringstream oa, ob;
  for (int i = 0; i < 100; ++i) {
    write_season_rows(oa, simulate_season(a, cfg));
    write_season_rows(ob, simulate_season(b, cfg));
  }
  CHECK(oa.str() == ob.str());
}

TEST_CASE("equal teams draft alike in the long run") {
  SimConfig cfg;
  cfg.initial_strengths.assign(30, 50.0);
  auto st = make_initial_state(cfg, 14);
  for (auto &l : st.ledgers) l.lottery_index = 0;
  std::vector<double> total(30);
  const int seasons = 1000;
  for (int i = 0; i < seasons; ++i) {
    const auto rec = simulate_season(st, cfg);
    for (int t = 0; t < 30; ++t) total[t] += rec.picks[t];
  }
  const auto [lo, hi] = std::minmax_element(total.begin(), total.end());
  CHECK((*hi - *lo) / seasons < 1.5);
}

TEST_CASE("frozen strengths") {
  SimConfig cfg;
  cfg.dynamics_enabled = false;
  auto st = make_initial_state(cfg, 15);
  const auto before = st.strengths;
  simulate_season(st, cfg);
  CHECK(st.strengths == before);
}

TEST_CASE("sim config json") {
  const auto cfg = load_sim_config(cola::testing::data_path("config/sim_default.json"));
  CHECK(cfg.draft_coefficients == default_draft_coefficients());
  CHECK(cfg.beta == 7.5);
  const auto back = sim_config_from_json(to_json(cfg));
  CHECK(back.draft_coefficients == cfg.draft_coefficients);
  CHECK(back.mechanism.alpha == cfg.mechanism.alpha);

  CHECK_THROWS_AS(sim_config_from_json(R"({"n_teams": 20})"), ConfigError);
  CHECK_THROWS_AS(sim_config_from_json(R"({"betta": 1})"), ConfigError);
  CHECK_THROWS_AS(sim_config_from_json(R"({"decay_low": 0.2})"), ConfigError);
  CHECK_THROWS_AS(sim_config_from_json(R"({"mechanism": {"alpha": "x"}})"), ConfigError);
  CHECK_THROWS_AS(sim_config_from_json(R"({"mechanism": {"lottery_scope": 15,
      "pick_diminish": {"1":0,"2":0.1,"3":0.2,"4":0.3,"5":0.4,"6":0.5,"7":0.6,"8":0.65,
      "9":0.7,"10":0.75,"11":0.8,"12":0.85,"13":0.9,"14":0.95,"15":0.97}}})"),
                  ConfigError);
}

} // TEST_SUITE
