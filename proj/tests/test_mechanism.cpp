#include "cola/error.hpp"
#include "cola/mechanism.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

using namespace cola;
using cola::testing::ledgers_for;
using cola::testing::league_outcomes;

namespace {

std::vector<SeasonOutcome> one_team(Result r) {
  SeasonOutcome o;
  o.team_id = "A";
  o.result = r;
  return {o};
}

Tickets index_of(const std::vector<TeamLedger> &ls, const TeamId &id) {
  for (const auto &l : ls)
    if (l.team_id == id) return l.lottery_index;
  FAIL("missing team " << id);
  return -1;
}

} // namespace

TEST_SUITE("mechanism") {

TEST_CASE("round half up") {
  CHECK(round_half_up(437.5) == 438);
  CHECK(round_half_up(593.75) == 594);
  CHECK(round_half_up(1406.25) == 1406);
  CHECK(round_half_up(0.0) == 0);
  CHECK(round_half_up(2.5) == 3);
}

TEST_CASE("increment follows the line") {
  const MechanismConfig cfg;
  const std::vector<TeamLedger> l = {{"A", 6109}};

  CHECK(increment_indices(l, one_team(Result::missed_playoffs), LineLevel::no_move, cfg)[0]
            .lottery_index == 7109);
  CHECK(increment_indices(l, one_team(Result::lost_first_round), LineLevel::no_move, cfg)[0]
            .lottery_index == 6109);
  // R1 losers are inside the line and eight teams are still excluded.
  CHECK(increment_indices(l, one_team(Result::lost_first_round), LineLevel::include_R1_losers,
                          cfg)[0]
            .lottery_index == 7109);
  CHECK(increment_indices(l, one_team(Result::missed_playoffs), LineLevel::include_CF_losers,
                          cfg)[0]
            .lottery_index == 6109);

  MechanismConfig always = cfg;
  always.strong_year_rule = StrongYearRule::always_alpha;
  CHECK(increment_indices(l, one_team(Result::missed_playoffs), LineLevel::include_all,
                          always)[0]
            .lottery_index == 7109);
  CHECK(increment_indices(l, one_team(Result::champion), LineLevel::include_finals_loser,
                          always)[0]
            .lottery_index == 6109);

  CHECK_THROWS_AS(increment_indices(l, {}, LineLevel::no_move, cfg), ConfigError);
}

TEST_CASE("binary rule grants alpha only while eight or more are excluded") {
  const MechanismConfig cfg;
  for (int lv = 0; lv < 6; ++lv) {
    const auto line = static_cast<LineLevel>(lv);
    CHECK(line_grants_increment(line, cfg) == (excluded_team_count(line) >= 8));
  }
}

TEST_CASE("excluded counts come from the bracket and skip 5 to 7") {
  std::set<int> seen;
  for (int lv = 0; lv < 6; ++lv) {
    const auto line = static_cast<LineLevel>(lv);
    int excluded = 0;
    for (auto r : kAllResults)
      if (is_playoff(r) && !on_lottery_side(r, line))
        excluded += kPlayoffResultCounts[static_cast<int>(r)];
    CHECK(excluded_team_count(line) == excluded);
    seen.insert(excluded);
  }
  CHECK(seen == std::set<int>{0, 1, 2, 4, 8, 16});
  for (int k = 5; k <= 7; ++k) CHECK(seen.count(k) == 0);
}

TEST_CASE("pick diminishment") {
  const MechanismConfig cfg;
  CHECK(diminish_for_pick(1750, 1, cfg) == 0);
  CHECK(diminish_for_pick(1750, 2, cfg) == 438);
  CHECK(diminish_for_pick(3612, 4, cfg) == 2709);
  CHECK(diminish_for_pick(1000, 3, cfg) == 500);
  for (int p = 1; p <= 4; ++p) CHECK(diminish_for_pick(0, p, cfg) == 0);
  CHECK_THROWS_AS(diminish_for_pick(1000, 0, cfg), ArgumentError);
  CHECK_THROWS_AS(diminish_for_pick(1000, 5, cfg), ArgumentError);

  for (Tickets idx : {1, 7, 999, 1750, 7109, 123457})
    for (int p = 1; p < 4; ++p)
      CHECK(diminish_for_pick(idx, p, cfg) <= diminish_for_pick(idx, p + 1, cfg));
}

TEST_CASE("playoff diminishment") {
  const MechanismConfig cfg;
  CHECK(diminish_for_playoff(3938, Result::lost_conf_finals, cfg) == 1969);
  CHECK(diminish_for_playoff(2375, Result::runner_up, cfg) == 594);
  CHECK(diminish_for_playoff(1225, Result::champion, cfg) == 0);
  CHECK(diminish_for_playoff(1875, Result::lost_second_round, cfg) == 1406);
  CHECK(diminish_for_playoff(1692, Result::lost_first_round, cfg) == 1692);
  CHECK_THROWS_AS(diminish_for_playoff(1000, Result::missed_playoffs, cfg), ArgumentError);

  for (Tickets idx : {3, 1001, 2375, 98765}) {
    CHECK(diminish_for_playoff(idx, Result::champion, cfg) == 0);
    for (int r = static_cast<int>(Result::champion); r > 1; --r)
      CHECK(diminish_for_playoff(idx, static_cast<Result>(r), cfg) <=
            diminish_for_playoff(idx, static_cast<Result>(r - 1), cfg));
  }
}

TEST_CASE("win probability") {
  CHECK(win_probability(7109, 49461) == doctest::Approx(7109.0 / 49461.0).epsilon(1e-15));
  CHECK(std::round(win_probability(7109, 49461) * 1000.0) / 10.0 == doctest::Approx(14.4));
  CHECK(win_probability(0, 49461) == 0.0);
  CHECK(win_probability(49461, 49461) == 1.0);
  CHECK_THROWS_AS(win_probability(0, 0), EmptyLotteryError);
}

TEST_CASE("eligibility") {
  auto outcomes = league_outcomes();
  const auto ledgers = ledgers_for(outcomes);
  outcomes[1].opted_out = true;
  const std::vector<PickOwnership> own = {{"F03", "F20", Protection::none},
                                          {"F04", "F21", Protection::top_four}};
  const auto entrants = lottery_eligibility(ledgers, outcomes, own, LineLevel::no_move);

  std::map<TeamId, Tickets> got;
  for (const auto &e : entrants) got[e.team_id] = e.tickets;
  CHECK(got.size() == 12);
  CHECK(got.count("F02") == 0); // opted out
  CHECK(got.count("F03") == 0); // unprotected pick traded away
  CHECK(got.at("F04") == 1500); // protected pick stays in
  CHECK(got.count("F15") == 0); // playoff team
  CHECK(got.at("F01") == 0);

  const auto wider = lottery_eligibility(ledgers, outcomes, own, LineLevel::include_R1_losers);
  CHECK(wider.size() == 20);
}

TEST_CASE("single entrant wins") {
  MechanismConfig cfg;
  cfg.lottery_scope = 1;
  Rng rng(3);
  const std::vector<LotteryEntrant> e = {{"A", 5}};
  CHECK(run_lottery(e, rng, cfg) == std::vector<TeamId>{"A"});
}

TEST_CASE("draw frequencies match ticket shares") {
  MechanismConfig cfg;
  cfg.lottery_scope = 1;
  const std::vector<LotteryEntrant> e = {{"A", 1000}, {"B", 1000}, {"C", 2000}};
  Rng rng(11);
  const int n = 100000;
  int c = 0;
  for (int i = 0; i < n; ++i) c += run_lottery(e, rng, cfg)[0] == "C";
  // exact enumeration: 2000 of 4000 tickets
  CHECK(std::abs(c / double(n) - 0.5) < 0.01);

  cfg.lottery_scope = 2;
  const std::vector<LotteryEntrant> pair = {{"A", 1}, {"B", 1}};
  int ab = 0;
  for (int i = 0; i < n; ++i) {
    const auto w = run_lottery(pair, rng, cfg);
    REQUIRE(w.size() == 2);
    REQUIRE(w[0] != w[1]);
    ab += w[0] == "A";
  }
  CHECK(std::abs(ab / double(n) - 0.5) < 0.01);
}

TEST_CASE("lottery errors and edge cases") {
  MechanismConfig cfg;
  Rng rng(5);
  const std::vector<LotteryEntrant> three = {{"A", 1}, {"B", 2}, {"C", 3}};
  CHECK_THROWS_AS(run_lottery(three, rng, cfg), InsufficientEntrantsError);
  CHECK_THROWS_AS(run_lottery(std::vector<LotteryEntrant>{}, rng, cfg),
                  InsufficientEntrantsError);
  const std::vector<LotteryEntrant> zeros = {{"A", 0}, {"B", 0}, {"C", 0}, {"D", 0}};
  CHECK_THROWS_AS(run_lottery(zeros, rng, cfg), EmptyLotteryError);

  const std::vector<LotteryEntrant> some_zero = {{"A", 0}, {"B", 4}, {"C", 0}, {"D", 1},
                                                 {"E", 2}, {"F", 9}};
  for (int i = 0; i < 200; ++i) {
    const auto w = run_lottery(some_zero, rng, cfg);
    CHECK(std::find(w.begin(), w.end(), "A") == w.end());
    CHECK(std::find(w.begin(), w.end(), "C") == w.end());
  }

  cfg.lottery_scope = 0;
  CHECK(run_lottery(three, rng, cfg).empty());
}

TEST_CASE("same seed, same draw") {
  const MechanismConfig cfg;
  std::vector<LotteryEntrant> e;
  for (int i = 0; i < 14; ++i) e.push_back({"T" + std::to_string(i), 100 * (i + 1)});
  Rng a(77), b(77);
  for (int i = 0; i < 50; ++i) CHECK(run_lottery(e, a, cfg) == run_lottery(e, b, cfg));
}

TEST_CASE("traded pick resolution") {
  const std::vector<PickOwnership> own = {{"A", "B", Protection::top_four},
                                          {"C", "D", Protection::none}};
  const auto self = resolve_traded_pick("E", own);
  CHECK(self.benefiting_team == "E");
  CHECK(self.ledger_target == "E");
  const auto reverted = resolve_traded_pick("A", own);
  CHECK(reverted.benefiting_team == "A");
  CHECK(reverted.ledger_target == "A");
  CHECK_THROWS_AS(resolve_traded_pick("C", own), DataError);
}

TEST_CASE("opt-out cost") {
  const MechanismConfig cfg;
  CHECK(apply_opt_out({"A", 5000}, Result::missed_playoffs, LineLevel::no_move, cfg)
            .lottery_index == 3000);
  CHECK(apply_opt_out({"A", 1500}, Result::missed_playoffs, LineLevel::no_move, cfg)
            .lottery_index == 0);
  CHECK(apply_opt_out({"A", 0}, Result::missed_playoffs, LineLevel::no_move, cfg)
            .lottery_index == 0);
  CHECK(apply_opt_out({"A", 5000}, Result::lost_first_round, LineLevel::include_R1_losers, cfg)
            .lottery_index == 3000);
  CHECK_THROWS_AS(
      apply_opt_out({"A", 5000}, Result::lost_first_round, LineLevel::no_move, cfg),
      ArgumentError);
}

TEST_CASE("remaining picks") {
  Rng rng(1);
  const std::vector<SlotCandidate> by_wins = {{"X", true, 30, 0}, {"Y", true, 20, 0}};
  CHECK(assign_remaining_picks(by_wins, RemainingPickOrder::by_standings, rng) ==
        std::vector<TeamId>{"Y", "X"});

  const std::vector<SlotCandidate> by_index = {{"X", true, 10, 2500}, {"Y", true, 30, 4000}};
  CHECK(assign_remaining_picks(by_index, RemainingPickOrder::by_lottery_index, rng) ==
        std::vector<TeamId>{"Y", "X"});

  const std::vector<SlotCandidate> sides = {{"P", false, 5, 9000}, {"L", true, 60, 0}};
  CHECK(assign_remaining_picks(sides, RemainingPickOrder::by_standings, rng) ==
        std::vector<TeamId>{"L", "P"});

  std::vector<SlotCandidate> ties;
  for (int i = 0; i < 10; ++i) ties.push_back({"T" + std::to_string(i), true, 41, 0});
  Rng a(9), b(9);
  const auto first = assign_remaining_picks(ties, RemainingPickOrder::by_standings, a);
  CHECK(first == assign_remaining_picks(ties, RemainingPickOrder::by_standings, b));
  std::set<std::vector<TeamId>> orders;
  Rng c(10);
  for (int i = 0; i < 20; ++i)
    orders.insert(assign_remaining_picks(ties, RemainingPickOrder::by_standings, c));
  CHECK(orders.size() > 1);
}

TEST_CASE("season conserves tickets away from events") {
  const MechanismConfig cfg;
  const auto outcomes = league_outcomes();
  const auto before = ledgers_for(outcomes, 700);
  Rng rng(2024);
  const auto res = apply_season(before, outcomes, {}, LineLevel::no_move, rng, cfg);

  REQUIRE(res.draft_order.size() == 30);
  std::set<TeamId> teams;
  for (std::size_t i = 0; i < res.draft_order.size(); ++i) {
    CHECK(res.draft_order[i].pick == static_cast<int>(i) + 1);
    CHECK(res.draft_order[i].lottery_winner == (i < 4));
    teams.insert(res.draft_order[i].team_id);
  }
  CHECK(teams.size() == 30);

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto &o = res.outcomes[i];
    const Tickets was = before[i].lottery_index;
    const Tickets now = index_of(res.ledgers, o.team_id);
    if (o.result == Result::missed_playoffs) {
      if (o.pick_won)
        CHECK(now == round_half_up((was + 1000) * cfg.pick_fraction(*o.pick_won)));
      else
        CHECK(now == was + 1000);
    } else {
      CHECK_FALSE(o.pick_won);
      CHECK(now == round_half_up(was * cfg.playoff_fraction(o.result)));
    }
  }

  // Non-winners on the lottery side pick 5..14, worst record first.
  for (int p = 5; p < 14; ++p) {
    const auto &a = res.draft_order[p - 1].team_id;
    const auto &b = res.draft_order[p].team_id;
    auto wins = [&](const TeamId &t) {
      return std::find_if(outcomes.begin(), outcomes.end(),
                          [&](const SeasonOutcome &o) { return o.team_id == t; })
          ->wins;
    };
    CHECK(wins(a) <= wins(b));
  }

  Rng again(2024);
  const auto res2 = apply_season(before, outcomes, {}, LineLevel::no_move, again, cfg);
  CHECK(res2.ledgers == res.ledgers);
}

TEST_CASE("protected traded pick reverts to its team") {
  const MechanismConfig cfg;
  auto outcomes = league_outcomes();
  std::vector<TeamLedger> ledgers;
  for (const auto &o : outcomes) ledgers.push_back({o.team_id, 1});
  ledgers[0].lottery_index = 1000000; // F01 is all but certain to win pick 1
  const std::vector<PickOwnership> own = {{"F01", "F30", Protection::top_four}};
  Rng rng(8);
  const auto res = run_draft(ledgers, outcomes, own, LineLevel::no_move, rng, cfg);
  CHECK(res.draft_order[0].team_id == "F01");
  CHECK(res.draft_order[0].holder == "F01");
  CHECK(index_of(res.ledgers, "F01") == 0);
}

TEST_CASE("unprotected traded pick is slotted for its holder") {
  const MechanismConfig cfg;
  auto outcomes = league_outcomes();
  auto ledgers = ledgers_for(outcomes, 1000);
  const std::vector<PickOwnership> own = {{"F01", "F30", Protection::none}};
  Rng rng(8);
  const auto res = run_draft(ledgers, outcomes, own, LineLevel::no_move, rng, cfg);
  bool found = false;
  for (const auto &s : res.draft_order)
    if (s.team_id == "F01") {
      found = true;
      CHECK_FALSE(s.lottery_winner);
      CHECK(s.holder == "F30");
    }
  CHECK(found);
}

TEST_CASE("opting out skips the draw and costs two increments") {
  const MechanismConfig cfg;
  auto outcomes = league_outcomes();
  auto ledgers = ledgers_for(outcomes, 0);
  for (auto &l : ledgers) l.lottery_index = 3000;
  outcomes[0].opted_out = true;
  Rng rng(4);
  const auto res = run_draft(ledgers, outcomes, {}, LineLevel::no_move, rng, cfg);
  CHECK(index_of(res.ledgers, "F01") == 1000);
  for (int p = 0; p < 4; ++p) CHECK(res.draft_order[p].team_id != "F01");
}

TEST_CASE("season validation") {
  const MechanismConfig cfg;
  std::vector<SeasonOutcome> all_missed = league_outcomes();
  for (auto &o : all_missed) o.result = Result::missed_playoffs;
  const auto ledgers = ledgers_for(all_missed);
  Rng rng(1);
  CHECK_THROWS_AS(apply_season(ledgers, all_missed, {}, LineLevel::no_move, rng, cfg),
                  ValidationError);

  auto dup = league_outcomes();
  dup[1].team_id = dup[0].team_id;
  CHECK_THROWS_AS(validate_season(ledgers_for(league_outcomes()), dup), ConfigError);
}

TEST_CASE("postseason bookkeeping with known picks") {
  const MechanismConfig cfg;
  auto outcomes = league_outcomes();
  const auto ledgers = ledgers_for(outcomes, 250);
  outcomes[3].pick_won = 2;
  const auto after = apply_postseason(ledgers, outcomes, LineLevel::no_move, cfg);
  CHECK(after[3].lottery_index == round_half_up(750 * 0.25));
  CHECK(after[0].lottery_index == 0);
  CHECK(after[29].lottery_index == 0);                     // champion
  CHECK(after[28].lottery_index == round_half_up(7000 * 0.25)); // runner-up
  CHECK(after[14].lottery_index == 3500);                  // first-round loser
}

} // TEST_SUITE
