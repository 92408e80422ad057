#include "cola/transition.hpp"

#include "cola/error.hpp"
#include "cola/mechanism.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace cola {

std::vector<HistoryEvent> parse_event_log(const std::string &text, int epoch) {
  const auto table = parse_csv(text);
  if (table.header.empty()) return {};
  const auto season = table.column("season");
  const auto team = table.column("team_id");
  const auto result = table.column("result");
  const auto pick = table.column("pick_won");

  std::vector<HistoryEvent> events;
  for (const auto &row : table.rows) {
    HistoryEvent ev;
    ev.season = static_cast<int>(parse_integer(row.fields[season], row.line, "season"));
    ev.outcome.team_id = row.fields[team];
    if (ev.outcome.team_id.empty()) throw ParseError("empty team_id", row.line);
    try {
      ev.outcome.result = parse_result(row.fields[result]);
    } catch (const ArgumentError &e) {
      throw ParseError(e.what(), row.line);
    }
    if (!row.fields[pick].empty()) {
      const auto p = parse_integer(row.fields[pick], row.line, "pick_won");
      if (p < 1 || p > 4) throw ParseError("pick_won must be in 1..4", row.line);
      ev.outcome.pick_won = static_cast<int>(p);
    }
    events.push_back(std::move(ev));
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const auto &a, const auto &b) { return a.season < b.season; });
  validate_history(events, epoch);
  return events;
}

std::vector<HistoryEvent> load_event_log(const std::filesystem::path &path, int epoch) {
  return parse_event_log(read_file(path), epoch);
}

void validate_history(const std::vector<HistoryEvent> &events, int epoch) {
  std::map<int, std::vector<const SeasonOutcome *>> by_season;
  for (const auto &e : events) by_season[e.season].push_back(&e.outcome);
  if (by_season.empty()) return;

  int expected = epoch;
  for (const auto &[season, outcomes] : by_season) {
    const auto where = "season " + std::to_string(season) + ": ";
    if (season != expected)
      throw ValidationError(where + "seasons must be contiguous from " + std::to_string(epoch) +
                            " (expected " + std::to_string(expected) + ")");
    ++expected;

    std::set<TeamId> teams;
    std::array<int, 6> counts{};
    std::set<int> picks;
    for (const auto *o : outcomes) {
      if (!teams.insert(o->team_id).second)
        throw ValidationError(where + "team '" + o->team_id + "' has more than one record");
      ++counts[static_cast<int>(o->result)];
      if (o->pick_won) {
        if (is_playoff(o->result))
          throw ValidationError(where + "playoff team '" + o->team_id + "' cannot win pick " +
                                std::to_string(*o->pick_won));
        if (!picks.insert(*o->pick_won).second)
          throw ValidationError(where + "pick " + std::to_string(*o->pick_won) +
                                " won more than once");
      }
    }
    for (Result r : kAllResults) {
      if (!is_playoff(r)) continue;
      const int want = kPlayoffResultCounts[static_cast<int>(r)];
      if (counts[static_cast<int>(r)] != want)
        throw ValidationError(where + "expected exactly " + std::to_string(want) + " " +
                              std::string(to_string(r)) + ", found " +
                              std::to_string(counts[static_cast<int>(r)]));
    }
  }
}

std::vector<TeamLedger> replay_history(const std::vector<HistoryEvent> &events,
                                       const MechanismConfig &cfg) {
  std::vector<TeamLedger> ledgers;
  std::unordered_map<TeamId, std::size_t> pos;
  for (const auto &e : events)
    if (pos.emplace(e.outcome.team_id, ledgers.size()).second)
      ledgers.push_back({e.outcome.team_id, 0});

  // History predates the four-pick lottery in places; pick 4 still counts.
  MechanismConfig history_cfg = cfg;
  history_cfg.lottery_scope = std::max(cfg.lottery_scope, 4);
  if (static_cast<int>(history_cfg.pick_diminish.size()) < history_cfg.lottery_scope)
    throw ConfigError("pick_diminish must cover picks 1..4 for history replay");

  for (auto first = events.begin(); first != events.end();) {
    auto last = std::find_if(first, events.end(),
                             [&](const auto &e) { return e.season != first->season; });
    std::vector<TeamLedger> season_ledgers;
    std::vector<SeasonOutcome> outcomes;
    for (auto it = first; it != last; ++it) {
      season_ledgers.push_back(ledgers[pos.at(it->outcome.team_id)]);
      outcomes.push_back(it->outcome);
    }
    auto updated = increment_indices(season_ledgers, outcomes, LineLevel::no_move, history_cfg);
    updated = apply_postseason(updated, outcomes, LineLevel::no_move, history_cfg);
    for (const auto &l : updated) ledgers[pos.at(l.team_id)] = l;
    first = last;
  }
  return ledgers;
}

ReferenceVector parse_reference(const std::string &text) {
  const auto table = parse_csv(text);
  ReferenceVector ref;
  for (const auto &c : table.comments)
    if (c.rfind("snapshot:", 0) == 0) {
      ref.label = c.substr(9);
      ref.label.erase(0, ref.label.find_first_not_of(' '));
    }
  if (!table.header.empty()) ref.entries = parse_ledgers(table);
  return ref;
}

ReferenceVector load_reference(const std::filesystem::path &path) {
  return parse_reference(read_file(path));
}

std::vector<LedgerDelta> compare_to_reference(const std::vector<TeamLedger> &ledgers,
                                              const ReferenceVector &reference) {
  std::unordered_map<TeamId, Tickets> actual;
  for (const auto &l : ledgers) actual[l.team_id] = l.lottery_index;
  if (actual.size() != reference.entries.size())
    throw DataError("team sets differ: " + std::to_string(actual.size()) + " ledgers vs " +
                    std::to_string(reference.entries.size()) + " reference entries");

  std::vector<LedgerDelta> deltas;
  for (const auto &r : reference.entries) {
    auto it = actual.find(r.team_id);
    if (it == actual.end())
      throw DataError("reference team '" + r.team_id + "' has no ledger");
    if (it->second != r.lottery_index) deltas.push_back({r.team_id, it->second, r.lottery_index});
  }
  return deltas;
}

} // namespace cola
