#include "cola/records.hpp"

#include "cola/config.hpp"
#include "cola/error.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace cola {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

} // namespace

std::size_t CsvTable::column(const std::string &name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ParseError("missing column '" + name + "'", 1);
}

bool CsvTable::has_column(const std::string &name) const {
  for (const auto &h : header)
    if (h == name) return true;
  return false;
}

CsvTable parse_csv(const std::string &text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped.front() == '#') {
      t.comments.push_back(trim(stripped.substr(1)));
      continue;
    }
    auto fields = split(stripped);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size())
      throw ParseError("expected " + std::to_string(t.header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       lineno);
    t.rows.push_back({lineno, std::move(fields)});
  }
  return t;
}

CsvTable read_csv(const std::filesystem::path &path) { return parse_csv(read_file(path)); }

long long parse_integer(const std::string &field, std::size_t line, const char *what) {
  long long v = 0;
  const auto *end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end || field.empty())
    throw ParseError(std::string(what) + ": '" + field + "' is not an integer", line);
  return v;
}

double parse_real(const std::string &field, std::size_t line, const char *what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception &) {
    throw ParseError(std::string(what) + ": '" + field + "' is not a number", line);
  }
}

std::vector<TeamLedger> parse_ledgers(const CsvTable &table) {
  const auto team = table.column("team_id");
  const auto index = table.column("lottery_index");
  std::vector<TeamLedger> out;
  std::unordered_set<TeamId> seen;
  for (const auto &row : table.rows) {
    TeamLedger l{row.fields[team], parse_integer(row.fields[index], row.line, "lottery_index")};
    if (l.team_id.empty()) throw ParseError("empty team_id", row.line);
    if (l.lottery_index < 0) throw ParseError("lottery_index must be non-negative", row.line);
    if (!seen.insert(l.team_id).second)
      throw ParseError("duplicate team '" + l.team_id + "'", row.line);
    out.push_back(std::move(l));
  }
  return out;
}

void write_ledgers(std::ostream &out, const std::vector<TeamLedger> &ledgers) {
  out << "team_id,lottery_index\n";
  for (const auto &l : ledgers) out << l.team_id << ',' << l.lottery_index << '\n';
}

void write_draft_order(std::ostream &out, const DraftOrder &order) {
  out << "pick,team_id,holder,lottery_winner\n";
  for (const auto &s : order)
    out << s.pick << ',' << s.team_id << ',' << s.holder << ',' << (s.lottery_winner ? 1 : 0)
        << '\n';
}

LotteryState parse_lottery_state(const CsvTable &table) {
  LotteryState st;
  st.ledgers = parse_ledgers(table);
  const auto result = table.column("result");
  const auto wins = table.column("wins");
  const bool has_opt = table.has_column("opted_out");
  const bool has_holder = table.has_column("pick_holder");
  const bool has_prot = table.has_column("protection");
  const bool has_pick = table.has_column("pick_won");

  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto &row = table.rows[i];
    SeasonOutcome o;
    o.team_id = st.ledgers[i].team_id;
    try {
      o.result = parse_result(row.fields[result]);
    } catch (const ArgumentError &e) {
      throw ParseError(e.what(), row.line);
    }
    o.wins = static_cast<int>(parse_integer(row.fields[wins], row.line, "wins"));
    if (has_opt) {
      const auto &f = row.fields[table.column("opted_out")];
      if (f != "0" && f != "1" && !f.empty())
        throw ParseError("opted_out must be 0 or 1", row.line);
      o.opted_out = f == "1";
    }
    if (has_pick && !row.fields[table.column("pick_won")].empty()) {
      const auto p = parse_integer(row.fields[table.column("pick_won")], row.line, "pick_won");
      if (p < 1) throw ParseError("pick_won must be positive", row.line);
      o.pick_won = static_cast<int>(p);
    }
    if (has_holder && !row.fields[table.column("pick_holder")].empty()) {
      PickOwnership own{o.team_id, row.fields[table.column("pick_holder")], Protection::none};
      if (has_prot) {
        try {
          own.protection = parse_protection(row.fields[table.column("protection")]);
        } catch (const ArgumentError &e) {
          throw ParseError(e.what(), row.line);
        }
      }
      st.ownerships.push_back(std::move(own));
    }
    st.outcomes.push_back(std::move(o));
  }
  return st;
}

void write_file(const std::filesystem::path &path, const std::string &contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

} // namespace cola
