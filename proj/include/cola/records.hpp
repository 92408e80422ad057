#ifndef COLA_RECORDS_HPP
#define COLA_RECORDS_HPP

#include "cola/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cola {

/// A comma-separated table: header row, then records. Blank lines and lines
/// starting with '#' are skipped; `comments` keeps the latter.
struct CsvTable {
  std::vector<std::string> header;
  struct Row {
    std::size_t line = 0;
    std::vector<std::string> fields;
  };
  std::vector<Row> rows;
  std::vector<std::string> comments;

  /// Column position, or ParseError naming the missing column.
  std::size_t column(const std::string &name) const;
  bool has_column(const std::string &name) const;
};

CsvTable parse_csv(const std::string &text);
CsvTable read_csv(const std::filesystem::path &path);

long long parse_integer(const std::string &field, std::size_t line, const char *what);
double parse_real(const std::string &field, std::size_t line, const char *what);

/// Ledger snapshot: `team_id,lottery_index`.
std::vector<TeamLedger> parse_ledgers(const CsvTable &table);
void write_ledgers(std::ostream &out, const std::vector<TeamLedger> &ledgers);

/// Draft order: `pick,team_id,holder,lottery_winner`.
void write_draft_order(std::ostream &out, const DraftOrder &order);

/**
 * Pre-draft snapshot consumed by the `lottery` command. Columns:
 * team_id, lottery_index, result, wins, and optionally opted_out (0/1),
 * pick_holder (blank = own pick), protection (none/top_four) and pick_won
 * (a lottery result already known, for post-draft bookkeeping).
 */
struct LotteryState {
  std::vector<TeamLedger> ledgers;
  std::vector<SeasonOutcome> outcomes;
  std::vector<PickOwnership> ownerships;
};

LotteryState parse_lottery_state(const CsvTable &table);

void write_file(const std::filesystem::path &path, const std::string &contents);

} // namespace cola

#endif
