#include "cola/types.hpp"

#include "cola/error.hpp"

#include <string>

namespace cola {

namespace {
constexpr std::array<std::string_view, 6> kResultNames = {
    "missed_playoffs",  "lost_first_round", "lost_second_round",
    "lost_conf_finals", "runner_up",        "champion"};

constexpr std::array<std::string_view, 6> kLineNames = {
    "no_move",          "include_R1_losers",    "include_R2_losers",
    "include_CF_losers", "include_finals_loser", "include_all"};
} // namespace

std::string_view to_string(Result r) { return kResultNames[static_cast<int>(r)]; }

Result parse_result(std::string_view s) {
  for (std::size_t i = 0; i < kResultNames.size(); ++i)
    if (kResultNames[i] == s) return static_cast<Result>(i);
  throw ArgumentError("unknown season result '" + std::string(s) + "'");
}

std::string_view to_string(LineLevel l) { return kLineNames[static_cast<int>(l)]; }

LineLevel parse_line_level(std::string_view s) {
  for (std::size_t i = 0; i < kLineNames.size(); ++i)
    if (kLineNames[i] == s) return static_cast<LineLevel>(i);
  throw ArgumentError("unknown line level '" + std::string(s) + "'");
}

LineLevel line_from_option(int option) {
  if (option < 1 || option > 6)
    throw ArgumentError("survey option must be in 1..6, got " + std::to_string(option));
  return static_cast<LineLevel>(option - 1);
}

int excluded_team_count(LineLevel l) {
  int excluded = 0;
  for (Result r : kAllResults)
    if (!on_lottery_side(r, l)) excluded += kPlayoffResultCounts[static_cast<int>(r)];
  return excluded;
}

std::string_view to_string(Protection p) {
  return p == Protection::none ? "none" : "top_four";
}

Protection parse_protection(std::string_view s) {
  if (s.empty() || s == "none") return Protection::none;
  if (s == "top_four") return Protection::top_four;
  throw ArgumentError("unknown protection '" + std::string(s) +
                      "' (only none and top_four are permitted)");
}

} // namespace cola
