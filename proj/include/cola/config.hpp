#ifndef COLA_CONFIG_HPP
#define COLA_CONFIG_HPP

#include "cola/types.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace cola {

enum class RemainingPickOrder { by_standings, by_lottery_index };
enum class StrongYearRule { binary_8_4, always_alpha };

std::string_view to_string(RemainingPickOrder m);
std::string_view to_string(StrongYearRule r);

/**
 * Tunable parameters of the mechanism. Defaults are the standard settings:
 * alpha 1000, picks retain 0/25/50/75%, playoff rounds retain
 * 0/25/50/75/100% from champion down, opt-out costs two increments, four
 * lottery picks, remaining picks by standings, binary increment rule.
 */
struct MechanismConfig {
  Tickets alpha = 1000;
  /// pick number -> fraction of the index retained after winning that pick
  std::map<int, double> pick_diminish = {{1, 0.00}, {2, 0.25}, {3, 0.50}, {4, 0.75}};
  /// playoff result -> retained fraction (missed_playoffs has no entry)
  std::map<Result, double> playoff_diminish = {{Result::champion, 0.00},
                                               {Result::runner_up, 0.25},
                                               {Result::lost_conf_finals, 0.50},
                                               {Result::lost_second_round, 0.75},
                                               {Result::lost_first_round, 1.00}};
  Tickets opt_out_cost = 2000;
  int lottery_scope = 4;
  RemainingPickOrder remaining_pick_order = RemainingPickOrder::by_standings;
  StrongYearRule strong_year_rule = StrongYearRule::binary_8_4;

  /// Throws ConfigError when an invariant is broken.
  void validate() const;

  double pick_fraction(int pick) const;
  double playoff_fraction(Result r) const;
};

/// Parses a JSON object whose keys are the MechanismConfig field names.
/// Missing keys keep their defaults; a missing opt_out_cost becomes 2*alpha.
MechanismConfig mechanism_config_from_json(const std::string &text);
MechanismConfig load_mechanism_config(const std::filesystem::path &path);
std::string to_json(const MechanismConfig &cfg);

std::string read_file(const std::filesystem::path &path);

} // namespace cola

#endif
